import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import descriptor_oracle
from wavemotion.descriptor import (
    CHANNEL_NAMES,
    DEFAULT_CHANNELS,
    STANDARD_SPECS,
    DescriptorOptions,
    PatchSpec,
    check_channels,
    default_scales,
    extract_patch,
    feature_field,
    feature_fields,
    pixel_descriptor,
    read_features,
    write_features,
    zscore,
)
from wavemotion.synthetic import SyntheticSpec, render
from wavemotion.wavelets import HAAR, get_bank

ALL = tuple(CHANNEL_NAMES)


def test_scale_column_of_standard_specs():
    assert [s.scales for s in STANDARD_SPECS] == [1, 1, 1, 1, 1, 2, 2, 2, 1, 2, 2, 3]
    assert all(default_scales(*s.shape) == s.scales for s in STANDARD_SPECS)


def test_patch_spec_parse_and_validate():
    spec = PatchSpec.parse("8x8x4")
    assert spec.shape == (8, 8, 4) and spec.scales == 2 and spec.volume == 256
    assert PatchSpec.parse("4,4,8", scales=1).scales == 1
    with pytest.raises(ValueError):
        PatchSpec.parse("4x4")
    with pytest.raises(ValueError):
        PatchSpec(2, 2, 2, scales=2)
    with pytest.raises(ValueError):
        PatchSpec(0, 4, 4)


def test_check_channels():
    assert check_channels(["LLH", "Leader"]) == ("LLH", "Leader")
    for bad in ([], ["LLH", "LLH"], ["XYZ"]):
        with pytest.raises(ValueError):
            check_channels(bad)


def test_patch_offsets_for_even_and_odd_extents():
    T, H, W = 9, 9, 9
    frames = np.arange(T * H * W, dtype=float).reshape(T, H, W)
    p = extract_patch(frames, (4, 4, 4), PatchSpec(2, 3, 4, scales=1))
    # axis order of the cube is (y, x, t)
    assert p.shape == (2, 3, 4)
    ys = {int(v) // W % H for v in p.ravel()}
    xs = {int(v) % W for v in p.ravel()}
    ts = {int(v) // (H * W) for v in p.ravel()}
    assert ys == {3, 4} and xs == {3, 4, 5} and ts == {2, 3, 4, 5}


def test_patch_reflects_at_borders():
    frames = np.arange(5, dtype=float).reshape(5, 1, 1)
    p = extract_patch(frames, (0, 0, 0), PatchSpec(2, 2, 4, scales=1))
    # t offsets -2..1 around 0 reflect to 1, 0, 0, 1
    assert p[0, 0].tolist() == [1.0, 0.0, 0.0, 1.0]
    with pytest.raises(IndexError):
        extract_patch(frames, (0, 0, 5), PatchSpec(2, 2, 2))


def test_temporal_step_gives_sqrt2_in_llh():
    patch = np.zeros((2, 2, 2))
    patch[:, :, 1] = 1.0
    d = pixel_descriptor(patch, HAAR, PatchSpec(2, 2, 2), channels=ALL)
    got = dict(zip(ALL, d))
    assert got["LLH"] == pytest.approx(math.sqrt(2), abs=1e-12)
    assert got["LLL"] == pytest.approx(math.sqrt(2), abs=1e-12)
    assert got["Leader"] == pytest.approx(math.sqrt(2), abs=1e-12)
    for k in ("LHL", "LHH", "HLL", "HLH", "HHL", "HHH"):
        assert abs(got[k]) <= 1e-12


def test_pixel_descriptor_shape_check():
    with pytest.raises(ValueError):
        pixel_descriptor(np.zeros((4, 4, 2)), spec=PatchSpec(4, 4, 4))


@pytest.mark.parametrize("spec", STANDARD_SPECS, ids=lambda s: s.label)
def test_pixel_descriptor_matches_oracle(spec):
    patch = np.random.default_rng(spec.volume).standard_normal(spec.shape)
    got = pixel_descriptor(patch, HAAR, spec, channels=ALL)
    want = descriptor_oracle(patch, HAAR.low, HAAR.high, spec.scales, ALL)
    np.testing.assert_allclose(got, want, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("name", ["db2", "coif1"])
def test_longer_filters_match_oracle(name):
    bank = get_bank(name)
    spec = PatchSpec(8, 8, 8)
    patch = np.random.default_rng(3).standard_normal(spec.shape)
    got = pixel_descriptor(patch, bank, spec, channels=ALL)
    np.testing.assert_allclose(got, descriptor_oracle(patch, bank.low, bank.high, 3, ALL),
                               rtol=1e-10, atol=1e-12)


def test_field_equals_per_pixel_descriptors():
    frames = np.random.default_rng(0).random((8, 16, 16))
    spec = PatchSpec(4, 4, 4, 2)
    opts = DescriptorOptions(spec=spec, channels=ALL)
    field = feature_fields(frames, opts)
    assert field.shape == (8, 16, 16, len(ALL))
    for t in range(8):
        for y in range(16):
            for x in range(16):
                want = pixel_descriptor(extract_patch(frames, (y, x, t), spec), HAAR, spec, ALL)
                assert np.array_equal(field[t, y, x], want)


def test_field_matches_oracle_on_sample_pixels():
    frames = np.random.default_rng(1).random((8, 12, 10))
    spec = PatchSpec(4, 4, 4)
    field = feature_fields(frames, DescriptorOptions(spec=spec, channels=ALL))
    for y, x, t in [(0, 0, 0), (11, 9, 7), (5, 3, 2), (6, 0, 7)]:
        want = descriptor_oracle(extract_patch(frames, (y, x, t), spec), HAAR.low, HAAR.high, 2, ALL)
        np.testing.assert_allclose(field[t, y, x], want, rtol=1e-10, atol=1e-12)


def test_static_sequence_has_no_temporal_energy():
    frame = np.random.default_rng(2).random((20, 24))
    frames = np.repeat(frame[None], 8, axis=0)
    field = feature_fields(frames, DescriptorOptions(channels=ALL))
    for j, name in enumerate(ALL):
        if name[-1] == "H" and name != "Leader":
            assert np.abs(field[..., j]).max() <= 1e-12


def test_moving_square_sweep_exceeds_background():
    spec = SyntheticSpec(noise=0.0, frames=16)
    clean, truth = render(spec)
    field = feature_fields(clean, DescriptorOptions())
    norms = np.linalg.norm(field, axis=-1)
    swept = truth.any(axis=0)
    t = 8
    assert norms[t][truth[t] == 1].mean() > 10 * max(norms[t][~swept].mean(), 1e-6)


def test_constant_sequence_has_only_lll():
    field = feature_fields(np.full((6, 8, 8), 0.4), DescriptorOptions(channels=ALL))
    assert np.all(np.abs(field[..., 1:]) <= 1e-15)
    assert np.all(field[..., 0] > 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-4, 4))
def test_homogeneity(seed, alpha):
    frames = np.random.default_rng(seed).random((4, 6, 6))
    opts = DescriptorOptions(spec=PatchSpec(2, 2, 4), channels=ALL)
    a = feature_fields(frames, opts)
    b = feature_fields(alpha * frames, opts)
    np.testing.assert_allclose(b, abs(alpha) * a, rtol=1e-9, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_temporal_shift_covariance(seed, shift):
    frames = np.random.default_rng(seed).random((14, 8, 8))
    spec = PatchSpec(4, 4, 4)
    opts = DescriptorOptions(spec=spec)
    a = feature_fields(frames[:10], opts)
    b = feature_fields(frames[shift:shift + 10], opts)
    # away from both temporal borders the cubes see identical samples
    for t in range(2 + shift, 8):
        np.testing.assert_array_equal(a[t], b[t - shift])


def test_worker_count_does_not_change_result():
    frames = np.random.default_rng(4).random((12, 20, 18))
    opts = DescriptorOptions()
    one = feature_fields(frames, opts, workers=1, memory_mb=0.5)
    many = feature_fields(frames, opts, workers=4, memory_mb=0.5)
    assert np.array_equal(one, many)


def test_subset_of_frames():
    frames = np.random.default_rng(5).random((8, 10, 10))
    full = feature_fields(frames)
    part = feature_fields(frames, t_index=[6, 1, 2])
    assert np.array_equal(part, full[[6, 1, 2]])
    np.testing.assert_array_equal(feature_field(frames, 3), full[3])
    with pytest.raises(IndexError):
        feature_fields(frames, t_index=[8])


def test_tiled_mode_is_constant_per_tile():
    frames = np.random.default_rng(6).random((8, 16, 16))
    spec = PatchSpec(4, 4, 4)
    field = feature_fields(frames, DescriptorOptions(spec=spec, tiled=True))
    assert field.shape == (8, 16, 16, 4)
    tile = field[0:4, 4:8, 8:12]
    assert np.all(tile == tile[0, 0, 0])
    # a tile descriptor is the descriptor of the tile's own cube
    cube = frames[0:4, 4:8, 8:12].transpose(1, 2, 0)
    np.testing.assert_array_equal(tile[0, 0, 0], pixel_descriptor(cube, HAAR, spec))


def test_zscore():
    feats = np.random.default_rng(7).random((3, 4, 5, 2)) * [1.0, 5.0] + [0.0, 3.0]
    feats[..., 1] = 2.0
    z = zscore(feats)
    np.testing.assert_allclose(z[..., 0].mean(), 0, atol=1e-12)
    np.testing.assert_allclose(z[..., 0].std(), 1, atol=1e-12)
    assert np.all(z[..., 1] == 0)


def test_feature_dump_roundtrip(tmp_path):
    field = np.random.default_rng(8).standard_normal((5, 7, 3))
    path = tmp_path / "f.bin"
    write_features(path, field)
    raw = path.read_bytes()
    assert raw[:8] == b"WMFEAT01"
    assert np.frombuffer(raw[8:20], "<u4").tolist() == [5, 7, 3]
    assert len(raw) == 20 + 5 * 7 * 3 * 8
    assert np.array_equal(read_features(path), field)


def test_feature_dump_rejects_garbage(tmp_path):
    path = tmp_path / "f.bin"
    path.write_bytes(b"nonsense")
    with pytest.raises(ValueError):
        read_features(path)


def test_default_channel_order():
    assert DEFAULT_CHANNELS == ("LLH", "LHL", "HLH", "Leader")

import subprocess
import sys

import numpy as np
import pytest

from wavemotion import media
from wavemotion.cli import main


@pytest.fixture(scope="module")
def square(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "square"
    assert main(["synth", "--kind", "moving-square", "--height", "32", "--width", "32",
                 "--length", "8", "--object-size", "6", "--out", str(out)]) == 0
    return out


def test_synth_layout(square):
    assert len(list((square / "input").glob("in*.pgm"))) == 8
    assert len(list((square / "groundtruth").glob("gt*.pgm"))) == 8


def test_detect_and_score(square, tmp_path, capsys):
    out = tmp_path / "run"
    code = main(["detect", "--frames", str(square / "input"), "--truth", str(square / "groundtruth"),
                 "--out", str(out), "--patch", "4x4x4", "--seed", "3"])
    assert code == 0
    assert (out / "metrics.csv").read_text().startswith("sequence,Re,Sp")
    code = main(["score", "--masks", str(out / "masks"), "--truth", str(square / "groundtruth"),
                 "--out", str(tmp_path / "s.csv")])
    assert code == 0
    assert "F-measure" in capsys.readouterr().out
    # both paths score the same masks
    assert (tmp_path / "s.csv").read_text() == (out / "metrics.csv").read_text()


def test_config_file_and_override(square, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"frames = {square / 'input'}\nout = {tmp_path / 'o'}\npatch = 2x2x2\n")
    assert main(["detect", "--config", str(cfg), "--patch", "4x4x8"]) == 0
    assert len(list((tmp_path / "o" / "masks").iterdir())) == 8


def test_static_scene_exits_degenerate(tmp_path, capsys):
    main(["synth", "--kind", "static-noise", "--height", "16", "--width", "16",
          "--length", "6", "--out", str(tmp_path / "n")])
    code = main(["detect", "--frames", str(tmp_path / "n" / "input"), "--out", str(tmp_path / "o")])
    assert code == 4
    assert "no motion evidence" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["detect", "--frames", "{sq}/input", "--out", "{tmp}/o", "--patch", "4x4"],
    ["detect", "--frames", "{sq}/input", "--out", "{tmp}/o", "--channels", "LLH,WAT"],
    ["detect", "--frames", "{sq}/input", "--out", "{tmp}/o", "--filter", "sym99"],
    ["detect", "--frames", "{sq}/input"],
    ["detect", "--config", "{tmp}/missing.cfg"],
])
def test_config_errors_exit_2(square, tmp_path, argv):
    argv = [a.format(sq=square, tmp=tmp_path) for a in argv]
    assert main(argv) == 2


def test_missing_frames_exit_3(tmp_path, capsys):
    assert main(["detect", "--frames", str(tmp_path / "nope"), "--out", str(tmp_path / "o")]) == 3
    assert "nope" in capsys.readouterr().err


def test_corrupt_frame_exit_3(square, tmp_path):
    bad = tmp_path / "bad"
    bad.mkdir()
    (bad / "in000000.pgm").write_bytes(b"P5\n4 4\n255\n")
    assert main(["detect", "--frames", str(bad), "--out", str(tmp_path / "o")]) == 3


def test_score_all_ignore_exit_4(tmp_path):
    media.save_mask(tmp_path / "gt000000.pgm", np.full((4, 4), media.IGNORE))
    media.write_pgm(tmp_path / "bin000000.pgm", np.zeros((4, 4), np.uint8))
    assert main(["score", "--masks", str(tmp_path), "--truth", str(tmp_path)]) == 4


def test_sweep_command(square, tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--frames", str(square / "input"), "--truth", str(square / "groundtruth"),
                 "--specs", "2x2x2;4x4x4", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3 and lines[0].startswith("patch,scales,Re")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "wavemotion", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "detect" in res.stdout

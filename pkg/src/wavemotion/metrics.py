"""Change-detection scoring: confusion counts and the seven-metric report."""

from __future__ import annotations

import csv
from dataclasses import dataclass, fields

import numpy as np

from .media import IGNORE, MOTION, STATIC

COLUMNS = ("Re", "Sp", "FPR", "FNR", "PWC", "Precision", "F-measure")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v < 0:
                raise ValueError(f"{f.name} must be non-negative")
            object.__setattr__(self, f.name, int(v))

    def __add__(self, other):
        return ConfusionCounts(self.tp + other.tp, self.tn + other.tn,
                               self.fp + other.fp, self.fn + other.fn)

    @property
    def total(self):
        return self.tp + self.tn + self.fp + self.fn


def accumulate(mask, truth, acc: ConfusionCounts = ConfusionCounts()) -> ConfusionCounts:
    """Add the confusion counts of one predicted mask (or a stack of them) to ``acc``.

    ``mask`` is boolean (True = motion); ``truth`` holds MOTION/STATIC/IGNORE.
    """
    mask = np.asarray(mask, dtype=bool)
    truth = np.asarray(truth)
    if mask.shape != truth.shape:
        raise ValueError(f"mask shape {mask.shape} does not match ground truth {truth.shape}")
    pos = truth == MOTION
    neg = truth == STATIC
    return acc + ConfusionCounts(
        tp=np.count_nonzero(mask & pos),
        tn=np.count_nonzero(~mask & neg),
        fp=np.count_nonzero(mask & neg),
        fn=np.count_nonzero(~mask & pos),
    )


@dataclass(frozen=True)
class MetricReport:
    re: float
    sp: float
    fpr: float
    fnr: float
    pwc: float
    precision: float
    f_measure: float
    # names of metrics whose denominator was zero (reported as 0)
    degenerate: tuple = ()

    def as_row(self):
        return [self.re, self.sp, self.fpr, self.fnr, self.pwc, self.precision, self.f_measure]


def _ratio(num, den, name, flags):
    if den == 0:
        flags.append(name)
        return 0.0
    return num / den


def report(c: ConfusionCounts) -> MetricReport:
    if c.total == 0:
        raise ValueError("cannot report metrics on empty confusion counts")
    flags = []
    re = _ratio(c.tp, c.tp + c.fn, "re", flags)
    sp = _ratio(c.tn, c.tn + c.fp, "sp", flags)
    fpr = _ratio(c.fp, c.fp + c.tn, "fpr", flags)
    fnr = _ratio(c.fn, c.tp + c.fn, "fnr", flags)
    pwc = 100.0 * (c.fn + c.fp) / c.total
    precision = _ratio(c.tp, c.tp + c.fp, "precision", flags)
    f = _ratio(2 * precision * re, precision + re, "f_measure", flags)
    return MetricReport(re, sp, fpr, fnr, pwc, precision, f, tuple(flags))


def mean_report(reports) -> MetricReport:
    """Unweighted mean of per-sequence reports (category averages)."""
    reports = list(reports)
    if not reports:
        raise ValueError("no reports to average")
    rows = np.array([r.as_row() for r in reports])
    flags = tuple(sorted({f for r in reports for f in r.degenerate}))
    return MetricReport(*rows.mean(axis=0), degenerate=flags)


def write_report_csv(path, named_reports, average=True) -> None:
    """One row per ``(name, MetricReport)`` plus an optional ``average`` row."""
    named_reports = list(named_reports)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("sequence",) + COLUMNS)
        for name, r in named_reports:
            w.writerow([name] + [f"{v:.6f}" for v in r.as_row()])
        if average and named_reports:
            m = mean_report(r for _, r in named_reports)
            w.writerow(["average"] + [f"{v:.6f}" for v in m.as_row()])


__all__ = ["ConfusionCounts", "MetricReport", "accumulate", "report", "mean_report",
           "write_report_csv", "COLUMNS", "IGNORE"]

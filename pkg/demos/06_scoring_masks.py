"""
Scoring masks
=============

Predicted masks are compared pixel by pixel with ground truth; pixels marked
"unknown" in the truth are skipped. The report holds the seven usual
change-detection numbers.
"""

import numpy as np

from wavemotion import IGNORE, MOTION, STATIC, ConfusionCounts, accumulate, mean_report, report

# Ten moving pixels, ninety still ones: eight hits, two misses, one false alarm.
print(report(ConfusionCounts(tp=8, tn=89, fp=1, fn=2)))

truth = np.array([[MOTION, MOTION, STATIC, IGNORE]])
mask = np.array([[True, False, True, True]])
counts = accumulate(mask, truth)
print()
print(counts, "<- the unknown pixel is not counted")

# Averages over several sequences are taken per sequence, not over pooled pixels.
a = report(ConfusionCounts(tp=90, tn=900, fp=10, fn=10))
b = report(ConfusionCounts(tp=5, tn=990, fp=0, fn=5))
print("\nmean F over two sequences:", round(mean_report([a, b]).f_measure, 4))

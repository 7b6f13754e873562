"""Implied constants observed on the desk corpora (see scripts/record_constants.py).

Values are observed maxima with 10% headroom; the acceptance suite checks that
a fresh measurement stays below them.
"""

KAPPA_SPECTRAL = 1.5  # observed 1.31826
KAPPA_BOX = 0.35  # observed 0.310123
KAPPA_REDUCED = 1.2  # observed 1.08108
KAPPA_V3 = 4.5  # observed 4
KAPPA_COVER_DET = 1.1  # observed 1
KAPPA_I = 1.1  # observed 1
KAPPA_SIEG = 1.2  # observed 1.0549
KAPPA_SING = 1.6  # observed 1.36798
KAPPA_S = 87.0  # observed 78.8383
KAPPA_C = 4.4  # observed 4
KAPPA_L = 1.7  # observed 1.46667
KAPPA_LINE = 5.6  # observed 5.01961
KAPPA_THM = 7.6  # observed 6.85316
KAPPA_CONJ = 3.9  # observed 3.52

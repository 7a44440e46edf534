"""Regression envelopes measured once on KSPM(3), N <= 100000, then frozen.

Measured maxima at calibration time:

* ``i_N - 1.25 log2(N + 2)`` peaks at 1.905 (N = 52); largest i_N is 19.
* ``L(3, N) - log2(N)`` peaks at 0.0; L(3, 100000) = 14.
* ``(width + 1) / sqrt(N)`` lies in [1.077, 1.257] for N >= 100, with a
  log-log slope of 0.499 between N = 100 and 100000.
"""

WAVE_C = 1.25
WAVE_C0 = 2.0

DENSITY_C = 1.0
DENSITY_C0 = 1.0

WIDTH_MIN_N = 100
WIDTH_LOW = 1.0
WIDTH_HIGH = 1.3

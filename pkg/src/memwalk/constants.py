"""Centralized tolerances and frozen calibration constants.

Two kinds of numbers live here.  The tolerances are structural: permutation
steps and small unitary products keep residuals near machine epsilon, so the
bounds below are generous yet tight enough to catch any real defect.  The
floors/ceilings further down were calibrated once by simulation (see
README, "Calibration") and are frozen; tests must not loosen them to pass.
"""

from __future__ import annotations

# -- structural tolerances ---------------------------------------------------

#: Unitarity and norm-preservation residuals (exact-permutation pipelines).
UNITARY_ATOL = 1e-12

#: Same-basis distribution agreement (engine vs memory-walk oracles).
EXACT_DISTRIBUTION_ATOL = 1e-12

#: Cross-oracle agreement that involves an analytic phase reconstruction.
ORACLE_DISTRIBUTION_ATOL = 1e-10

#: Entrywise amplitude agreement for reconstructed fields.
AMPLITUDE_ATOL = 1e-10

# -- scaling-verdict thresholds ----------------------------------------------

#: classify_scaling calls a walk ballistic when the fitted quadratic term
#: exceeds the linear term by this factor at the fit's right endpoint.
SCALING_BALLISTIC_FACTOR = 4.0

#: ... and diffusive when the quadratic term falls below this fraction of
#: the linear term at the right endpoint.
SCALING_DIFFUSIVE_FACTOR = 0.25

#: Seed-averaged variance-ratio windows for var(t_max)/var(t_max/2).
BALLISTIC_RATIO_RANGE = (3.4, 4.6)
DIFFUSIVE_RATIO_RANGE = (1.5, 2.8)

# -- frozen calibration constants ----------------------------------------------
# Calibrated 2026-08: six-class sweep, 20 seeds, t_max=200, window 405,
# Hadamard coin, "origin-balanced" initial state, random-partition classes
# with the recycled coin shift resampled per step.  Observed extremes:
# occupancy minimum 0.067 (reflect_transmit+carried, t=200); localizing
# classes' late origin average >= 0.381; the non-localizing class sits at
# 0.013.  Values below keep a >= 2x margin on each side.  Do not retune
# casually.

#: Every walk class keeps OccRate(2t+1, t) at or above this for 50 <= t <= 200.
OCCUPANCY_RATE_FLOOR = 0.03

#: Late-time even-step average of P(0, t) over LOCALIZATION_WINDOW stays
#: above this for walk classes that localize ...
LOCALIZATION_FLOOR = 0.15

#: ... and below this for the one class that does not.
NO_LOCALIZATION_CEILING = 0.03

#: Inclusive time window (even steps only) for the late-time origin average.
LOCALIZATION_WINDOW = (150, 200)

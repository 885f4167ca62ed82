"""Package-wide defaults.

The HDS numeric range is not published alongside the score; the default
range accommodates the clinical thresholds 7 and 20.
"""

from __future__ import annotations

DEFAULT_S_MIN = 0
DEFAULT_S_MAX = 30
DEFAULT_DELTA_T_HOURS = 8.0

EVENT_SCOPE = "hds-fallcast"
SEED_ENV_VAR = "HDS_FALLCAST_SEED"

FALL = 1
NO_FALL = 0
# Softmax readout column holding the fall probability.
FALL_CLASS_INDEX = 1

PROB_CLIP_EPS = 1e-12

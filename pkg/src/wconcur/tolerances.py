"""Shared numerical tolerances.

These are contract values, not tuning knobs: constructors reject inputs
outside them instead of repairing silently.
"""

TAU_NORM = 1e-9
TAU_HERM = 1e-9
TAU_PSD = 1e-9
TAU_COND = 1e-8
TAU_RECON = 1e-9

# Radicands of concurrence square roots may go slightly negative from
# float noise near separable states; anything below -RADICAND_CLAMP is a bug.
RADICAND_CLAMP = 1e-10

WEIGHT_FLOOR = 1e-14

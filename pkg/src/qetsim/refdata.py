"""Bundled reference estimates used by the table1 comparison mode.

The reference values are 10^6-shot sampled means with their standard errors
for the star models on {3,6}, {3,7} and {3,10} cells at (h,k) in
{(9,2),(8,2),(7,2),(6,2)}, receivers at sites 1 and 2 measured
simultaneously.  Because the reference itself is sampled, exact values are
compared against it with the statistical tolerance max(4*stderr, 0.03), not
with a numerical one.
"""

from __future__ import annotations

# (q, h, k) -> observable -> (mean, stderr)
REFERENCE_TABLE: dict[tuple[int, int, int], dict[str, tuple[float, float]]] = {
    (6, 9, 2): {
        "E0": (7.8897, 0.0090), "HX1": (-0.6715, 0.0037), "HZ1": (0.5102, 0.0037),
        "E1": (-0.1613, 0.0052), "HX2": (-0.6747, 0.0037), "HZ2": (0.5169, 0.0037),
        "E2": (-0.1578, 0.0052),
    },
    (6, 8, 2): {
        "E0": (6.7546, 0.0080), "HX1": (-0.6956, 0.0036), "HZ1": (0.5441, 0.0036),
        "E1": (-0.1514, 0.0051), "HX2": (-0.7034, 0.0036), "HZ2": (0.5467, 0.0036),
        "E2": (-0.1567, 0.0051),
    },
    (6, 7, 2): {
        "E0": (5.5674, 0.0070), "HX1": (-0.7141, 0.0035), "HZ1": (0.5585, 0.0035),
        "E1": (-0.1556, 0.0049), "HX2": (-0.7073, 0.0035), "HZ2": (0.5643, 0.0035),
        "E2": (-0.1430, 0.0049),
    },
    (6, 6, 2): {
        "E0": (4.3751, 0.0060), "HX1": (-0.6966, 0.0033), "HZ1": (0.5582, 0.0034),
        "E1": (-0.1383, 0.0047), "HX2": (-0.6996, 0.0033), "HZ2": (0.5625, 0.0034),
        "E2": (-0.1371, 0.0047),
    },
    (7, 9, 2): {
        "E0": (7.6482, 0.0090), "HX1": (-0.6497, 0.0036), "HZ1": (0.5065, 0.0036),
        "E1": (-0.1432, 0.0051), "HX2": (-0.6497, 0.0037), "HZ2": (0.5097, 0.0036),
        "E2": (-0.1400, 0.0052),
    },
    (7, 8, 2): {
        "E0": (6.4994, 0.0080), "HX1": (-0.6695, 0.0036), "HZ1": (0.5289, 0.0037),
        "E1": (-0.1406, 0.0052), "HX2": (-0.6685, 0.0036), "HZ2": (0.5305, 0.0037),
        "E2": (-0.1380, 0.0052),
    },
    (7, 7, 2): {
        "E0": (5.2865, 0.0070), "HX1": (-0.6679, 0.0035), "HZ1": (0.5370, 0.0036),
        "E1": (-0.1309, 0.0050), "HX2": (-0.6674, 0.0035), "HZ2": (0.5347, 0.0036),
        "E2": (-0.1327, 0.0050),
    },
    (7, 6, 2): {
        "E0": (4.0341, 0.0060), "HX1": (-0.6357, 0.0033), "HZ1": (0.5136, 0.0037),
        "E1": (-0.1221, 0.0049), "HX2": (-0.6358, 0.0033), "HZ2": (0.5159, 0.0037),
        "E2": (-0.1199, 0.0049),
    },
    (10, 9, 2): {
        "E0": (6.9239, 0.0090), "HX1": (-0.5821, 0.0037), "HZ1": (0.4669, 0.0036),
        "E1": (-0.1151, 0.0052), "HX2": (-0.5797, 0.0037), "HZ2": (0.4591, 0.0037),
        "E2": (-0.1205, 0.0052),
    },
    (10, 8, 2): {
        "E0": (5.6837, 0.0080), "HX1": (-0.5747, 0.0036), "HZ1": (0.4701, 0.0036),
        "E1": (-0.1046, 0.0051), "HX2": (-0.5752, 0.0036), "HZ2": (0.4695, 0.0036),
        "E2": (-0.1057, 0.0051),
    },
    (10, 7, 2): {
        "E0": (4.4021, 0.0070), "HX1": (-0.5372, 0.0035), "HZ1": (0.4447, 0.0035),
        "E1": (-0.0925, 0.0049), "HX2": (-0.5387, 0.0035), "HZ2": (0.4484, 0.0035),
        "E2": (-0.0903, 0.0049),
    },
    (10, 6, 2): {
        "E0": (3.0898, 0.0060), "HX1": (-0.4520, 0.0033), "HZ1": (0.3880, 0.0034),
        "E1": (-0.0640, 0.0047), "HX2": (-0.4549, 0.0033), "HZ2": (0.3927, 0.0034),
        "E2": (-0.0622, 0.0047),
    },
}

TILING_QS = (6, 7, 10)
HK_PAIRS = ((9, 2), (8, 2), (7, 2), (6, 2))
CONFIGS = tuple((q, h, k) for q in TILING_QS for (h, k) in HK_PAIRS)


def exact_tolerance(stderr: float) -> float:
    """Allowed |exact - reference| for a sampled reference value."""
    return max(4.0 * stderr, 0.03)


def reference_consistency_residuals() -> dict[tuple[int, int, int, int], float]:
    """|E_j - (HX_j + HZ_j)| of the printed reference triples, per site.

    The reference rows were rounded to 1e-4, so the identity should hold
    to about 2e-4.
    """
    out = {}
    for key, row in REFERENCE_TABLE.items():
        for site in (1, 2):
            resid = abs(row[f"E{site}"][0] - (row[f"HX{site}"][0] + row[f"HZ{site}"][0]))
            out[key + (site,)] = resid
    return out

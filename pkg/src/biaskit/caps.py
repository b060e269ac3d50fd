"""Default resource caps. Every cap can be overridden per call."""

SYMMETRIC_N = 6
CONGRUENCE_ELEMENTS = 100
PARTITION_SCAN_ELEMENTS = 10
IDENTITY_EVALUATIONS = 10**7
MATRIX_ELEMENTS = 10**5
WREATH_ORDER = 10**4
GROUP_ISO_ORDER = 64
FALSIFY_N = 4
VARIETY_COORDINATES = 10**4
RELATIVELY_FREE_ORDER = 2 * 10**5
UNIVERSAL_BIAS_ELEMENTS = 5000

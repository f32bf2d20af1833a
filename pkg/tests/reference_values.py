"""Reference error values used as acceptance anchors."""

TRAPEZOIDAL_POLY_CLASSICAL_GLOBAL_1_320 = 5.4651e-8
TRAPEZOIDAL_EXP_CORRECTED_GLOBAL_1_320 = 9.8459e-8
SIMPSON_EXP_CORRECTED_LOCAL_1_64 = 8.1711e-12
GAUSS2_EXP_CORRECTED_GLOBAL_1_64 = 2.9580e-11
MIDPOINT_EXP_CLASSICAL_GLOBAL_1_256 = 3.7813e-4

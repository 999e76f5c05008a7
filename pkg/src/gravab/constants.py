"""Physical constants used throughout the package (SI units).

All values are fixed here and nowhere else.  ``CONSTANTS_VERSION`` is written
into every report so that numbers can be traced to this table.
"""

import math

CONSTANTS_VERSION = "gravab-constants-1 (SI 2019 exact c, h; CODATA 2022 m_e)"

#: speed of light in vacuum, m/s (exact)
C = 299_792_458.0
#: Planck constant, J s (exact)
H = 6.626_070_15e-34
#: reduced Planck constant, J s
HBAR = H / (2.0 * math.pi)
#: electron rest mass, kg
M_E = 9.109_383_7139e-31
#: Earth's standard gravitational parameter GM, m^3/s^2
MU_EARTH = 3.986_004_418e14
#: mean Earth radius, m; default ground-clock radius
R_EARTH_MEAN = 6.371e6


def table():
    """The constants as a plain dict, for reports."""
    return {
        "version": CONSTANTS_VERSION,
        "c_m_per_s": C,
        "h_J_s": H,
        "hbar_J_s": HBAR,
        "m_e_kg": M_E,
        "mu_earth_m3_per_s2": MU_EARTH,
        "r_earth_mean_m": R_EARTH_MEAN,
    }

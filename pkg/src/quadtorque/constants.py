"""Physical constants and unit factors used across the package.

All values are CODATA 2018 (SI).  They are pinned here rather than pulled
from ``scipy.constants`` so that results do not drift when scipy updates
its adjustment; every module imports from this table and nowhere else.
"""

# fundamental constants (SI)
e = 1.602176634e-19          # elementary charge [C] (exact)
hbar = 1.054571817e-34       # reduced Planck constant [J s]
m_e = 9.1093837015e-31       # electron mass [kg]
c = 2.99792458e8             # speed of light in vacuum [m/s] (exact)
epsilon_0 = 8.8541878128e-12  # vacuum permittivity [F/m]
mu_0 = 1.0 / (epsilon_0 * c**2)  # vacuum permeability [H/m]

# unit factors
nm = 1e-9      # nanometre [m]
nW = 1e-9      # nanowatt [W]
zN = 1e-21     # zeptonewton [N]
zN_nm = 1e-30  # zeptonewton nanometre [N m]

"""Physical constants used at the unit-conversion boundary.

Everything inside the simulation kernel is expressed in units of the free-space
linewidth Gamma0 (rates, detunings) and radians (lattice phases).  The values
below are only needed to go to and from laboratory units.  All of them can be
overridden from a run configuration.
"""

BOLTZMANN = 1.380649e-23  # J/K, exact SI
ATOMIC_MASS_UNIT = 1.66053906660e-27  # kg
SPEED_OF_LIGHT = 299792458.0  # m/s

CESIUM_MASS = 132.905451961 * ATOMIC_MASS_UNIT  # kg
#: Cs D2 (6S1/2 -> 6P3/2) vacuum wavelength, nm
CESIUM_D2_WAVELENGTH_NM = 852.347
#: Cs D2 natural linewidth Gamma0/2pi, MHz
CESIUM_D2_LINEWIDTH_MHZ = 5.2

DEFAULTS = {
    "linewidth_mhz": CESIUM_D2_LINEWIDTH_MHZ,
    "wavelength_nm": CESIUM_D2_WAVELENGTH_NM,
    "atom_mass_kg": CESIUM_MASS,
}

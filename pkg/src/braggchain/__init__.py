"""Single-photon spectra of atom chains coupled to a nanoscale waveguide."""

__version__ = "0.1.0"

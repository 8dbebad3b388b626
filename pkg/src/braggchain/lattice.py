"""Random chain realizations: site filling, atom loss, broadening, axial jitter.

Atoms sit on two parallel chains (one line on each side of the fiber) that
share the same axial trapping sites.  Seen by the guided mode, a site holds
zero, one or two atoms.  Each occupied chain position becomes one atom with its
own Gaussian detuning offset and Gaussian axial displacement.

Randomness comes from numpy's counter-based Philox generator.  A sweep derives
one seed per realization from ``(master_seed, index)``, so a realization
depends only on its own seed and not on which worker produced it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import BOLTZMANN, CESIUM_D2_WAVELENGTH_NM


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def derive_seed(master_seed: int, index: int) -> int:
    """Per-realization seed, a hash of ``(master_seed, index)``."""
    state = np.random.SeedSequence([master_seed, index]).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def phase_from_trap_detuning(trap_detuning_nm: float,
                             wavelength_nm: float = CESIUM_D2_WAVELENGTH_NM) -> float:
    """Probe phase per lattice site for a trap detuned by ``trap_detuning_nm``.

    The lattice constant is half the trap wavelength, ``d = (lambda0 + dl) / 2``,
    so ``k d = pi (1 + dl / lambda0)``.
    """
    return math.pi * (1.0 + trap_detuning_nm / wavelength_nm)


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry and disorder parameters of the trapped-atom lattice.

    Attributes
    ----------
    n_atoms_expected : int
        Ensemble-mean number of atoms.  Unless ``n_sites`` is given, the
        number of axial sites is chosen so that the mean atom count equals it.
    fill_factor : float
        Probability that a site on one chain is loaded.
    survival : float
        Probability that a loaded atom is still trapped.
    phase_per_site : float
        Probe phase accumulated between neighbouring sites, radians.
    sigma_delta : float
        Standard deviation of the per-atom detuning offset, units of Gamma0.
    sigma_z : float
        Standard deviation of the axial position, units of the probe
        wavelength.
    n_chains : int
        Number of parallel chains sharing each axial site (1 or 2).
    n_sites : int, optional
        Explicit number of axial sites, overriding the value derived from
        ``n_atoms_expected``.
    """

    n_atoms_expected: int
    fill_factor: float = 1.0
    survival: float = 1.0
    phase_per_site: float = math.pi
    sigma_delta: float = 0.0
    sigma_z: float = 0.0
    n_chains: int = 2
    n_sites: int | None = None

    def __post_init__(self):
        errors = []
        if self.n_atoms_expected < 1:
            errors.append("n_atoms_expected must be a positive integer")
        if not 0.0 <= self.fill_factor <= 1.0:
            errors.append("fill_factor must lie in [0, 1]")
        if not 0.0 <= self.survival <= 1.0:
            errors.append("survival must lie in [0, 1]")
        if not (math.isfinite(self.phase_per_site) and self.phase_per_site > 0):
            errors.append("phase_per_site must be positive")
        if self.sigma_delta < 0 or self.sigma_z < 0:
            errors.append("disorder widths must be >= 0")
        if self.n_chains not in (1, 2):
            errors.append("n_chains must be 1 or 2")
        if self.n_sites is not None and self.n_sites < 1:
            errors.append("n_sites must be >= 1")
        if self.n_sites is None and self.occupation_probability * self.n_chains == 0:
            errors.append("site count cannot be derived when fill_factor * survival is 0; "
                          "give n_sites explicitly")
        if errors:
            raise ValueError("; ".join(errors))

    @property
    def occupation_probability(self) -> float:
        """Probability that a given chain position holds an atom."""
        return self.fill_factor * self.survival

    @property
    def site_count(self) -> int:
        if self.n_sites is not None:
            return self.n_sites
        return max(1, round(self.n_atoms_expected / (self.n_chains * self.occupation_probability)))

    @property
    def expected_atoms(self) -> float:
        return self.n_chains * self.site_count * self.occupation_probability


@dataclass(frozen=True, eq=False)
class ChainRealization:
    """One sampled chain.

    ``positions`` are axial probe phases (radians) sorted ascending and
    ``detuning_offsets`` the matching per-atom detuning offsets (Gamma0).
    """

    positions: np.ndarray
    detuning_offsets: np.ndarray
    seed: int
    n_sites: int

    @property
    def n_atoms(self) -> int:
        return int(self.positions.size)

    def __len__(self):
        return self.n_atoms


def _occupancy(rng: np.random.Generator, p: float, site_count: int, n_chains: int) -> np.ndarray:
    u = rng.random((site_count, n_chains))
    return (u < p).sum(axis=1).astype(np.int8)


def sample_occupancy(spec: LatticeSpec, site_count: int, rng_seed: int) -> np.ndarray:
    """Atoms per axial site, i.i.d. over sites.

    Each of the ``spec.n_chains`` chain positions at a site is occupied with
    probability ``f * eta``; for two chains this gives 0, 1 or 2 atoms with
    probabilities ``(1 - f eta)^2``, ``2 f eta (1 - f eta)`` and ``(f eta)^2``.
    """
    return _occupancy(make_rng(rng_seed), spec.occupation_probability, site_count, spec.n_chains)


def realize_chain(spec: LatticeSpec, rng_seed: int) -> ChainRealization:
    rng = make_rng(rng_seed)
    sites = spec.site_count
    occupancy = _occupancy(rng, spec.occupation_probability, sites, spec.n_chains)
    nominal = np.repeat(np.arange(sites, dtype=float) * spec.phase_per_site, occupancy)
    n = nominal.size
    # draw both offset streams unconditionally so the stream layout is fixed
    detuning = spec.sigma_delta * rng.standard_normal(n)
    jitter = (2 * math.pi * spec.sigma_z) * rng.standard_normal(n)
    positions = nominal + jitter
    order = np.argsort(positions, kind="stable")
    return ChainRealization(positions[order], detuning[order], rng_seed, sites)


def harmonic_sigma_z(temperature: float, atom_mass: float, axial_frequency: float) -> float:
    """Thermal rms axial spread ``sqrt(kB T / (m w^2))`` in a harmonic well.

    Parameters are SI: kelvin, kilogram and angular frequency in rad/s; the
    result is in metres.
    """
    if temperature <= 0 or atom_mass <= 0 or axial_frequency <= 0:
        raise ValueError("temperature, mass and trap frequency must be positive")
    return math.sqrt(BOLTZMANN * temperature / (atom_mass * axial_frequency ** 2))


def debye_waller(k: float, sigma_z: float) -> float:
    """Debye-Waller factor ``exp(-4 k^2 sigma_z^2)``."""
    if sigma_z < 0:
        raise ValueError("sigma_z must be >= 0")
    return math.exp(-4.0 * k * k * sigma_z * sigma_z)

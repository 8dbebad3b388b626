"""Monte Carlo reflection and transmission spectra of disordered atom chains."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import partial
from typing import NamedTuple, Sequence

import numpy as np

from . import __version__
from .atom import Chirality, CouplingModel, amplitudes
from .lattice import ChainRealization, LatticeSpec, derive_seed, realize_chain
from .tmm import TransferMatrix, atom_matrix, chain_observables, product_tree

DEFAULT_REALIZATIONS = 15
BLOCK_ATOMS = 256


@dataclass(frozen=True, eq=False)
class SweepPlan:
    """Everything needed to reproduce one ensemble-averaged spectrum.

    ``dispersion`` is the fractional change of the probe wavenumber per unit
    detuning (``Gamma0 / nu0``); the default of zero keeps the lattice phase
    independent of the probe frequency.
    """

    detuning_grid: np.ndarray
    coupling: CouplingModel
    lattice: LatticeSpec
    chirality: Chirality = Chirality.SYMMETRIC
    n_realizations: int = DEFAULT_REALIZATIONS
    master_seed: int = 0
    dispersion: float = 0.0

    def __post_init__(self):
        grid = np.asarray(self.detuning_grid, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("detuning grid must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(grid)) or np.any(np.diff(grid) <= 0):
            raise ValueError("detuning grid must be finite and strictly increasing")
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")
        if self.master_seed < 0:
            raise ValueError("master_seed must be a non-negative integer")
        grid.setflags(write=False)
        object.__setattr__(self, "detuning_grid", grid)
        object.__setattr__(self, "chirality", Chirality(self.chirality))

    def metadata(self) -> dict:
        lattice = asdict(self.lattice)
        lattice["site_count"] = self.lattice.site_count
        lattice["expected_atoms"] = self.lattice.expected_atoms
        return {
            "code_version": __version__,
            "chirality": self.chirality.value,
            "coupling": asdict(self.coupling),
            "lattice": lattice,
            "n_realizations": self.n_realizations,
            "master_seed": self.master_seed,
            "dispersion": self.dispersion,
            "detuning_grid": [float(x) for x in self.detuning_grid],
        }


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    delta: np.ndarray
    r_mean: np.ndarray
    r_std: np.ndarray
    t_mean: np.ndarray
    t_std: np.ndarray
    n_realizations: int
    plan: SweepPlan = field(repr=False)

    @property
    def r_sem(self) -> np.ndarray:
        return self.r_std / math.sqrt(self.n_realizations)

    def metadata(self) -> dict:
        return self.plan.metadata()


def evaluate_chain(realization: ChainRealization, coupling: CouplingModel,
                   chirality: Chirality | str, delta, dispersion: float = 0.0):
    """Reflectance and transmittance of one chain at each probe detuning.

    Every atom contributes ``M_a(delta - offset) @ M_p(gap to next atom)``;
    the factors are multiplied in order of increasing position.
    """
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    if realization.n_atoms == 0:
        return np.zeros(delta.shape), np.ones(delta.shape)
    gaps = np.diff(realization.positions, append=realization.positions[-1])
    offsets = realization.detuning_offsets
    # blocks small enough that the per-atom arrays stay in cache
    partial_products = []
    for start in range(0, realization.n_atoms, BLOCK_ATOMS):
        sl = slice(start, start + BLOCK_ATOMS)
        m = atom_matrix(amplitudes(coupling, delta[None, :] - offsets[sl, None], chirality))
        phase = gaps[sl, None]
        if dispersion:
            phase = phase * (1.0 + dispersion * delta[None, :])
        p = np.exp(1j * phase)
        pc = np.conj(p)
        partial_products.append(product_tree(m.m11 * p, m.m12 * pc, m.m21 * p, m.m22 * pc))
    total = TransferMatrix(*product_tree(*(np.stack(x) for x in zip(*partial_products))))
    return chain_observables(total)


def realization_spectrum(plan: SweepPlan, index: int):
    """``(R, T)`` over the plan's grid for realization number ``index``."""
    chain = realize_chain(plan.lattice, derive_seed(plan.master_seed, index))
    return evaluate_chain(chain, plan.coupling, plan.chirality, plan.detuning_grid,
                          plan.dispersion)


def _realizations(plan: SweepPlan, workers: int):
    indices = range(plan.n_realizations)
    if workers <= 1 or plan.n_realizations == 1:
        return [realization_spectrum(plan, i) for i in indices]
    chunk = max(1, plan.n_realizations // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves index order, so the reduction below is schedule independent
        return list(pool.map(partial(realization_spectrum, plan), indices, chunksize=chunk))


def run_sweep(plan: SweepPlan, workers: int = 1) -> SpectrumResult:
    """Average R and T over ``plan.n_realizations`` independent chains.

    ``r_std`` and ``t_std`` are sample standard deviations across
    realizations (zero for a single realization).
    """
    try:
        results = _realizations(plan, workers)
    except Exception as exc:
        raise RuntimeError(f"sweep aborted (master_seed={plan.master_seed}): {exc}") from exc
    R = np.stack([r for r, _ in results])
    T = np.stack([t for _, t in results])
    ddof = 1 if plan.n_realizations > 1 else 0
    return SpectrumResult(
        delta=plan.detuning_grid.copy(),
        r_mean=R.mean(axis=0),
        r_std=R.std(axis=0, ddof=ddof),
        t_mean=T.mean(axis=0),
        t_std=T.std(axis=0, ddof=ddof),
        n_realizations=plan.n_realizations,
        plan=plan,
    )


def peak(delta, values):
    """Location and height of the maximum, refined by a three-point parabola."""
    delta = np.asarray(delta, dtype=float)
    values = np.asarray(values, dtype=float)
    i = int(np.argmax(values))
    if i == 0 or i == values.size - 1:
        return float(delta[i]), float(values[i])
    y0, y1, y2 = values[i - 1:i + 2]
    curv = y0 - 2 * y1 + y2
    if curv >= 0:
        return float(delta[i]), float(y1)
    offset = 0.5 * (y0 - y2) / curv
    step = delta[i + 1] - delta[i] if offset > 0 else delta[i] - delta[i - 1]
    return float(delta[i] + offset * step), float(y1 - 0.25 * (y0 - y2) * offset)


def fwhm(delta, values) -> float:
    """Full width at half maximum of the main peak, with linear interpolation.

    A half-maximum crossing that falls outside the grid is clamped to the grid
    edge, so the result is then a lower bound.
    """
    delta = np.asarray(delta, dtype=float)
    values = np.asarray(values, dtype=float)
    i = int(np.argmax(values))
    half = values[i] / 2
    lo = i
    while lo > 0 and values[lo - 1] >= half:
        lo -= 1
    hi = i
    while hi < values.size - 1 and values[hi + 1] >= half:
        hi += 1
    left = delta[lo]
    if lo > 0:
        x0, x1, y0, y1 = delta[lo - 1], delta[lo], values[lo - 1], values[lo]
        left = x0 + (half - y0) * (x1 - x0) / (y1 - y0)
    right = delta[hi]
    if hi < values.size - 1:
        x0, x1, y0, y1 = delta[hi], delta[hi + 1], values[hi], values[hi + 1]
        right = x0 + (half - y0) * (x1 - x0) / (y1 - y0)
    return float(right - left)


class AtomNumberPoint(NamedTuple):
    survival: float
    expected_atoms: float
    peak_r: float
    peak_r_sem: float
    peak_delta: float


def reflectance_vs_atom_number(plan: SweepPlan, survival_grid: Sequence[float],
                               workers: int = 1) -> list[AtomNumberPoint]:
    """Peak reflectance as atoms are randomly lost from the initial arrays.

    The site count is frozen at the value implied by ``plan.lattice`` and the
    per-chain occupation drops to ``f * eta``.  The same master seed is used
    at every ``eta``; since occupation is decided by comparing one uniform
    draw per chain position against ``f * eta``, the atoms kept at a lower
    survival are a subset of those kept at a higher one.
    """
    sites = plan.lattice.site_count
    points = []
    for eta in survival_grid:
        if not 0.0 <= eta <= 1.0:
            raise ValueError(f"survival {eta} outside [0, 1]")
        lattice = replace(plan.lattice, survival=float(eta), n_sites=sites)
        result = run_sweep(replace(plan, lattice=lattice), workers=workers)
        i = int(np.argmax(result.r_mean))
        points.append(AtomNumberPoint(float(eta), lattice.expected_atoms,
                                      float(result.r_mean[i]), float(result.r_sem[i]),
                                      float(result.delta[i])))
    return points

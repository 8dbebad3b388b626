"""Brute-force multiple-scattering solver for short chains.

Used only to cross-check the transfer-matrix engine.  For ``N`` atoms the
unknowns are the right-moving amplitude ``A_j`` arriving at atom ``j`` from
the left and the left-moving amplitude ``B_j`` arriving from the right.  Each
atom scatters as ``out_right = t A + r B`` and ``out_left = r A + t B``; free
propagation between atoms multiplies by ``exp(i * gap)``.  The resulting
``2N x 2N`` system is solved directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .atom import Chirality, CouplingModel, amplitudes
from .lattice import ChainRealization
from .tmm import ScatterAmplitudes

MAX_ATOMS = 12


class SingularSystemError(ValueError):
    pass


@dataclass(frozen=True)
class OracleProblem:
    """Atoms given as ``(position_phase, ScatterAmplitudes)``, probe from the left."""

    atoms: Sequence[tuple[float, ScatterAmplitudes]]
    max_atoms: int = MAX_ATOMS

    def __post_init__(self):
        if len(self.atoms) > self.max_atoms:
            raise ValueError(f"oracle is capped at {self.max_atoms} atoms, got {len(self.atoms)}")
        z = [pos for pos, _ in self.atoms]
        if any(b < a for a, b in zip(z, z[1:])):
            raise ValueError("atom positions must be sorted")


def solve_multiple_scattering(p: OracleProblem) -> tuple[float, float]:
    n = len(p.atoms)
    if n == 0:
        return 0.0, 1.0
    z = np.array([pos for pos, _ in p.atoms], dtype=float)
    r = np.array([complex(a.r) for _, a in p.atoms])
    t = np.array([complex(a.t) for _, a in p.atoms])
    hop = np.exp(1j * np.diff(z))

    # unknown vector: [A_0..A_{n-1}, B_0..B_{n-1}]
    A = lambda j: j
    B = lambda j: n + j
    M = np.zeros((2 * n, 2 * n), dtype=complex)
    rhs = np.zeros(2 * n, dtype=complex)
    row = 0
    M[row, A(0)] = 1.0
    rhs[row] = 1.0
    row += 1
    M[row, B(n - 1)] = 1.0
    row += 1
    for j in range(n - 1):
        # A_{j+1} = hop_j (t_j A_j + r_j B_j)
        M[row, A(j + 1)] = 1.0
        M[row, A(j)] -= hop[j] * t[j]
        M[row, B(j)] -= hop[j] * r[j]
        row += 1
        # B_j = hop_j (r_{j+1} A_{j+1} + t_{j+1} B_{j+1})
        M[row, B(j)] = 1.0
        M[row, A(j + 1)] -= hop[j] * r[j + 1]
        M[row, B(j + 1)] -= hop[j] * t[j + 1]
        row += 1
    try:
        x = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystemError("non-finite solution")
    reflected = r[0] * x[A(0)] + t[0] * x[B(0)]
    transmitted = t[-1] * x[A(n - 1)] + r[-1] * x[B(n - 1)]
    return float(abs(reflected) ** 2), float(abs(transmitted) ** 2)


def problem_from_chain(realization: ChainRealization, coupling: CouplingModel,
                       chirality: Chirality | str, delta: float,
                       max_atoms: int = MAX_ATOMS) -> OracleProblem:
    atoms = []
    for pos, off in zip(realization.positions, realization.detuning_offsets):
        a = amplitudes(coupling, delta - off, chirality)
        atoms.append((float(pos), ScatterAmplitudes(complex(a.r), complex(a.t))))
    return OracleProblem(atoms, max_atoms=max_atoms)

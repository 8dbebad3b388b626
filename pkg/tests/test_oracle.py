import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braggchain.atom import Chirality, CouplingModel, amplitudes
from braggchain.cli import oracle_check
from braggchain.lattice import ChainRealization
from braggchain.oracle import (
    MAX_ATOMS,
    OracleProblem,
    SingularSystemError,
    problem_from_chain,
    solve_multiple_scattering,
)
from braggchain.spectra import evaluate_chain
from braggchain.tmm import ScatterAmplitudes


def atoms_at(positions, r, t):
    return [(float(z), ScatterAmplitudes(r, t)) for z in positions]


def test_empty_chain():
    assert solve_multiple_scattering(OracleProblem([])) == (0.0, 1.0)


def test_single_atom_returns_its_amplitudes():
    r = -0.2 / (1.2 - 0.6j)
    R, T = solve_multiple_scattering(OracleProblem(atoms_at([0.3], r, 1 + r)))
    assert R == pytest.approx(abs(r) ** 2, abs=1e-15)
    assert T == pytest.approx(abs(1 + r) ** 2, abs=1e-15)


@pytest.mark.parametrize("phase", [0.0, 0.7, math.pi / 2, math.pi, 5.1])
def test_two_atoms_match_fabry_perot(phase):
    r = -0.3 / (0.8 - 0.4j)
    t = 1 + r
    e = cmath.exp(2j * phase)
    expected = abs(r + t * t * r * e / (1 - r * r * e)) ** 2
    R, _ = solve_multiple_scattering(OracleProblem(atoms_at([1.0, 1.0 + phase], r, t)))
    assert R == pytest.approx(expected, abs=1e-12)


def test_coincident_atoms_act_as_one_stronger_scatterer():
    # two atoms at one site share a single field: r2 = 2r/(1-r) for t = 1 + r
    r = -0.1 / (1.1 - 0.3j)
    R, _ = solve_multiple_scattering(OracleProblem(atoms_at([2.0, 2.0], r, 1 + r)))
    assert R == pytest.approx(abs(2 * r / (1 - r)) ** 2, abs=1e-14)


def test_five_atoms_match_transfer_matrix():
    rng = np.random.default_rng(11)
    chain = ChainRealization(np.sort(rng.uniform(0, 10, 5)), rng.normal(0, 0.5, 5), 0, 5)
    coupling = CouplingModel.symmetric(0.3, 1.0)
    for delta in (-1.0, 0.0, 0.4, 2.5):
        R, T = evaluate_chain(chain, coupling, "symmetric", delta)
        Ro, To = solve_multiple_scattering(problem_from_chain(chain, coupling, "symmetric", delta))
        assert R[0] == pytest.approx(Ro, abs=1e-12)
        assert T[0] == pytest.approx(To, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, MAX_ATOMS), seed=st.integers(0, 2 ** 32 - 1),
       delta=st.floats(-5, 5), chiral=st.booleans())
def test_passive_and_consistent(n, seed, delta, chiral):
    rng = np.random.default_rng(seed)
    chain = ChainRealization(np.sort(rng.uniform(0, 20, n)), rng.normal(0, 1, n), 0, n)
    if chiral:
        coupling = CouplingModel(rng.uniform(0, 0.5), rng.uniform(0, 0.5), rng.uniform(0.05, 2))
    else:
        coupling = CouplingModel.symmetric(rng.uniform(0, 1), rng.uniform(0.05, 2))
    chirality = Chirality.CHIRAL if chiral else Chirality.SYMMETRIC
    Ro, To = solve_multiple_scattering(problem_from_chain(chain, coupling, chirality, delta))
    assert Ro >= 0 and To >= 0 and Ro + To <= 1 + 1e-12
    R, T = evaluate_chain(chain, coupling, chirality, delta)
    assert abs(R[0] - Ro) <= 1e-10 and abs(T[0] - To) <= 1e-10


def test_lossless_chain_conserves_energy():
    rng = np.random.default_rng(12)
    c = CouplingModel.symmetric(0.4, 0.0)
    atoms = []
    for z in np.sort(rng.uniform(0, 8, 6)):
        a = amplitudes(c, float(rng.normal(0, 1)), "symmetric")
        atoms.append((float(z), ScatterAmplitudes(complex(a.r), complex(a.t))))
    R, T = solve_multiple_scattering(OracleProblem(atoms))
    assert R + T == pytest.approx(1.0, abs=1e-12)


def test_size_cap():
    with pytest.raises(ValueError, match="capped"):
        OracleProblem(atoms_at(range(MAX_ATOMS + 1), -0.1, 0.9))
    OracleProblem(atoms_at(range(20), -0.1, 0.9), max_atoms=20)


def test_unsorted_positions_rejected():
    with pytest.raises(ValueError, match="sorted"):
        OracleProblem(atoms_at([1.0, 0.5], -0.1, 0.9))


def test_singular_system_is_reported():
    # two coincident perfect mirrors trap a mode that the probe cannot fix
    atoms = atoms_at([0.0, 0.0], 1.0, 0.0)
    with pytest.raises(SingularSystemError):
        solve_multiple_scattering(OracleProblem(atoms))


def test_random_instances_agree():
    assert oracle_check(200, seed=3) <= 1e-10

"""Single-atom scattering amplitudes for symmetric and chiral waveguide coupling.

All rates and detunings are dimensionless, in units of the free-space
linewidth Gamma0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .tmm import ScatterAmplitudes


class Chirality(str, enum.Enum):
    SYMMETRIC = "symmetric"
    CHIRAL = "chiral"


@dataclass(frozen=True)
class CouplingModel:
    """Radiative rates of one emitter and the trap-induced line shift.

    Attributes
    ----------
    gamma_1d_forward, gamma_1d_backward : float
        Decay rates into the guided mode co- and counter-propagating with the
        probe.
    gamma_prime : float
        Decay rate into all other (radiation) modes.
    shift : float
        Uniform shift of the transition; the probe detuning seen by the atom
        is ``delta - shift``.
    """

    gamma_1d_forward: float
    gamma_1d_backward: float
    gamma_prime: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        for name in ("gamma_1d_forward", "gamma_1d_backward", "gamma_prime"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        if not math.isfinite(self.shift):
            raise ValueError("shift must be finite")
        if self.gamma_total <= 0:
            raise ValueError("total decay rate must be positive")

    @classmethod
    def symmetric(cls, gamma_1d: float, gamma_prime: float = 1.0, shift: float = 0.0):
        half = gamma_1d / 2
        return cls(half, half, gamma_prime, shift)

    @classmethod
    def chiral(cls, gamma_1d: float, forward_factor: float, forward_backward_ratio: float,
               gamma_prime: float = 1.0, shift: float = 0.0):
        """Asymmetric coupling parameterised relative to the symmetric ``gamma_1d``.

        ``gamma_1d_forward = forward_factor * gamma_1d`` and
        ``gamma_1d_backward = gamma_1d_forward / forward_backward_ratio``.
        """
        if forward_backward_ratio <= 0:
            raise ValueError("forward/backward ratio must be positive")
        forward = forward_factor * gamma_1d
        return cls(forward, forward / forward_backward_ratio, gamma_prime, shift)

    @property
    def gamma_1d(self) -> float:
        return self.gamma_1d_forward + self.gamma_1d_backward

    @property
    def gamma_total(self) -> float:
        return self.gamma_1d_forward + self.gamma_1d_backward + self.gamma_prime

    @property
    def is_symmetric(self) -> bool:
        return self.gamma_1d_forward == self.gamma_1d_backward


def _denominator(c: CouplingModel, delta):
    delta_eff = np.asarray(delta, dtype=float) - c.shift
    return c.gamma_total - 2j * delta_eff


def symmetric_amplitudes(c: CouplingModel, delta) -> ScatterAmplitudes:
    """``r = -G1D / (G - 2i delta_eff)``, ``t = 1 + r``."""
    if not c.is_symmetric:
        raise ValueError("symmetric_amplitudes requires equal forward and backward rates")
    r = -c.gamma_1d / _denominator(c, delta)
    return ScatterAmplitudes(r, 1 + r)


def chiral_amplitudes(c: CouplingModel, delta) -> ScatterAmplitudes:
    """Amplitudes for direction-dependent guided decay.

    ``r = -2 sqrt(Gf Gb) / (G - 2i delta_eff)`` and
    ``t = 1 - (Gf + Gb) / (G - 2i delta_eff)``.  The reflection depends on
    the product ``Gf * Gb`` only, so it does not matter which direction is
    labelled forward.
    """
    den = _denominator(c, delta)
    r = -2.0 * math.sqrt(c.gamma_1d_forward * c.gamma_1d_backward) / den
    t = 1 - c.gamma_1d / den
    return ScatterAmplitudes(r, t)


def amplitudes(c: CouplingModel, delta, chirality: Chirality | str) -> ScatterAmplitudes:
    if Chirality(chirality) is Chirality.SYMMETRIC:
        return symmetric_amplitudes(c, delta)
    return chiral_amplitudes(c, delta)

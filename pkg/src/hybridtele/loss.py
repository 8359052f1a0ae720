"""Photon loss (amplitude damping) in two equivalent forms.

Exact Kraus evolution on truncated Fock states, and the closed-form action
on the hybrid channel.  Equality of the two routes on a parameter grid is
part of the verification suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fock import DensityMatrix, _check_mode
from .states import ChannelState


@dataclass(frozen=True)
class LossParams:
    """Amplitude-decay factor t in (0, 1].

    Equivalently parameterized by the normalized interaction time
    r = sqrt(1 - t^2) (r = 0 pristine, r -> 1 fully decohered) or by the
    underlying gamma*tau with t = exp(-gamma*tau/2).  ``t`` is the single
    source of truth; ``r`` is derived.
    """

    t: float

    def __post_init__(self):
        t = float(self.t)
        if not 0.0 < t <= 1.0:
            raise ValueError(f"amplitude-decay factor t={t} outside (0, 1]")
        object.__setattr__(self, "t", t)

    @property
    def r(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.t * self.t))

    @classmethod
    def from_t(cls, t: float) -> "LossParams":
        return cls(float(t))

    @classmethod
    def from_r(cls, r: float) -> "LossParams":
        r = float(r)
        if not 0.0 <= r < 1.0:
            raise ValueError(f"normalized time r={r} outside [0, 1)")
        return cls(math.sqrt(1.0 - r * r))

    @classmethod
    def from_gamma_tau(cls, gamma_tau: float) -> "LossParams":
        if gamma_tau < 0.0:
            raise ValueError("gamma*tau must be >= 0")
        return cls(math.exp(-0.5 * float(gamma_tau)))


def kraus_operators(t: float, dim: int) -> list[np.ndarray]:
    """Amplitude-damping Kraus family on one mode; E_k removes k photons.

    E_k = sum_n sqrt(C(n, k) t^(2(n-k)) (1 - t^2)^k) |n-k><n|, all orders
    k retained up to the truncation.
    """
    t = float(t)
    loss = 1.0 - t * t
    ops = []
    for k in range(dim):
        e = np.zeros((dim, dim))
        for n in range(k, dim):
            e[n - k, n] = math.sqrt(math.comb(n, k) * t ** (2 * (n - k)) * loss ** k)
        ops.append(e)
        if loss == 0.0:
            break
    return ops


def kraus_loss(rho: DensityMatrix, params: LossParams, modes: Sequence[int] | None = None) -> DensityMatrix:
    """Apply the loss channel with the same decay factor to each listed mode.

    Defaults to every mode (the two subsystems see identical decay).
    Completely positive and trace preserving within the truncated space.
    """
    idx = list(range(rho.modes)) if modes is None else [_check_mode(rho, m) for m in modes]
    nmodes = rho.modes
    dims = rho.dims
    tensorized = rho.mat.reshape(dims + dims)
    for mode in idx:
        ops = kraus_operators(params.t, dims[mode])
        moved = np.moveaxis(tensorized, (mode, nmodes + mode), (0, 1))
        acc = np.zeros_like(moved)
        for e in ops:
            acc += np.einsum("in,jm,nm...->ij...", e, e.conj(), moved, optimize=True)
        tensorized = np.moveaxis(acc, (0, 1), (mode, nmodes + mode))
    return DensityMatrix(rho.cutoffs, tensorized.reshape(rho.mat.shape))


def decohere_hybrid(alpha: float, params: LossParams) -> ChannelState:
    """Closed-form decohered hybrid channel.

    Equal-decay photon loss applied to the initial
    (|0>|alpha> + |1>|-alpha>)/sqrt(2) hybrid state, expressed exactly in
    the shrunk coherent basis {|t*alpha>, |-t*alpha>}.
    """
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    return ChannelState(alpha=float(alpha), t=params.t)

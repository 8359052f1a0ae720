"""Linear-optics Bell-state measurements.

Single-rail measurement: 50:50 beam splitter followed by photon counting.
Detector pattern (1, 0) identifies B3 and (0, 1) identifies B4; the
remaining patterns (0,0), (2,0), (0,2) cannot separate B1 from B2 with
linear optics and count as FAIL.

Coherent-state measurement: 50:50 beam splitter followed by two
photon-number parity readouts.  (even >= 2, vacuum) -> B1,
(odd, vacuum) -> B2, mirrored patterns -> B3/B4; the no-click event
(vacuum, vacuum) is the failure outcome.  Detectors are ideal and
photon-number resolving; decoherence lives entirely in the channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BackendOverflow, DegenerateBasis, ModeNotSingleRail, ShapeMismatch
from . import fock
from .fock import DensityMatrix, FockState, parity_mask, pattern_mask
from .states import gram_matrix

B1, B2, B3, B4, FAIL = "B1", "B2", "B3", "B4", "FAIL"

CORRECTIONS = {
    B1: frozenset(),
    B2: frozenset({"Z"}),
    B3: frozenset({"X"}),
    B4: frozenset({"X", "Z"}),
    FAIL: frozenset(),
}

_SINGLE_RAIL_TOL = 1e-10
_NUMERIC_ALPHA_MAX = 3.0


@dataclass(frozen=True)
class BsmOutcome:
    """One Bell-measurement outcome.

    ``conditional`` is the state of the modes the measurement did not
    consume (DensityMatrix for the numeric backend), or None when nothing
    remains or the outcome has zero probability.
    """

    kind: str
    probability: float
    conditional: object | None
    correction: frozenset[str]


def single_rail_bell_state(kind: str, cutoff: int = 5) -> FockState:
    """Two-mode single-rail Bell state B1..B4 at the given per-mode cutoff."""
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    s = 1.0 / math.sqrt(2.0)
    if kind == B1:
        amps[0, 0] = s
        amps[1, 1] = s
    elif kind == B2:
        amps[0, 0] = s
        amps[1, 1] = -s
    elif kind == B3:
        amps[0, 1] = s
        amps[1, 0] = s
    elif kind == B4:
        amps[0, 1] = s
        amps[1, 0] = -s
    else:
        raise ValueError(f"unknown Bell state {kind!r}")
    return FockState((cutoff, cutoff), amps)


def _conditional(after: DensityMatrix, mask, bsm_modes, rest):
    prob, cond = fock.project(after, mask, bsm_modes)
    if cond is None or not rest:
        return prob, None
    return prob, fock.partial_trace(cond, rest)


def bsm_single_rail(joint: DensityMatrix, m_in: int, m_ch: int, *,
                    tol: float = _SINGLE_RAIL_TOL) -> list[BsmOutcome]:
    """Single-rail Bell measurement on modes ``(m_in, m_ch)`` of ``joint``.

    Returns the B3, B4 and FAIL outcomes with conditional states of the
    remaining modes.  Raises ModeNotSingleRail if either measured mode has
    weight above n = 1 before the beam splitter.
    """
    i1 = fock._check_mode(joint, m_in)
    i2 = fock._check_mode(joint, m_ch)
    for m in (i1, i2):
        pop = joint.mode_populations(m)
        if float(pop[2:].sum()) > tol:
            raise ModeNotSingleRail(
                f"mode {m} holds {float(pop[2:].sum()):.3e} probability above n=1"
            )

    after = fock.beam_splitter(joint, i1, i2)
    rest = [m for m in range(joint.modes) if m not in (i1, i2)]
    dims = (after.dims[i1], after.dims[i2])

    signal = {B3: pattern_mask(dims, (1, 0)), B4: pattern_mask(dims, (0, 1))}
    outcomes = []
    fail_mask = np.ones(dims[0] * dims[1])
    for kind, mask in signal.items():
        fail_mask -= mask
        prob, cond = _conditional(after, mask, [i1, i2], rest)
        outcomes.append(BsmOutcome(kind, prob, cond, CORRECTIONS[kind]))
    prob, cond = _conditional(after, fail_mask, [i1, i2], rest)
    outcomes.append(BsmOutcome(FAIL, prob, cond, CORRECTIONS[FAIL]))
    return outcomes


@dataclass(frozen=True, eq=False)
class CoherentBellState:
    """Two-mode entangled coherent state over {|beta>, |-beta>} x same.

    ``amplitudes[i, j]`` multiplies |s_i beta>|s_j beta| with s = (+1, -1);
    normalization is already folded in.
    """

    kind: str
    beta: float
    amplitudes: np.ndarray

    def overlap(self, other: "CoherentBellState") -> complex:
        if abs(self.beta - other.beta) > 1e-12:
            raise ShapeMismatch("basis amplitudes differ")
        g = gram_matrix(self.beta)
        return complex(np.einsum("ij,ik,jl,kl->", self.amplitudes.conj(), g, g, other.amplitudes))

    def norm_squared(self) -> float:
        return float(self.overlap(self).real)


def coherent_bell_states(alpha: float, t: float) -> list[CoherentBellState]:
    """The four Bell states in the dynamic coherent basis at beta = t*alpha.

    Normalizations N+- = (2 +- 2 exp(-4 t^2 alpha^2))^(-1/2); the basis
    degenerates at t*alpha = 0.
    """
    beta = float(t) * float(alpha)
    if beta <= 0.0:
        raise DegenerateBasis("coherent Bell basis collapses at t*alpha = 0")
    g2 = math.exp(-4.0 * beta * beta)
    n_plus = 1.0 / math.sqrt(2.0 + 2.0 * g2)
    n_minus = 1.0 / math.sqrt(2.0 - 2.0 * g2)
    return [
        CoherentBellState(B1, beta, np.diag([n_plus, n_plus]).astype(complex)),
        CoherentBellState(B2, beta, np.diag([n_minus, -n_minus]).astype(complex)),
        CoherentBellState(B3, beta, np.array([[0, n_plus], [n_plus, 0]], dtype=complex)),
        CoherentBellState(B4, beta, np.array([[0, n_minus], [-n_minus, 0]], dtype=complex)),
    ]


def parity_click_weights(beta: float) -> tuple[float, float]:
    """Click weights of |beta| under (even >= 2) and odd photon counting.

    q_even = e^(-b^2)(cosh b^2 - 1) = (1 + e^(-2 b^2))/2 - e^(-b^2)
    q_odd  = e^(-b^2) sinh b^2      = (1 - e^(-2 b^2))/2
    evaluated in the overflow-safe right-hand forms.
    """
    x = float(beta) * float(beta)
    e1 = math.exp(-x)
    e2 = math.exp(-2.0 * x)
    return 0.5 * (1.0 + e2) - e1, 0.5 * (1.0 - e2)


def coherent_bsm_masks(dims: tuple[int, int]) -> dict[str, np.ndarray]:
    """Diagonal outcome masks on the two measured modes, post beam splitter."""
    d1, d2 = dims
    vac1 = np.zeros(d1)
    vac1[0] = 1.0
    vac2 = np.zeros(d2)
    vac2[0] = 1.0
    masks = {
        B1: np.kron(parity_mask(d1, "even", include_vacuum=False), vac2),
        B2: np.kron(parity_mask(d1, "odd"), vac2),
        B3: np.kron(vac1, parity_mask(d2, "even", include_vacuum=False)),
        B4: np.kron(vac1, parity_mask(d2, "odd")),
    }
    fail = np.ones(d1 * d2)
    for mask in masks.values():
        fail -= mask
    masks[FAIL] = fail
    return masks


def bsm_coherent(joint: DensityMatrix, m_in: int, m_ch: int, *,
                 alpha: float | None = None) -> list[BsmOutcome]:
    """Coherent-state Bell measurement on modes ``(m_in, m_ch)`` of ``joint``.

    Numeric backend over the truncated Fock space; pass ``alpha`` to enforce
    the validated amplitude range (BackendOverflow above alpha = 3).  The
    FAIL outcome is the complement of the four parity patterns, which for
    protocol states is the (vacuum, vacuum) no-click event.
    """
    if alpha is not None and alpha > _NUMERIC_ALPHA_MAX:
        raise BackendOverflow(
            f"numeric coherent measurement validated only for alpha <= {_NUMERIC_ALPHA_MAX}"
        )
    i1 = fock._check_mode(joint, m_in)
    i2 = fock._check_mode(joint, m_ch)
    after = fock.beam_splitter(joint, i1, i2)
    rest = [m for m in range(joint.modes) if m not in (i1, i2)]
    masks = coherent_bsm_masks((after.dims[i1], after.dims[i2]))

    outcomes = []
    for kind in (B1, B2, B3, B4, FAIL):
        prob, cond = _conditional(after, masks[kind], [i1, i2], rest)
        outcomes.append(BsmOutcome(kind, prob, cond, CORRECTIONS[kind]))
    return outcomes

"""Exact coherent-basis representations.

Qubit coefficients, operators over the non-orthogonal basis
{|beta>, |-beta>} with an explicit Gram matrix, and the analytic form of
the decohered hybrid channel.  Everything here is exact for arbitrary
amplitude (no truncation); :func:`materialize` bridges to the Fock backend.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BasisMismatch, DegenerateBasis, ShapeMismatch, TailTooLarge
from .fock import DensityMatrix, coherent_state, cutoff_for, TAIL_TOLERANCE

_NORM_TOL = 1e-12
_DEGENERACY_TOL = 1e-14
_BASIS_TOL = 1e-12


@dataclass(frozen=True)
class QubitCoeffs:
    """Input-qubit amplitudes (a, b) with |a|^2 + |b|^2 = 1."""

    a: complex
    b: complex

    def __post_init__(self):
        a = complex(self.a)
        b = complex(self.b)
        norm = abs(a) ** 2 + abs(b) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"|a|^2 + |b|^2 = {norm} is not 1 within {_NORM_TOL}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_bloch(cls, theta: float, phi: float) -> "QubitCoeffs":
        """a = cos(theta/2) e^(i phi/2), b = sin(theta/2) e^(-i phi/2).

        theta in [0, pi], phi in [0, 2*pi).
        """
        if not -1e-12 <= theta <= math.pi + 1e-12:
            raise ValueError(f"theta {theta} outside [0, pi]")
        if not -1e-12 <= phi <= 2.0 * math.pi + 1e-12:
            raise ValueError(f"phi {phi} outside [0, 2*pi)")
        half = 0.5 * theta
        return cls(math.cos(half) * cmath.exp(0.5j * phi),
                   math.sin(half) * cmath.exp(-0.5j * phi))


def gram_overlap(beta: float) -> float:
    """Basis overlap <beta|-beta> = exp(-2 beta^2), beta real."""
    return math.exp(-2.0 * float(beta) * float(beta))


def gram_matrix(beta: float) -> np.ndarray:
    g = gram_overlap(beta)
    return np.array([[1.0, g], [g, 1.0]])


def _check_real_amplitude(alpha) -> float:
    if isinstance(alpha, complex):
        raise ValueError("complex coherent amplitudes are not supported; use a real alpha")
    return float(alpha)


@dataclass(frozen=True, eq=False)
class CoherentBasisOp:
    """Operator sum_ij coeffs[i, j] |s_i beta><s_j beta|, s = (+1, -1).

    Exact for any beta: traces, products and expectation values contract
    through the Gram matrix of the non-orthogonal pair.
    """

    beta: float
    coeffs: np.ndarray

    def __post_init__(self):
        beta = _check_real_amplitude(self.beta)
        coeffs = np.ascontiguousarray(self.coeffs, dtype=complex)
        if coeffs.shape != (2, 2):
            raise ShapeMismatch(f"coefficient shape {coeffs.shape} is not (2, 2)")
        coeffs.setflags(write=False)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def gram(self) -> np.ndarray:
        return gram_matrix(self.beta)

    def trace(self) -> complex:
        return complex(np.trace(self.coeffs @ self.gram))

    def dagger(self) -> "CoherentBasisOp":
        return CoherentBasisOp(self.beta, self.coeffs.conj().T)

    def product(self, other: "CoherentBasisOp") -> "CoherentBasisOp":
        _check_same_basis(self, other)
        return CoherentBasisOp(self.beta, self.coeffs @ self.gram @ other.coeffs)

    def expectation(self, vec) -> complex:
        """<v|P|v> for |v> = vec[0]|beta> + vec[1]|-beta>."""
        v = np.asarray(vec, dtype=complex).reshape(2)
        g = self.gram
        return complex(v.conj() @ g @ self.coeffs @ g @ v)

    def bit_flipped(self) -> "CoherentBasisOp":
        """Conjugation by the amplitude flip |+-beta> -> |-+beta> (pi phase shift)."""
        x = np.array([[0.0, 1.0], [1.0, 0.0]])
        return CoherentBasisOp(self.beta, x @ self.coeffs @ x)

    def phase_flipped(self) -> "CoherentBasisOp":
        """Conjugation by the sign flip on the |-beta> component (nonunitary for finite beta)."""
        z = np.diag([1.0, -1.0])
        return CoherentBasisOp(self.beta, z @ self.coeffs @ z)


def _check_same_basis(op1: CoherentBasisOp, op2: CoherentBasisOp) -> None:
    if abs(op1.beta - op2.beta) > _BASIS_TOL:
        raise BasisMismatch(f"basis amplitudes differ: {op1.beta} vs {op2.beta}")


def overlap(op1: CoherentBasisOp, op2: CoherentBasisOp) -> complex:
    """Tr(op1 op2) through the Gram metric; |<psi|phi>|^2 for two pure states."""
    _check_same_basis(op1, op2)
    g = op1.gram
    return complex(np.trace(op1.coeffs @ g @ op2.coeffs @ g))


def coherent_qubit_norm(q: QubitCoeffs, beta: float) -> float:
    """Normalization N of N (a|beta> + b|-beta>).

    N^(-2) = 1 + (ab* + a*b) exp(-2 beta^2); diverges (DegenerateBasis)
    when beta -> 0 with b -> -a, where the two-state basis collapses.
    """
    n2inv = 1.0 + 2.0 * (q.a * q.b.conjugate()).real * gram_overlap(beta)
    if n2inv < _DEGENERACY_TOL:
        raise DegenerateBasis(
            f"coherent qubit is non-normalizable at beta={beta} with a={q.a}, b={q.b}"
        )
    return 1.0 / math.sqrt(n2inv)


def coherent_qubit_vector(q: QubitCoeffs, beta: float) -> np.ndarray:
    """Normalized basis coefficients N*(a, b) of the coherent qubit."""
    n = coherent_qubit_norm(q, beta)
    return n * np.array([q.a, q.b], dtype=complex)


def target_coherent_qubit(q: QubitCoeffs, alpha: float, t: float) -> CoherentBasisOp:
    """Projector onto the dynamic-basis coherent qubit N (a|t*alpha> + b|-t*alpha>).

    The basis amplitude shrinks with the channel's amplitude decay so the
    description stays inside a 2x2 coefficient space during decoherence.
    """
    beta = _check_real_amplitude(alpha) * float(t)
    v = coherent_qubit_vector(q, beta)
    return CoherentBasisOp(beta, np.outer(v, v.conj()))


@dataclass(frozen=True)
class ChannelState:
    """Analytic decohered hybrid channel (single-rail mode x coherent mode).

    The four-term operator

        p_plus      |0><0| (x) |ta><ta|
      + p_minus_one |1><1| (x) |-ta><-ta|
      + p_minus_vac |0><0| (x) |-ta><-ta|
      + coherence ( |0><1| (x) |ta><-ta| + h.c. )

    with p_plus = 1/2, p_minus_one = t^2/2, p_minus_vac = (1 - t^2)/2 and
    coherence = (t/2) exp(-2 alpha^2 (1 - t^2)).  Trace is 1 by construction.
    """

    alpha: float
    t: float
    p_plus: float = field(init=False)
    p_minus_one: float = field(init=False)
    p_minus_vac: float = field(init=False)
    coherence: float = field(init=False)

    def __post_init__(self):
        alpha = _check_real_amplitude(self.alpha)
        t = float(self.t)
        if not 0.0 < t <= 1.0:
            raise ValueError(f"amplitude-decay factor t={t} outside (0, 1]")
        if alpha < 0.0:
            raise ValueError(f"alpha must be >= 0, got {alpha}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "p_plus", 0.5)
        object.__setattr__(self, "p_minus_one", 0.5 * t * t)
        object.__setattr__(self, "p_minus_vac", 0.5 * (1.0 - t * t))
        object.__setattr__(self, "coherence",
                           0.5 * t * math.exp(-2.0 * alpha * alpha * (1.0 - t * t)))

    @property
    def beta(self) -> float:
        """Surviving coherent amplitude t*alpha."""
        return self.t * self.alpha

    def trace(self) -> float:
        return self.p_plus + self.p_minus_one + self.p_minus_vac

    def qubit_blocks(self) -> dict[tuple[int, int], CoherentBasisOp]:
        """Blocks <i|rho|j> of the single-rail mode, as coherent-basis ops."""
        beta = self.beta
        zero = np.zeros((2, 2), dtype=complex)
        r00 = zero.copy()
        r00[0, 0] = self.p_plus
        r00[1, 1] = self.p_minus_vac
        r11 = zero.copy()
        r11[1, 1] = self.p_minus_one
        r01 = zero.copy()
        r01[0, 1] = self.coherence
        r10 = zero.copy()
        r10[1, 0] = self.coherence
        return {(0, 0): CoherentBasisOp(beta, r00),
                (1, 1): CoherentBasisOp(beta, r11),
                (0, 1): CoherentBasisOp(beta, r01),
                (1, 0): CoherentBasisOp(beta, r10)}


def fock_matrix(op: CoherentBasisOp, cutoff: int | None = None, *,
                tail_tol: float = TAIL_TOLERANCE) -> np.ndarray:
    """Expand a coherent-basis operator into a (possibly non-normalized) Fock matrix."""
    cutoff = cutoff_for(op.beta) if cutoff is None else int(cutoff)
    plus = coherent_state(op.beta, cutoff, tail_tol=tail_tol).amps
    minus = coherent_state(-op.beta, cutoff, tail_tol=tail_tol).amps
    vecs = (plus, minus)
    mat = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for i in range(2):
        for j in range(2):
            c = op.coeffs[i, j]
            if c != 0.0:
                mat += c * np.outer(vecs[i], vecs[j].conj())
    return mat


def materialize(obj, cutoffs=None, *, tail_tol: float = TAIL_TOLERANCE) -> DensityMatrix:
    """Expand an analytic state into the truncated Fock basis.

    CoherentBasisOp -> one-mode DensityMatrix; ChannelState -> two-mode
    DensityMatrix (single-rail mode first).  Raises TailTooLarge when the
    materialized trace misses the analytic trace by more than 1e-10.
    """
    if isinstance(obj, CoherentBasisOp):
        mat = fock_matrix(obj, cutoffs, tail_tol=tail_tol)
        if abs(np.trace(mat) - obj.trace()) > 1e-10:
            raise TailTooLarge("materialized trace misses the analytic trace; raise the cutoff")
        cut = cutoff_for(obj.beta) if cutoffs is None else int(cutoffs)
        return DensityMatrix((cut,), mat)

    if isinstance(obj, ChannelState):
        if cutoffs is None:
            qubit_cut, coh_cut = 2, cutoff_for(obj.alpha)
        else:
            qubit_cut, coh_cut = (int(c) for c in cutoffs)
        dq = qubit_cut + 1
        plus = coherent_state(obj.beta, coh_cut, tail_tol=tail_tol).amps
        minus = coherent_state(-obj.beta, coh_cut, tail_tol=tail_tol).amps
        pp = np.outer(plus, plus.conj())
        mm = np.outer(minus, minus.conj())
        pm = np.outer(plus, minus.conj())

        def qubit_op(i, j):
            m = np.zeros((dq, dq), dtype=complex)
            m[i, j] = 1.0
            return m

        mat = (np.kron(qubit_op(0, 0), obj.p_plus * pp + obj.p_minus_vac * mm)
               + np.kron(qubit_op(1, 1), obj.p_minus_one * mm)
               + obj.coherence * (np.kron(qubit_op(0, 1), pm)
                                  + np.kron(qubit_op(1, 0), pm.conj().T)))
        if abs(np.trace(mat).real - obj.trace()) > 1e-10:
            raise TailTooLarge("materialized channel trace misses the analytic trace")
        return DensityMatrix((qubit_cut, coh_cut), mat)

    raise TypeError(f"cannot materialize {type(obj)!r}")

"""Truncated Fock-space linear algebra for few-mode optical fields.

States are dense complex arrays over the photon-number basis with an
independent cutoff per mode; density matrices are dense Hermitian matrices
over the same basis.  Everything is exact within the truncated space, and
constructors guard the truncation tail so downstream numbers are reliable
at the ~1e-12 level.

Beam-splitter convention (50:50): in the Heisenberg picture the unitary
maps a0 -> (a0 - a1)/sqrt(2) and a1 -> (a0 + a1)/sqrt(2), so coherent
amplitudes transform as

    |b0>|b1|  ->  |(b0 + b1)/sqrt(2)>  |(b1 - b0)/sqrt(2)>.

Two applications give the quarter-turn two-mode rotation; four applications
multiply |n, m> by (-1)^(n+m) wherever n + m fits under the cutoff (the
number-complete blocks, which is where tail-guarded states live); both are
tested as process identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import CutoffMismatch, ShapeMismatch, TailTooLarge, TruncationLeakage

TAIL_TOLERANCE = 1e-12

_HERMITICITY_TOL = 1e-12
_TRACE_TOL = 1e-10
_BS_THETA = math.pi / 4.0


def cutoff_for(amplitude: float) -> int:
    """Photon-number cutoff for a coherent amplitude, with wide Poisson margin.

    ceil(a^2 + 8a + 12) puts roughly 8 sigma between the mean photon number
    a^2 and the cutoff, keeping the discarded tail below ~1e-12 for every
    amplitude the numeric backend accepts.
    """
    a = abs(float(amplitude))
    return int(math.ceil(a * a + 8.0 * a + 12.0))


def _normalize_cutoffs(cutoffs, modes: int | None = None) -> tuple[int, ...]:
    if isinstance(cutoffs, (int, np.integer)):
        out = (int(cutoffs),) * (1 if modes is None else modes)
    else:
        out = tuple(int(c) for c in cutoffs)
        if modes is not None and len(out) != modes:
            raise ShapeMismatch(f"expected {modes} cutoffs, got {len(out)}")
    if any(c < 1 for c in out):
        raise ValueError("every cutoff must be >= 1")
    return out


@dataclass(frozen=True, eq=False)
class FockState:
    """Pure state of one or more modes in the photon-number basis.

    ``amps[n1, ..., nk]`` is the amplitude of |n1, ..., nk>; mode i runs up
    to ``cutoffs[i]`` inclusive, i.e. ``dims[i] = cutoffs[i] + 1``.
    Instances are immutable; operations return new values.
    """

    cutoffs: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self):
        cut = _normalize_cutoffs(self.cutoffs)
        amps = np.ascontiguousarray(self.amps, dtype=complex)
        dims = tuple(c + 1 for c in cut)
        if amps.shape != dims:
            raise ShapeMismatch(f"amplitude shape {amps.shape} does not match dims {dims}")
        amps.setflags(write=False)
        object.__setattr__(self, "cutoffs", cut)
        object.__setattr__(self, "amps", amps)

    @property
    def modes(self) -> int:
        return len(self.cutoffs)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(c + 1 for c in self.cutoffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "FockState":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return FockState(self.cutoffs, self.amps / n)

    def mode_populations(self, mode: int) -> np.ndarray:
        """Marginal photon-number distribution of one mode."""
        m = _check_mode(self, mode)
        p = np.abs(self.amps) ** 2
        axes = tuple(i for i in range(self.modes) if i != m)
        return p.sum(axis=axes) if axes else p

    def tail_mass(self, mode: int) -> float:
        """Probability of the top three number levels of ``mode``."""
        pop = self.mode_populations(mode)
        return float(pop[max(0, len(pop) - 3):].sum())

    def to_density(self) -> "DensityMatrix":
        v = self.amps.reshape(-1)
        return DensityMatrix(self.cutoffs, np.outer(v, v.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Dense density matrix over the multi-mode photon-number basis.

    Construction validates Hermiticity (1e-12) and unit trace (1e-10);
    positivity is checked on demand via :meth:`min_eigenvalue` because a
    full eigensolve is not free at the larger mode dimensions.
    """

    cutoffs: tuple[int, ...]
    mat: np.ndarray

    def __post_init__(self):
        cut = _normalize_cutoffs(self.cutoffs)
        mat = np.ascontiguousarray(self.mat, dtype=complex)
        dim = int(np.prod([c + 1 for c in cut]))
        if mat.shape != (dim, dim):
            raise ShapeMismatch(f"matrix shape {mat.shape} does not match dims {dim}")
        herm = float(np.abs(mat - mat.conj().T).max())
        if herm > _HERMITICITY_TOL:
            raise ValueError(f"matrix is not Hermitian (max deviation {herm:.3e})")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > _TRACE_TOL:
            raise ValueError(f"trace {tr} is not 1 within {_TRACE_TOL}")
        mat.setflags(write=False)
        object.__setattr__(self, "cutoffs", cut)
        object.__setattr__(self, "mat", mat)

    @property
    def modes(self) -> int:
        return len(self.cutoffs)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(c + 1 for c in self.cutoffs)

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.mat)[0])

    def mode_populations(self, mode: int) -> np.ndarray:
        m = _check_mode(self, mode)
        diag = np.real(np.diagonal(self.mat)).reshape(self.dims)
        axes = tuple(i for i in range(self.modes) if i != m)
        return diag.sum(axis=axes) if axes else diag

    def tail_mass(self, mode: int) -> float:
        pop = self.mode_populations(mode)
        return float(pop[max(0, len(pop) - 3):].sum())


def _check_mode(state, mode: int) -> int:
    n = state.modes
    if not -n <= mode < n:
        raise ShapeMismatch(f"mode {mode} out of range for {n} modes")
    return mode % n


def number_state(ns: Sequence[int], cutoffs) -> FockState:
    """Photon-number basis state |n1, ..., nk>."""
    ns = tuple(int(n) for n in ns)
    cut = _normalize_cutoffs(cutoffs, len(ns))
    for n, c in zip(ns, cut):
        if not 0 <= n <= c:
            raise ShapeMismatch(f"occupation {n} exceeds cutoff {c}")
    amps = np.zeros(tuple(c + 1 for c in cut), dtype=complex)
    amps[ns] = 1.0
    return FockState(cut, amps)


def coherent_state(alpha: float, cutoff: int | None = None, *, tail_tol: float = TAIL_TOLERANCE) -> FockState:
    """Single-mode coherent state of real amplitude ``alpha``.

    Amplitudes e^(-alpha^2/2) alpha^n / sqrt(n!), renormalized after
    truncation.  Raises TailTooLarge when the discarded plus near-edge
    probability exceeds ``tail_tol``.
    """
    a = float(alpha)
    if cutoff is None:
        cutoff = cutoff_for(a)
    amps = np.empty(cutoff + 1)
    amps[0] = 1.0
    for n in range(1, cutoff + 1):
        amps[n] = amps[n - 1] * a / math.sqrt(n)
    amps *= math.exp(-0.5 * a * a)
    kept = float(np.dot(amps, amps))
    tail = max(0.0, 1.0 - kept) + float(np.dot(amps[max(0, cutoff - 2):], amps[max(0, cutoff - 2):]))
    if tail > tail_tol:
        raise TailTooLarge(
            f"coherent amplitude {a} keeps {tail:.3e} probability at the cutoff edge "
            f"(cutoff {cutoff}, tolerance {tail_tol:.1e})"
        )
    return FockState((cutoff,), (amps / math.sqrt(kept)).astype(complex))


def tensor(*states: FockState) -> FockState:
    """Tensor product of pure states, modes concatenated left to right."""
    cut: tuple[int, ...] = ()
    amps = np.ones((), dtype=complex)
    for s in states:
        cut = cut + s.cutoffs
        amps = np.multiply.outer(amps, s.amps)
    return FockState(cut, amps)


def state_overlap(s1: FockState, s2: FockState) -> complex:
    """Inner product <s1|s2>."""
    if s1.dims != s2.dims:
        raise ShapeMismatch(f"dims {s1.dims} vs {s2.dims}")
    return complex(np.vdot(s1.amps, s2.amps))


@lru_cache(maxsize=None)
def _bs_pair_unitary(dim: int) -> np.ndarray:
    """50:50 beam-splitter unitary on two modes of equal dimension ``dim``.

    Built block-by-block over total photon number, so it is exactly unitary
    on the truncated space; every block that fits under the cutoff carries
    the exact untruncated matrix elements.
    """
    u = np.zeros((dim * dim, dim * dim), dtype=complex)
    for total in range(2 * dim - 1):
        lo = max(0, total - (dim - 1))
        hi = min(total, dim - 1)
        ns = np.arange(lo, hi + 1)
        size = len(ns)
        gen = np.zeros((size, size))
        for idx in range(size - 1):
            n0 = int(ns[idx])
            n1 = total - n0
            amp = math.sqrt((n0 + 1) * n1)
            gen[idx + 1, idx] = amp
            gen[idx, idx + 1] = -amp
        herm = 1j * _BS_THETA * gen
        w, v = np.linalg.eigh(herm)
        block = (v * np.exp(-1j * w)) @ v.conj().T
        flat = ns * dim + (total - ns)
        u[np.ix_(flat, flat)] = block
    u.setflags(write=False)
    return u


def _apply_pair_unitary_pure(amps: np.ndarray, u: np.ndarray, i1: int, i2: int) -> np.ndarray:
    nd = amps.ndim
    t = np.moveaxis(amps, (i1, i2), (nd - 2, nd - 1))
    shp = t.shape
    flat = t.reshape(-1, shp[-2] * shp[-1]) @ u.T
    return np.moveaxis(flat.reshape(shp), (nd - 2, nd - 1), (i1, i2))


def beam_splitter(state, m1: int, m2: int, *, tail_tol: float = TAIL_TOLERANCE):
    """Apply the 50:50 beam splitter to modes ``(m1, m2)``.

    Works on FockState and DensityMatrix.  Both modes must share a cutoff;
    raises TruncationLeakage when the result keeps more than ``tail_tol``
    probability at either mode's truncation edge.
    """
    i1 = _check_mode(state, m1)
    i2 = _check_mode(state, m2)
    if i1 == i2:
        raise ShapeMismatch("beam splitter needs two distinct modes")
    if state.cutoffs[i1] != state.cutoffs[i2]:
        raise CutoffMismatch(f"mode cutoffs differ: {state.cutoffs[i1]} vs {state.cutoffs[i2]}")
    dim = state.cutoffs[i1] + 1
    u = _bs_pair_unitary(dim)

    if isinstance(state, FockState):
        out = FockState(state.cutoffs, _apply_pair_unitary_pure(state.amps, u, i1, i2))
    elif isinstance(state, DensityMatrix):
        modes = state.modes
        t = state.mat.reshape(state.dims + state.dims)
        t = _apply_pair_unitary_pure(t, u, i1, i2)
        t = _apply_pair_unitary_pure(t, u.conj(), modes + i1, modes + i2)
        out = DensityMatrix(state.cutoffs, t.reshape(state.mat.shape))
    else:
        raise TypeError(f"unsupported state type {type(state)!r}")

    for m in (i1, i2):
        leak = out.tail_mass(m)
        if leak > tail_tol:
            raise TruncationLeakage(
                f"beam splitter left {leak:.3e} probability at the edge of mode {m} "
                f"(tolerance {tail_tol:.1e})"
            )
    return out


def project(rho: DensityMatrix, projector: np.ndarray, modes: Sequence[int], *, zero_tol: float = 1e-14):
    """Condition ``rho`` on a projector acting on ``modes``.

    ``projector`` is a 1-D diagonal mask or a full matrix over the joint
    dimension of ``modes`` (in the given order).  Returns
    ``(probability, conditional)``; outcomes of numerically zero
    probability return ``(0.0, None)``.
    """
    idx = [_check_mode(rho, m) for m in modes]
    if len(set(idx)) != len(idx):
        raise ShapeMismatch("projector modes must be distinct")
    nmodes = rho.modes
    dims = rho.dims
    dsub = int(np.prod([dims[m] for m in idx]))
    proj = np.asarray(projector)
    if proj.ndim == 1 and proj.shape != (dsub,):
        raise ShapeMismatch(f"diagonal projector length {proj.shape} != {dsub}")
    if proj.ndim == 2 and proj.shape != (dsub, dsub):
        raise ShapeMismatch(f"projector shape {proj.shape} != ({dsub}, {dsub})")

    rest = [m for m in range(nmodes) if m not in idx]
    perm = idx + rest + [nmodes + m for m in idx] + [nmodes + m for m in rest]
    t = rho.mat.reshape(dims + dims).transpose(perm)
    drest = int(np.prod([dims[m] for m in rest], dtype=int))
    t = t.reshape(dsub, drest, dsub, drest)

    if proj.ndim == 1:
        mask = proj.astype(complex)
        out = mask[:, None, None, None] * t * mask[None, None, :, None].conj()
    else:
        p = proj.astype(complex)
        out = np.einsum("ij,jakb,lk->ialb", p, t, p.conj(), optimize=True)

    prob = float(np.einsum("iaia->", out).real)
    prob = max(prob, 0.0)
    if prob < zero_tol:
        return 0.0, None

    shaped = out.reshape([dims[m] for m in idx] + [dims[m] for m in rest] +
                         [dims[m] for m in idx] + [dims[m] for m in rest])
    inv = np.argsort(perm)
    mat = shaped.transpose(inv).reshape(rho.mat.shape) / prob
    return prob, DensityMatrix(rho.cutoffs, mat)


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out every mode not listed in ``keep`` (order preserved as given)."""
    idx = [_check_mode(rho, m) for m in keep]
    if len(set(idx)) != len(idx):
        raise ShapeMismatch("keep modes must be distinct")
    nmodes = rho.modes
    dims = rho.dims
    t = rho.mat.reshape(dims + dims)

    letters = "abcdefghijklmnopqrstuvwx"
    ket = list(letters[:nmodes])
    bra = []
    out_letters = []
    next_free = nmodes
    for m in range(nmodes):
        if m in idx:
            bra.append(letters[next_free])
            next_free += 1
        else:
            bra.append(ket[m])
    for m in idx:
        out_letters.append(ket[m])
    for m in idx:
        out_letters.append(bra[m])
    sub = "".join(ket) + "".join(bra) + "->" + "".join(out_letters)
    reduced = np.einsum(sub, t)
    dkeep = int(np.prod([dims[m] for m in idx], dtype=int))
    return DensityMatrix(tuple(rho.cutoffs[m] for m in idx), reduced.reshape(dkeep, dkeep))


def fidelity(target: FockState, rho: DensityMatrix) -> float:
    """<psi|rho|psi> for a pure target, clamped to [0, 1] for reporting."""
    if target.dims != rho.dims:
        raise ShapeMismatch(f"target dims {target.dims} vs state dims {rho.dims}")
    v = target.amps.reshape(-1)
    val = float(np.real(v.conj() @ rho.mat @ v))
    if val < -1e-10 or val > 1.0 + 1e-10:
        raise ValueError(f"fidelity {val} outside [0, 1] beyond tolerance")
    return min(max(val, 0.0), 1.0)


def trace_distance(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """(1/2) ||rho1 - rho2||_1 via the eigenvalues of the Hermitian difference."""
    if rho1.dims != rho2.dims:
        raise ShapeMismatch(f"dims {rho1.dims} vs {rho2.dims}")
    w = np.linalg.eigvalsh(rho1.mat - rho2.mat)
    return 0.5 * float(np.abs(w).sum())


def pattern_mask(dims: Sequence[int], pattern: Sequence[int]) -> np.ndarray:
    """Diagonal mask selecting one photon-number pattern on a mode group."""
    dims = tuple(int(d) for d in dims)
    if len(pattern) != len(dims):
        raise ShapeMismatch("pattern length does not match mode count")
    mask = np.zeros(dims)
    mask[tuple(int(n) for n in pattern)] = 1.0
    return mask.reshape(-1)


def parity_mask(dim: int, parity: str, *, include_vacuum: bool = True) -> np.ndarray:
    """Diagonal mask for even/odd photon number on a single mode."""
    n = np.arange(dim)
    if parity == "even":
        mask = (n % 2 == 0).astype(float)
        if not include_vacuum:
            mask[0] = 0.0
    elif parity == "odd":
        mask = (n % 2 == 1).astype(float)
    else:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    return mask

import math

import numpy as np
import pytest

from hybridtele.errors import CutoffMismatch, ShapeMismatch, TailTooLarge, TruncationLeakage
from hybridtele.fock import (DensityMatrix, FockState, beam_splitter, coherent_state,
                             cutoff_for, fidelity, number_state, parity_mask,
                             partial_trace, pattern_mask, project, state_overlap,
                             tensor, trace_distance, _bs_pair_unitary)


def test_vacuum_is_alpha_zero():
    vac = coherent_state(0.0)
    assert vac.amps[0] == pytest.approx(1.0)
    assert np.allclose(vac.amps[1:], 0.0)


def test_coherent_overlap_minus_alpha():
    c = coherent_state(1.0, 26)
    cm = coherent_state(-1.0, 26)
    assert np.vdot(c.amps, cm.amps).real == pytest.approx(math.exp(-2.0), abs=1e-12)


@pytest.mark.parametrize("a,b", [(0.3, 0.9), (1.0, 2.0), (-1.5, 0.7)])
def test_coherent_overlap_closed_form(a, b):
    cut = cutoff_for(max(abs(a), abs(b)))
    ov = np.vdot(coherent_state(a, cut).amps, coherent_state(b, cut).amps).real
    assert ov == pytest.approx(math.exp(-0.5 * (a * a + b * b) + a * b), abs=1e-10)


def test_coherent_norm_after_truncation():
    c = coherent_state(2.0, cutoff_for(2.0 * math.sqrt(2.0)))
    assert abs(c.norm() - 1.0) < 1e-12


def test_tail_too_large():
    with pytest.raises(TailTooLarge):
        coherent_state(3.0, 10)


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix((1,), np.array([[0.5, 0.5], [0.4, 0.5]]))  # not Hermitian
    with pytest.raises(ValueError):
        DensityMatrix((1,), np.diag([0.7, 0.7]))  # trace 1.4


def test_beam_splitter_coherent_in_coherent_out():
    cut = 26
    state = tensor(coherent_state(1.0, cut), coherent_state(1.0, cut))
    out = beam_splitter(state, 0, 1)
    expected = tensor(coherent_state(math.sqrt(2.0), cut), coherent_state(0.0, cut))
    assert abs(state_overlap(expected, out)) ** 2 >= 1.0 - 1e-10


def test_beam_splitter_general_coherent_map():
    # |b0>|b1> -> |(b0+b1)/sqrt2>|(b1-b0)/sqrt2>
    cut = 26
    state = tensor(coherent_state(1.0, cut), coherent_state(0.0, cut))
    out = beam_splitter(state, 0, 1)
    expected = tensor(coherent_state(1.0 / math.sqrt(2.0), cut),
                      coherent_state(-1.0 / math.sqrt(2.0), cut))
    assert abs(state_overlap(expected, out)) ** 2 >= 1.0 - 1e-10


def test_beam_splitter_single_photon_pair():
    # (|0,1> + |1,0>)/sqrt(2) -> |1,0> up to global phase
    amps = np.zeros((6, 6), dtype=complex)
    amps[0, 1] = amps[1, 0] = 1.0 / math.sqrt(2.0)
    out = beam_splitter(FockState((5, 5), amps), 0, 1)
    assert abs(out.amps[1, 0]) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_beam_splitter_vacuum_fixed():
    vac = tensor(coherent_state(0.0, 5), coherent_state(0.0, 5))
    out = beam_splitter(vac, 0, 1)
    assert abs(state_overlap(vac, out)) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_beam_splitter_cutoff_mismatch():
    state = tensor(coherent_state(0.0, 4), coherent_state(0.0, 5))
    with pytest.raises(CutoffMismatch):
        beam_splitter(state, 0, 1)


def test_beam_splitter_leakage_detected():
    state = tensor(number_state([4], (4,)), number_state([4], (4,)))
    with pytest.raises(TruncationLeakage):
        beam_splitter(state, 0, 1)


def test_double_application_is_quarter_rotation():
    # U(pi/4)^2 equals the unitary generated at theta = pi/2, block by block
    dim = 8
    u = _bs_pair_unitary(dim)
    u2 = u @ u
    # second route: swap with sign, a0 -> -a1, a1 -> a0 maps |n,m> -> phases |m,n>
    # check as a process identity on a dense operator basis instead
    rng = np.random.default_rng(7)
    m = rng.normal(size=(dim * dim, dim * dim)) + 1j * rng.normal(size=(dim * dim, dim * dim))
    lhs = u2 @ m @ u2.conj().T
    rhs = (u @ (u @ m @ u.conj().T) @ u.conj().T)
    assert np.abs(lhs - rhs).max() < 1e-12


def test_quadruple_application_is_double_parity():
    # exact on the number-complete subspace (total photons <= cutoff); the
    # edge blocks rotate under a restricted generator and are tail-guarded
    dim = 7
    u = _bs_pair_unitary(dim)
    u4 = np.linalg.matrix_power(u, 4)
    n = np.arange(dim)
    total = (n[:, None] + n[None, :]).reshape(-1)
    inside = total <= dim - 1
    parity = ((-1.0) ** total)[inside]
    block = u4[np.ix_(inside, inside)]
    assert np.abs(block - np.diag(parity)).max() < 1e-12
    # and off-block coupling vanishes (photon number is conserved)
    assert np.abs(u4[np.ix_(inside, ~inside)]).max() < 1e-14


def test_project_number_pattern():
    rho = number_state([1], (3,)).to_density()
    prob, cond = project(rho, pattern_mask((4,), (1,)), [0])
    assert prob == pytest.approx(1.0, abs=1e-12)
    assert cond is not None


def test_project_even_parity_on_even_cat():
    cut = 26
    plus = coherent_state(math.sqrt(2.0), cut).amps
    minus = coherent_state(-math.sqrt(2.0), cut).amps
    even = plus + minus
    even = even / np.linalg.norm(even)
    rho = FockState((cut,), even).to_density()
    prob, _ = project(rho, parity_mask(cut + 1, "even"), [0])
    assert prob == pytest.approx(1.0, abs=1e-12)


def test_project_pattern_on_transformed_bell():
    from hybridtele.bell import single_rail_bell_state

    after = beam_splitter(single_rail_bell_state("B3"), 0, 1)
    prob, _ = project(after.to_density(), pattern_mask((6, 6), (1, 0)), [0, 1])
    assert prob == pytest.approx(1.0, abs=1e-12)


def test_project_zero_probability_returns_none():
    rho = number_state([0], (3,)).to_density()
    prob, cond = project(rho, pattern_mask((4,), (3,)), [0])
    assert prob == 0.0
    assert cond is None


def test_partial_trace_product_state():
    left = coherent_state(0.7, 14)
    right = coherent_state(-0.3, 14)
    rho = tensor(left, right).to_density()
    reduced = partial_trace(rho, [1])
    assert np.abs(reduced.mat - right.to_density().mat).max() < 1e-12


def test_partial_trace_hybrid_channel_qubit_half():
    # reduced single-rail half of the pristine hybrid state; off-diagonal
    # frozen from the brute-force inner product of the coherent amplitude
    # series: <-alpha|alpha> = sum_n conj(c_n) d_n = e^(-2) at alpha = 1
    alpha, cut = 1.0, 20
    series = [math.exp(-0.5 * alpha * alpha) * alpha ** n / math.sqrt(math.factorial(n))
              for n in range(cut + 1)]
    brute_overlap = sum(c * c * (-1.0) ** n for n, c in enumerate(series))
    assert brute_overlap == pytest.approx(0.1353352832366127, abs=1e-10)

    amps = np.zeros((2, cut + 1), dtype=complex)
    amps[0] = coherent_state(alpha, cut).amps / math.sqrt(2.0)
    amps[1] = coherent_state(-alpha, cut).amps / math.sqrt(2.0)
    reduced = partial_trace(FockState((1, cut), amps).to_density(), [0])
    expected = np.array([[0.5, 0.5 * brute_overlap], [0.5 * brute_overlap, 0.5]])
    assert np.abs(reduced.mat - expected).max() < 1e-10
    assert reduced.trace() == pytest.approx(1.0, abs=1e-12)


def test_fidelity_examples():
    pure = number_state([0], (1,))
    assert fidelity(pure, pure.to_density()) == pytest.approx(1.0, abs=1e-12)
    other = number_state([1], (1,))
    assert fidelity(other, pure.to_density()) == pytest.approx(0.0, abs=1e-12)
    mixed = DensityMatrix((1,), np.diag([0.7, 0.3]))
    assert fidelity(pure, mixed) == pytest.approx(0.7, abs=1e-12)


def test_fidelity_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        fidelity(number_state([0], (2,)), number_state([0], (1,)).to_density())


def test_channel_applications_preserve_trace_and_positivity():
    cut = 20
    amps = np.zeros((6, 6), dtype=complex)
    amps[0, 1] = amps[1, 0] = 1.0 / math.sqrt(2.0)
    rho = beam_splitter(FockState((5, 5), amps).to_density(), 0, 1)
    assert rho.trace() == pytest.approx(1.0, abs=1e-10)
    assert rho.min_eigenvalue() >= -1e-10


def test_trace_distance_basics():
    a = number_state([0], (2,)).to_density()
    b = number_state([1], (2,)).to_density()
    assert trace_distance(a, a) == pytest.approx(0.0, abs=1e-14)
    assert trace_distance(a, b) == pytest.approx(1.0, abs=1e-12)

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgcd.statevector import (
    CMODADD,
    CP,
    H,
    SWAP,
    ResourceError,
    StateVector,
    apply_gate,
    apply_inverse_qft,
    distribution,
    init_state,
    iqft_gates,
    sample,
)


def basis(t, r, j, w):
    s = init_state(t, r)
    s.amps[:] = 0
    s.amps[j * r + w] = 1
    return s


def random_state(t, r, seed):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=(1 << t) * r) + 1j * rng.normal(size=(1 << t) * r)
    return StateVector(t, r, amps / np.linalg.norm(amps))


def dft_adjoint(t):
    T = 1 << t
    j, k = np.meshgrid(np.arange(T), np.arange(T), indexing="ij")
    return np.exp(-2j * np.pi * j * k / T) / math.sqrt(T)  # [k, j]


def test_init_state():
    assert np.array_equal(init_state(1, 2).amps, [1, 0, 0, 0])
    s = init_state(4, 40)
    assert len(s.amps) == 640 and s.amps[0] == 1
    assert init_state(2, 3).norm() == pytest.approx(1.0, abs=1e-12)


def test_init_state_resource_cap(monkeypatch):
    monkeypatch.setenv("QGCD_MAX_DIM", "100")
    with pytest.raises(ResourceError):
        init_state(4, 40)


def test_hadamard_on_zero():
    s = apply_gate(init_state(1, 2), H(0))
    assert np.allclose(s.amps, [1 / math.sqrt(2), 0, 1 / math.sqrt(2), 0], atol=1e-15)


def test_cmodadd_examples():
    s = apply_gate(basis(1, 40, 1, 0), CMODADD(0, 35, 40))
    assert s.amps[1 * 40 + 35] == 1
    apply_gate(s, CMODADD(0, 35, 40))
    assert s.amps[1 * 40 + 30] == 1  # (35 + 35) mod 40
    idle = apply_gate(basis(1, 40, 0, 7), CMODADD(0, 35, 40))
    assert idle.amps[7] == 1


def test_cmodadd_reads_the_named_control_bit():
    s = apply_gate(basis(3, 5, 0b100, 1), CMODADD(2, 3, 5))
    assert s.amps[0b100 * 5 + 4] == 1
    s = apply_gate(basis(3, 5, 0b011, 1), CMODADD(2, 3, 5))
    assert s.amps[0b011 * 5 + 1] == 1


@pytest.mark.parametrize("c, r", [(35, 40), (4, 6), (5, 7), (0, 3), (9, 12)])
def test_cmodadd_cycle_length(c, r):
    cycle = r // math.gcd(c, r)
    for w in range(r):
        s = basis(1, r, 1, w)
        for n in range(1, cycle + 1):
            apply_gate(s, CMODADD(0, c, r))
            back = s.amps[r + w] == 1
            assert back == (n == cycle)


def test_cp_phase():
    s = random_state(3, 2, 1)
    before = s.amps.copy()
    apply_gate(s, CP(0, 2, Fraction(1, 4)))
    j = np.arange(8).repeat(2)
    both = ((j & 1) == 1) & ((j >> 2) & 1 == 1)
    assert np.allclose(s.amps[both], before[both] * np.exp(1j * math.pi / 4))
    assert np.array_equal(s.amps[~both], before[~both])


def test_swap():
    s = apply_gate(basis(3, 2, 0b001, 1), SWAP(0, 2))
    assert s.amps[0b100 * 2 + 1] == 1


def test_gate_index_errors():
    with pytest.raises(IndexError):
        apply_gate(init_state(2, 3), H(2))
    with pytest.raises(ValueError):
        apply_gate(init_state(2, 3), CMODADD(0, 3, 3))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(2, 9), st.integers(0, 2**32 - 1), st.data())
def test_gates_preserve_norm(t, r, seed, data):
    s = random_state(t, r, seed)
    gate = data.draw(
        st.one_of(
            st.builds(H, st.integers(0, t - 1)),
            st.builds(CP, st.integers(0, t - 1), st.integers(0, t - 1), st.fractions(-4, 4, max_denominator=64)),
            st.builds(CMODADD, st.integers(0, t - 1), st.integers(0, r - 1), st.just(r)),
            st.builds(SWAP, st.integers(0, t - 1), st.integers(0, t - 1)),
        )
    )
    apply_gate(s, gate)
    assert s.norm() == pytest.approx(1.0, abs=1e-12)


def test_inverse_qft_t1_is_hadamard():
    s = apply_gate(init_state(1, 2), H(0))
    apply_inverse_qft(s)
    assert np.allclose(s.amps, [1, 0, 0, 0], atol=1e-15)


def test_inverse_qft_of_uniform_is_zero():
    s = init_state(4, 3)
    s.amps[:] = 0
    s.grid()[:, 2] = 0.25
    apply_inverse_qft(s)
    assert abs(s.grid()[0, 2]) == pytest.approx(1.0, abs=1e-12)


def test_inverse_qft_t3_basis_state():
    s = apply_inverse_qft(basis(3, 2, 1, 0))
    want = np.exp(-2j * np.pi * np.arange(8) / 8) / math.sqrt(8)
    assert np.allclose(s.grid()[:, 0], want, atol=1e-12)


@pytest.mark.parametrize("t", range(1, 7))
def test_inverse_qft_matrix_equals_dft_adjoint(t):
    T = 1 << t
    cols = [apply_inverse_qft(basis(t, 2, j, 0)).grid()[:, 0] for j in range(T)]
    assert np.abs(np.array(cols).T - dft_adjoint(t)).max() < 1e-10


@pytest.mark.parametrize("t", range(1, 9))
def test_inverse_qft_then_forward_is_identity(t):
    s = random_state(t, 3, t)
    original = s.amps.copy()
    apply_inverse_qft(s)
    for g in reversed(iqft_gates(t)):
        if isinstance(g, CP):
            g = CP(g.control, g.target, -g.phase)
        apply_gate(s, g)
    assert np.abs(s.amps - original).max() < 1e-10


def test_distribution_and_sampling():
    assert distribution(init_state(3, 4))[0] == 1
    s = random_state(3, 4, 7)
    assert distribution(s).sum() == pytest.approx(1.0, abs=1e-12)
    rng = np.random.default_rng
    assert np.array_equal(sample(s, rng(5), 100), sample(s, rng(5), 100))
    assert set(sample(init_state(3, 4), rng(0), 50)) == {0}

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qrpl import gates as G
from qrpl.errors import DimensionMismatch, LayoutMismatch, NonUnitary, UnknownWire
from qrpl.model import WireId
from qrpl.qstate import (
    CoinBasis,
    StateVector,
    apply_unitary,
    components,
    extract_component,
    recombine,
    state_close,
    state_close_up_to_phase,
    state_from_json,
    state_to_json,
)

A, B, C = WireId("a"), WireId("b"), WireId("c")
R = 1 / math.sqrt(2)


def sv(amps, wires=(A, B), dims=None):
    dims = dims or [2] * len(wires)
    return StateVector(tuple(zip(wires, dims)), np.asarray(amps, dtype=complex))


def rand_state(rng, dims):
    v = rng.normal(size=math.prod(dims)) + 1j * rng.normal(size=math.prod(dims))
    return v / np.linalg.norm(v)


def rand_unitary(rng, d):
    q, r = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


seeds = st.integers(0, 2**32 - 1)


def test_x_flips():
    out = apply_unitary(sv([1, 0], (A,)), [A], G.X)
    assert np.array_equal(out.amplitudes, [0, 1])


def test_hadamard_amplitudes():
    out = apply_unitary(sv([1, 0], (A,)), [A], G.H)
    assert out.amplitudes[0] == pytest.approx(0.7071067811865476, abs=1e-15)
    assert out.amplitudes[1] == pytest.approx(0.7071067811865476, abs=1e-15)


def test_swap_from_three_cnots():
    s = sv([0, 1, 0, 0])  # |01>
    for ctrl, tgt in ((A, B), (B, A), (A, B)):
        s = apply_unitary(s, [ctrl, tgt], G.CNOT)
    assert np.allclose(s.amplitudes, [0, 0, 1, 0])


def test_register_order_matters():
    s = apply_unitary(sv([0, 0, 1, 0]), [B, A], G.CNOT)  # control b = 0
    assert np.allclose(s.amplitudes, [0, 0, 1, 0])
    s = apply_unitary(sv([0, 1, 0, 0]), [B, A], G.CNOT)  # |01>, control b = 1
    assert np.allclose(s.amplitudes, [0, 0, 0, 1])


def test_apply_errors():
    s = sv([1, 0, 0, 0])
    with pytest.raises(DimensionMismatch):
        apply_unitary(s, [A], G.CNOT)
    with pytest.raises(NonUnitary):
        apply_unitary(s, [A], np.diag([1, 2]))
    with pytest.raises(UnknownWire):
        apply_unitary(s, [C], G.X)


def test_qudit_wire():
    shift = np.roll(np.eye(3), 1, axis=0)
    s = StateVector(((A, 3), (B, 2)), np.eye(6)[1])  # a=0, b=1
    out = apply_unitary(s, [A], shift)
    assert np.allclose(out.amplitudes, np.eye(6)[3])  # a=1, b=1


def test_component_computational():
    s = sv(np.kron([R, R], [0, 1]))
    t = extract_component(s, CoinBasis.computational([A], [2]), 0)
    assert t.wires == (B,)
    assert np.allclose(t.amplitudes, [0, R])


def test_component_orthogonal_branch_is_zero():
    plus_minus = CoinBasis([A], [2], [[R, R], [R, -R]])
    s = sv(np.kron([R, R], [1, 0]))
    assert np.allclose(extract_component(s, plus_minus, 1).amplitudes, 0)


def test_bell_components_and_recombine():
    bell = sv([R, 0, 0, R])
    basis = CoinBasis.computational([A], [2])
    comps = components(bell, basis)
    assert np.allclose(comps[1].amplitudes, [0, R])
    assert state_close(recombine(basis, comps), bell, 1e-15)


def test_recombine_from_parts():
    basis = CoinBasis.computational([A], [2])
    out = recombine(basis, [sv([0, 1], (B,)), sv([0, 0], (B,))])
    assert np.allclose(out.amplitudes, [0, 1, 0, 0])


def test_recombine_restores_requested_layout():
    rng = np.random.default_rng(3)
    s = sv(rand_state(rng, [2, 2, 2]), (A, B, C))
    basis = CoinBasis.computational([B], [2])
    back = recombine(basis, components(s, basis), s.layout)
    assert back.layout == s.layout
    assert state_close(back, s, 1e-12)
    with pytest.raises(LayoutMismatch):
        recombine(basis, [sv([1, 0], (A,)), sv([1, 0], (C,))])


def test_closeness_predicates():
    rng = np.random.default_rng(0)
    b = sv(rand_state(rng, [2, 2]))
    a = StateVector(b.layout, np.exp(1j * math.pi / 7) * b.amplitudes)
    assert state_close(b, b, 0.0)
    assert not state_close(a, b) and state_close_up_to_phase(a, b)
    zero, one = sv([1, 0], (A,)), sv([0, 1], (A,))
    assert not state_close(zero, one) and not state_close_up_to_phase(zero, one)
    with pytest.raises(LayoutMismatch):
        state_close(zero, sv([1, 0], (B,)))


def test_json_round_trip():
    rng = np.random.default_rng(1)
    s = StateVector(((WireId("q", (1,)), 2), (WireId("q", (2,)), 3)), rand_state(rng, [2, 3]))
    obj = state_to_json(s)
    assert obj["layout"][1] == {"var": "q", "indices": [2], "dim": 3}
    back = state_from_json(obj)
    assert back.layout == s.layout and np.array_equal(back.amplitudes, s.amplitudes)


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 2))
def test_unitary_preserves_norm(seed, nw, k):
    rng = np.random.default_rng(seed)
    wires = [WireId("q", (i,)) for i in range(nw)]
    s = sv(rand_state(rng, [2] * nw), wires)
    reg = list(rng.permutation(nw)[: min(k, nw)])
    out = apply_unitary(s, [wires[i] for i in reg], rand_unitary(rng, 2 ** len(reg)))
    assert abs(out.norm - s.norm) < 1e-9


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_unitary_is_linear(seed):
    rng = np.random.default_rng(seed)
    u, v = rand_state(rng, [2, 2, 2]), rand_state(rng, [2, 2, 2])
    al, be = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    g = rand_unitary(rng, 4)
    wires = (A, B, C)
    f = lambda x: apply_unitary(sv(x, wires), [C, A], g).amplitudes
    assert np.max(np.abs(f(al * u + be * v) - (al * f(u) + be * f(v)))) < 1e-9


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 2), st.integers(1, 2))
def test_parseval_and_resolution_of_identity(seed, ncoin, nrest):
    rng = np.random.default_rng(seed)
    wires = [WireId("q", (i,)) for i in range(ncoin + nrest)]
    s = sv(rand_state(rng, [2] * len(wires)), wires)
    coin = [wires[i] for i in rng.permutation(len(wires))[:ncoin]]
    basis = CoinBasis(coin, [2] * ncoin, rand_unitary(rng, 2**ncoin))
    assert basis.is_orthonormal()
    comps = components(s, basis)
    assert abs(sum(c.norm**2 for c in comps) - s.norm**2) < 1e-9
    assert state_close(recombine(basis, comps, s.layout), s, 1e-12)

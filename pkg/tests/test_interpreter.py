import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from circuits import embed, random_qif_program
from qrpl import gates as G
from qrpl.errors import (
    ClassicalDivergence,
    CoinViolation,
    FuelExhausted,
    LayoutMismatch,
    RecursionLimit,
    UnknownProcedure,
)
from qrpl.interpreter import RunLimits, prepare, run, trace
from qrpl.oracle import matrix_of
from qrpl.qstate import StateVector, state_close
from qrpl.syntax import parse

R = 1 / math.sqrt(2)


def basis_out(program, index, **kw):
    _, psi = run(program, state=index, **kw)
    return psi.amplitudes


def test_cnot_program(stdlib):
    p = stdlib("cnot")
    assert np.allclose(basis_out(p, 0b10), np.eye(4)[0b11])
    assert np.allclose(basis_out(p, 0b00), np.eye(4)[0b00])


def test_toffoli_program(stdlib):
    p = stdlib("toffoli")
    assert np.allclose(basis_out(p, 0b110), np.eye(8)[0b111])
    assert np.allclose(basis_out(p, 0b100), np.eye(8)[0b100])


def test_skip_leaves_everything():
    p = parse("var x : int := 3; qubit a; qubit b; main { skip }")
    psi = StateVector.basis(prepare(p).layout, 0)
    psi = StateVector(psi.layout, [0.6, 0, 0.8j, 0])
    store, out = run(p, state=psi)
    assert store.lookup("x") == 3
    assert np.array_equal(out.amplitudes, psi.amplitudes)


def test_qif_superposed_coin(stdlib):
    al, be = 0.6, 0.8j
    inst = prepare(stdlib("cnot"))
    psi = StateVector(inst.layout, np.kron([al, be], [1, 0]))
    _, out = run(inst, state=psi)
    assert np.allclose(out.amplitudes, [al, 0, 0, be], atol=1e-15)


def test_plus_minus_case_is_cnot_from_q2(stdlib):
    m = matrix_of(stdlib("basis_change"), "Lhs()").entries
    want = embed(G.CNOT, [1, 0], 2)
    assert np.max(np.abs(m - want)) < 1e-12


def test_divergent_branch_stores():
    p = parse("""
        var x : int;
        qubit a; qubit b;
        main { qif[a] case |0> -> x := 1; case |1> -> x := 2 fiq }
    """)
    with pytest.raises(ClassicalDivergence):
        run(p)


def test_agreeing_branch_stores_are_kept():
    p = parse("""
        var x : int;
        qubit a; qubit b;
        main { qif[a] case |0> -> x := 1; H[b]; case |1> -> X[b]; x := 1 fiq }
    """)
    store, _ = run(p)
    assert store.lookup("x") == 1


def test_zero_amplitude_branch_still_runs():
    # the |1> component is zero, yet its divergent store is still detected
    p = parse("var x : int; qubit a; qubit b; main { qif[a] case |0> -> skip; case |1> -> x := 2 fiq }")
    with pytest.raises(ClassicalDivergence):
        run(p, state=0)
    p = parse("qubit a; qubit b; main { qif[a] case |0> -> skip; case |1> -> Undefined() fiq }")
    with pytest.raises(UnknownProcedure):
        run(p, state=0)


def test_branch_touching_coin_is_rejected():
    p = parse("qubit a; qubit b; main { qif[a] case |0> -> skip; case |1> -> H[a] fiq }")
    with pytest.raises(CoinViolation):
        run(p)
    nested = parse("""
        qubit a; qubit b; qubit c;
        main { qif[a] case |0> -> skip; case |1> -> qif[b, a] case |00> -> skip; case |01> -> skip;
               case |10> -> skip; case |11> -> skip fiq fiq }
    """)
    with pytest.raises(CoinViolation):
        run(nested)


def test_forall_one_qubit_matches_explicit_qif():
    decls = "qubit q[1:2];\n"
    forall = parse(decls + "main { qif[q[1:1]] forall x { |x> -> Ry(0.3 + x)[q[2]] } }")
    explicit = parse(decls + "main { qif[q[1]] case |0> -> Ry(0.3)[q[2]]; case |1> -> Ry(1.3)[q[2]] fiq }")
    assert np.array_equal(matrix_of(forall).entries, matrix_of(explicit).entries)


def test_forall_two_qubits_is_toffoli():
    p = parse("qubit q[1:3]; main { qif[q[1:2]] forall x { |x> -> if x = 3 then X[q[3]] fi } }")
    assert np.array_equal(matrix_of(p).entries, embed(np.eye(8)[[0, 1, 2, 3, 4, 5, 7, 6]], [0, 1, 2], 3))


def test_forall_body_assigning_global_diverges():
    p = parse("var y : int; qubit q[1:2]; main { qif[q[1:1]] forall x { |x> -> y := x } }")
    with pytest.raises(ClassicalDivergence):
        run(p)


def test_block_restores_locals():
    p = parse("var x : int := 1; qubit a; main { begin local x := 5; x := x + 1 end }")
    store, _ = run(p)
    assert store.lookup("x") == 1


def test_block_in_recursion_keeps_caller_value(stdlib):
    store, psi = run(stdlib("cstar_local"), state=0b110)
    assert store.lookup("first") == 1
    assert np.allclose(psi.amplitudes, np.eye(8)[0b111])


def test_empty_block_is_its_body():
    a = parse("var x : int; qubit q; main { begin x := 4; H[q] end }")
    b = parse("var x : int; qubit q; main { x := 4; H[q] }")
    sa, pa = run(a)
    sb, pb = run(b)
    assert sa == sb and np.array_equal(pa.amplitudes, pb.amplitudes)


def test_cstar_base_case_applies_u(stdlib):
    _, psi = run(stdlib("cstar_param"), "CStar(2, 2)", state=0)
    assert np.allclose(psi.amplitudes, np.eye(8)[0b010])


def test_recursion_limit():
    p = parse("qubit q; proc P { P() } main { P() }")
    with pytest.raises(RecursionLimit):
        run(p, limits=RunLimits(recursion_depth=10))
    with pytest.raises(RecursionLimit):
        run(parse("qubit q; proc P(k) { P(k + 1) } main { P(0) }"), limits=RunLimits(recursion_depth=10))


def test_recursion_depth_default_is_deep():
    p = parse("var k : int; qubit q; proc P(m) { if m > 0 then X[q]; P(m - 1) fi } main { P(4095) }")
    _, psi = run(p)
    assert np.allclose(psi.amplitudes, [0, 1])
    with pytest.raises(RecursionLimit):
        run(p, "P(4096)")


def test_fuel_limit():
    p = parse("var x : int; qubit q; main { while true do x := x + 1 od }")
    with pytest.raises(FuelExhausted):
        run(p, limits=RunLimits(loop_fuel=100))


def test_qsp_single_qubit_uniform(stdlib):
    _, psi = run(stdlib("qsp"), "QSP(0, 1)", env={"n": 1, "amod": [1.0, 1.0], "aphase": [0.0, 0.0]})
    assert np.allclose(psi.amplitudes, [R, R], atol=1e-15)


def test_initial_state_layout_checked(stdlib):
    bad = StateVector(((prepare(stdlib("cnot")).layout[0]),), [1, 0])
    with pytest.raises(LayoutMismatch):
        run(stdlib("cnot"), state=bad)


def test_trace_shapes(stdlib, prog):
    events, _, _ = trace(stdlib("cnot"))
    assert [e.rule for e in events] == ["QC", "GA", "GA"]
    assert [e.detail for e in events[1:]] == ["I[q2]", "X[q2]"]
    assert [e.rule for e in trace(prog("qubit q; main { skip }"))[0]] == ["SK"]

    events, *_ = trace(stdlib("cstar_local"), env={"first": 1, "last": 2})
    rules = [e.rule for e in events]
    assert rules.count("CR") == 2 and rules.count("BS") == 1
    assert max(e.depth for e in events) == 2

    events, *_ = trace(stdlib("cstar_param"), env={"lo": 1, "hi": 2})
    rules = [e.rule for e in events]
    assert rules.count("RC") == 2 and rules.count("BS") == 2


def test_trace_run_agree(stdlib):
    p = stdlib("qft")
    _, s1, psi1 = trace(p, env={"n": 3}, state=5)
    s2, psi2 = run(p, env={"n": 3}, state=5)
    assert s1 == s2 and np.array_equal(psi1.amplitudes, psi2.amplitudes)


# invariants

def _random_state(rng, layout):
    d = math.prod(k for _, k in layout)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return StateVector(layout, v / np.linalg.norm(v))


@pytest.mark.parametrize("name,env", [("qft", {"n": 3}), ("fredkin", {}), ("qraqm", {"n": 2}), ("qsp", {})])
def test_norm_store_independence_and_determinism(stdlib, name, env):
    inst = prepare(stdlib(name), env)
    rng = np.random.default_rng(11)
    psi = _random_state(rng, inst.layout)
    s1, out1 = run(inst, state=psi)
    s2, out2 = run(inst, state=psi)
    assert abs(out1.norm - 1) < 1e-9
    assert s1 == s2 and np.array_equal(out1.amplitudes, out2.amplitudes)
    for k in range(inst.dim):
        assert run(inst, state=k)[0] == s1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_qif_matrix_is_multiplexor(seed):
    source, _, _, want = random_qif_program(np.random.default_rng(seed))
    got = matrix_of(parse(source))
    assert got.is_unitary()
    assert np.max(np.abs(got.entries - want)) < 1e-9


def test_run_is_linear(stdlib):
    inst = prepare(stdlib("qft"), {"n": 3})
    rng = np.random.default_rng(5)
    u, v = _random_state(rng, inst.layout), _random_state(rng, inst.layout)
    al, be = 0.3 - 0.2j, 1.1 + 0.4j
    mix = StateVector(inst.layout, al * u.amplitudes + be * v.amplitudes)
    f = lambda s: run(inst, state=s)[1].amplitudes
    assert np.max(np.abs(f(mix) - (al * f(u) + be * f(v)))) < 1e-9


def test_state_close_after_swap_identity(stdlib):
    p = parse("qubit a; qubit b; main { CNOT[a, b]; CNOT[b, a]; CNOT[a, b]; SWAP[a, b] }")
    rng = np.random.default_rng(2)
    psi = _random_state(rng, prepare(p).layout)
    assert state_close(run(p, state=psi)[1], psi, 1e-12)

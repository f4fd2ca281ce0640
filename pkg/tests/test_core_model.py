import pytest
from hypothesis import given, strategies as st

from qrpl.classical import exec_assign
from qrpl.errors import DuplicateTarget, DuplicateWire, OutOfRange, SizeCap, TypeMismatch, Unbound
from qrpl.model import QuantumDecl, WireId, instantiate, resolve_register, resolve_wire
from qrpl.syntax import nodes as n
from qrpl.syntax import parse, parse_expr, parse_stmt
from qrpl.values import ClassicalStore, store_update

Q = {"q": QuantumDecl("q", 2, ((0, 20), (0, 20))), "p": QuantumDecl("p"), "r": QuantumDecl("r", 2, ((1, 5),))}


def store(**kw):
    s = ClassicalStore()
    for k, v in kw.items():
        s = s.bind(k, v)
    return s


def test_subscripted_wire_resolves_from_store():
    w = resolve_wire(store(x=5, y=-1), "q", [parse_expr("2 * x + y"), parse_expr("7 - 3 * y")], Q)
    assert w == WireId("q", (9, 10))
    assert str(w) == "q[9, 10]"


def test_simple_variable_has_no_indices():
    assert resolve_wire(store(), "p", [], Q) == WireId("p")


def test_index_outside_declared_range():
    decls = {"q": QuantumDecl("q", 2, ((0, 2),))}
    with pytest.raises(OutOfRange):
        resolve_wire(store(m=3), "q", [parse_expr("m")], decls)


def test_subscript_must_be_int():
    with pytest.raises(TypeMismatch):
        resolve_wire(store(x=1.5), "r", [parse_expr("x")], Q)


def test_unknown_quantum_variable():
    with pytest.raises(Unbound):
        resolve_wire(store(), "zz", [], Q)


def test_unbound_subscript_variable():
    with pytest.raises(Unbound):
        resolve_wire(store(), "r", [parse_expr("i")], Q)


def test_register_in_order():
    reg = resolve_register(store(), [("r", [1]), ("r", [2])], Q)
    assert list(reg) == [WireId("r", (1,)), WireId("r", (2,))]


def test_register_rejects_repeated_wire():
    with pytest.raises(DuplicateWire):
        resolve_register(store(i=1, j=1), [("r", [parse_expr("i")]), ("r", [parse_expr("j")])], Q)


def test_section_expands_like_explicit_list():
    section = n.RegItem("r", (n.RangeSub(n.IntLit(1), n.IntLit(3)),))
    explicit = [("r", [k]) for k in (1, 2, 3)]
    assert resolve_register(store(), [section], Q) == resolve_register(store(), explicit, Q)


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_resolution_is_deterministic(x, y):
    subs = [parse_expr("x + 10"), parse_expr("y + 10")]
    s = store(x=x, y=y)
    assert resolve_wire(s, "q", subs, Q) == resolve_wire(s, "q", subs, Q)


def test_declaration_invariants():
    with pytest.raises(TypeMismatch):
        QuantumDecl("q", 1)
    with pytest.raises(OutOfRange):
        QuantumDecl("q", 2, ((3, 1),))
    d = QuantumDecl("q", 3, ((0, 1), (1, 2)))
    assert d.wire_count == 4
    assert [w.indices for w in d.wires()] == [(0, 1), (0, 2), (1, 1), (1, 2)]


def test_simultaneous_swap():
    s = exec_assign(store(x=1, y=2), parse_stmt("x, y := y, x"))
    assert s == store(x=2, y=1)


def test_increment():
    assert exec_assign(store(x=1), parse_stmt("x := x + 1")) == store(x=2)


def test_duplicate_target():
    with pytest.raises(DuplicateTarget):
        store_update(store(x=1), ["x", "x"], [1, 2])


def test_kind_is_kept_on_update():
    with pytest.raises(TypeMismatch):
        store_update(store(x=1), ["x"], [True])
    assert store_update(store(x=1.0), ["x"], [2]).lookup("x") == 2.0


@given(st.integers(-100, 100), st.integers(-100, 100), st.integers(-100, 100))
def test_simultaneous_matches_sequential_when_disjoint(a, b, c):
    s = store(x=a, y=b, u=c, v=0)
    simul = exec_assign(s, parse_stmt("x, y := u + 1, u * 2"))
    seq = exec_assign(exec_assign(s, parse_stmt("x := u + 1")), parse_stmt("y := u * 2"))
    assert simul == seq


def test_store_equality_is_exact_and_kind_aware():
    assert store(x=1) != store(x=1.0)
    assert store(x=0.1 + 0.2) != store(x=0.3)
    assert store(x=float("nan")) == store(x=float("nan"))
    with pytest.raises(Unbound):
        store().lookup("x")


def test_amplitude_cap():
    p = parse("qubit q[1:21];")
    with pytest.raises(SizeCap):
        instantiate(p)
    assert instantiate(parse("qubit q[1:3];"), cap=8).dim == 8


def test_layout_is_declaration_order_row_major():
    inst = instantiate(parse("qubit b; qudit(3) a[0:1, 2:3]; qubit c;"))
    assert [str(w) for w, _ in inst.layout] == ["b", "a[0, 2]", "a[0, 3]", "a[1, 2]", "a[1, 3]", "c"]
    assert [d for _, d in inst.layout] == [2, 3, 3, 3, 3, 2]

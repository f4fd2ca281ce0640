"""Quantum variable declarations, wires, registers and program instantiation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .classical import eval_complex, eval_expr, eval_int
from .errors import (
    DuplicateWire,
    NonUnitary,
    OutOfRange,
    SizeCap,
    TypeMismatch,
    Unbound,
    UnknownGate,
)
from .gates import BUILTINS, builtin_matrix, is_unitary
from .syntax import nodes as n
from .values import ClassicalArray, ClassicalStore, coerce, kind_of

DEFAULT_CAP = 2**20


@dataclass(frozen=True)
class QuantumDecl:
    """A declared quantum variable with finite index ranges.

    An empty ``index_ranges`` means a simple variable (one wire).
    """

    name: str
    site_dim: int = 2
    index_ranges: tuple = ()

    def __post_init__(self):
        if self.site_dim < 2:
            raise TypeMismatch(f"{self.name}: site dimension must be at least 2")
        for lo, hi in self.index_ranges:
            if lo > hi:
                raise OutOfRange(f"{self.name}: empty index range [{lo}:{hi}]")

    @property
    def arity(self) -> int:
        return len(self.index_ranges)

    @property
    def wire_count(self) -> int:
        count = 1
        for lo, hi in self.index_ranges:
            count *= hi - lo + 1
        return count

    def wires(self) -> list["WireId"]:
        """All wires, indices ascending (row-major)."""
        axes = [range(lo, hi + 1) for lo, hi in self.index_ranges]
        return [WireId(self.name, tuple(ix)) for ix in itertools.product(*axes)]

    def check(self, indices: tuple) -> None:
        if len(indices) != self.arity:
            raise TypeMismatch(
                f"{self.name} takes {self.arity} subscript(s), got {len(indices)}"
            )
        for i, (lo, hi) in zip(indices, self.index_ranges):
            if not lo <= i <= hi:
                raise OutOfRange(f"{self.name}{list(indices)}: index {i} outside [{lo}:{hi}]")


@dataclass(frozen=True)
class WireId:
    var: str
    indices: tuple = ()

    def __str__(self):
        if not self.indices:
            return self.var
        return f"{self.var}[{', '.join(map(str, self.indices))}]"


@dataclass(frozen=True)
class Register:
    wires: tuple

    def __iter__(self):
        return iter(self.wires)

    def __len__(self):
        return len(self.wires)

    def __getitem__(self, i):
        return self.wires[i]

    def __str__(self):
        return "(" + ", ".join(map(str, self.wires)) + ")"


def _subscripts_of(spec):
    if isinstance(spec, n.RegItem):
        return spec.var, spec.subscripts
    var, subs = spec
    return var, tuple(subs)


def _to_expr(x):
    return n.IntLit(x) if isinstance(x, int) and not isinstance(x, bool) else x


def resolve_wire(store: ClassicalStore, var: str, subscripts: Sequence, decls: Mapping[str, QuantumDecl]) -> WireId:
    """Evaluate the subscripts of ``var[...]`` and check them against its declaration."""
    try:
        decl = decls[var]
    except KeyError:
        raise Unbound(f"undeclared quantum variable {var!r}") from None
    indices = tuple(eval_int(store, _to_expr(s), f"subscript of {var}") for s in subscripts)
    decl.check(indices)
    return WireId(var, indices)


def _expand(store, var, subs, decls):
    if not any(isinstance(s, n.RangeSub) for s in subs):
        return [resolve_wire(store, var, subs, decls)]
    axes = []
    for s in subs:
        if isinstance(s, n.RangeSub):
            lo = eval_int(store, s.lo, f"section bound of {var}")
            hi = eval_int(store, s.hi, f"section bound of {var}")
            if lo > hi:
                raise OutOfRange(f"empty section {var}[{lo}:{hi}]")
            axes.append(range(lo, hi + 1))
        else:
            axes.append([eval_int(store, _to_expr(s), f"subscript of {var}")])
    return [resolve_wire(store, var, ix, decls) for ix in itertools.product(*axes)]


def resolve_register(store: ClassicalStore, specs, decls: Mapping[str, QuantumDecl]) -> Register:
    """Resolve a list of register items (sections expand in ascending order)."""
    wires = []
    for spec in specs:
        var, subs = _subscripts_of(spec)
        wires.extend(_expand(store, var, subs, decls))
    if len(set(wires)) != len(wires):
        seen = set()
        dup = next(w for w in wires if w in seen or seen.add(w))
        raise DuplicateWire(f"wire {dup} appears twice in register")
    return Register(tuple(wires))


@dataclass
class Instance:
    """A program bound to concrete sizes, initial classical values and gate matrices."""

    program: n.Program
    quantum: dict
    layout: tuple
    store: ClassicalStore
    gates: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        d = 1
        for _, k in self.layout:
            d *= k
        return d

    @property
    def num_wires(self) -> int:
        return len(self.layout)


def _env_value(name, kind, value):
    if isinstance(value, (list, tuple)):
        raise TypeMismatch(f"{name} is a scalar; got a list")
    return coerce(value, kind, name)


def gate_from_text(value, store):
    if isinstance(value, str):
        from .syntax.parser import Parser

        p = Parser(value)
        base = p.ident().text
        params = p.paren_args() if p.at("(") else ()
        return builtin_matrix(base, [eval_expr(store, e) for e in params])
    return np.asarray(value, dtype=complex)


def instantiate(program: n.Program, env: Mapping | None = None, gates: Mapping | None = None,
                cap: int = DEFAULT_CAP, tol: float = 1e-9) -> Instance:
    """Evaluate declarations in source order.

    ``env`` overrides the initial value of classical variables (lists for
    arrays); names that are not declared become extra bindings. ``gates``
    overrides user gate definitions by matrix or by a built-in gate text such
    as ``"Deutsch(0.7)"``.
    """
    env = dict(env or {})
    gate_over = dict(gates or {})
    store = ClassicalStore()
    quantum, layout, user_gates = {}, [], {}
    amplitudes = 1
    for d in program.decls:
        if isinstance(d, n.VarDecl):
            if d.name in store:
                raise TypeMismatch(f"classical variable {d.name} declared twice")
            if d.range is None:
                if d.name in env:
                    value = _env_value(d.name, d.kind, env.pop(d.name))
                elif d.init is not None:
                    value = coerce(eval_expr(store, d.init), d.kind, d.name)
                else:
                    value = {"int": 0, "real": 0.0, "bool": False}[d.kind]
            else:
                lo = eval_int(store, d.range.lo, f"bound of {d.name}")
                hi = eval_int(store, d.range.hi, f"bound of {d.name}")
                if d.name in env:
                    items = env.pop(d.name)
                elif d.init is not None:
                    items = [eval_expr(store, e) for e in d.init]
                else:
                    items = None
                value = ClassicalArray.filled(d.kind, lo, hi, items)
            store = store.bind(d.name, value)
        elif isinstance(d, n.QuantumVarDecl):
            if d.name in quantum:
                raise TypeMismatch(f"quantum variable {d.name} declared twice")
            ranges = tuple(
                (eval_int(store, r.lo, f"bound of {d.name}"), eval_int(store, r.hi, f"bound of {d.name}"))
                for r in d.ranges
            )
            decl = QuantumDecl(d.name, d.site_dim, ranges)
            amplitudes *= d.site_dim ** decl.wire_count
            if amplitudes > cap:
                raise SizeCap(f"declarations need more than {cap} amplitudes")
            quantum[d.name] = decl
            layout.extend((w, d.site_dim) for w in decl.wires())
        elif isinstance(d, n.GateDecl):
            if d.name in gate_over:
                mat = gate_from_text(gate_over.pop(d.name), store)
            elif d.rows is not None:
                mat = np.array([[eval_complex(x, store) for x in row] for row in d.rows], dtype=complex)
            elif d.base in user_gates:
                if d.params:
                    raise TypeMismatch(f"user gate {d.base} takes no parameters")
                mat = user_gates[d.base]
            elif d.base in BUILTINS:
                mat = builtin_matrix(d.base, [eval_expr(store, e) for e in d.params])
            else:
                raise UnknownGate(f"unknown gate {d.base!r} in definition of {d.name}")
            if not is_unitary(mat, tol):
                raise NonUnitary(f"gate {d.name} is not unitary")
            user_gates[d.name] = mat
    for name, value in env.items():
        if isinstance(value, (list, tuple)):
            value = ClassicalArray.filled(kind_of(value[0]) if value else "real", 0, len(value) - 1, value)
        store = store.bind(name, value)
    if gate_over:
        raise UnknownGate(f"gate override for undeclared gate(s) {sorted(gate_over)}")
    return Instance(program, quantum, tuple(layout), store, user_gates)

"""Big-step interpreter for quantum recursive programs.

A configuration is a statement, a classical store and a state vector. The
interpreter computes the terminal configuration reached by the transition
rules; ``trace`` records one event per rule application.

Two constraints are enforced dynamically:

* coin lock: while the branches of a ``qif`` run, the coin wires (and the
  coins of every enclosing ``qif``) may not be touched by gates or used as a
  nested coin;
* branch agreement: every branch of a ``qif`` must end in the same classical
  store, zero-amplitude branches included.
"""
from __future__ import annotations

import math
import sys
import threading
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classical import (
    DEFAULT_FUEL,
    enter_block,
    eval_bool,
    eval_complex,
    eval_expr,
    exec_assign,
    leave_block,
)
from .errors import (
    BranchCount,
    ClassicalDivergence,
    CoinViolation,
    DimensionMismatch,
    FuelExhausted,
    LayoutMismatch,
    NonUnitary,
    RecursionLimit,
    TypeMismatch,
    UnknownGate,
    UnknownProcedure,
)
from .gates import BUILTINS, builtin_matrix
from .model import Instance, instantiate, resolve_register
from .qstate import CoinBasis, StateVector, apply_unitary, components, recombine
from .syntax import nodes as n
from .syntax.parser import parse_call
from .values import ClassicalStore

DEFAULT_RECURSION_DEPTH = 4096

_STACK_BYTES = 1 << 30
_FRAMES_PER_LEVEL = 40


@dataclass(frozen=True)
class RunLimits:
    recursion_depth: int = DEFAULT_RECURSION_DEPTH
    loop_fuel: int = DEFAULT_FUEL
    tol: float = 1e-9

    def __post_init__(self):
        if self.recursion_depth <= 0 or self.loop_fuel <= 0:
            raise ValueError("run limits must be positive")


@dataclass(frozen=True)
class TraceEvent:
    rule: str
    line: Optional[int]
    col: Optional[int]
    depth: int
    detail: str = ""

    def __str__(self):
        where = f"{self.line}:{self.col}" if self.line is not None else "-"
        return f"{self.rule:<3} {where:>7} depth={self.depth} {self.detail}".rstrip()


def ket_vector(ket, dims) -> np.ndarray:
    """Amplitude vector of a constant branch ket over a coin with ``dims``."""
    d = math.prod(dims)
    if isinstance(ket, n.BitKet):
        if len(ket.digits) != len(dims):
            raise DimensionMismatch(f"ket |{ket.digits}> on a coin of {len(dims)} wire(s)")
        index = 0
        for ch, k in zip(ket.digits, dims):
            digit = int(ch)
            if digit >= k:
                raise DimensionMismatch(f"digit {digit} in |{ket.digits}> exceeds site dimension {k}")
            index = index * k + digit
        v = np.zeros(d, dtype=complex)
        v[index] = 1.0
        return v
    if isinstance(ket, n.NamedKet):
        if tuple(dims) != (2,):
            raise DimensionMismatch(f"|{ket.sign}> needs a single-qubit coin")
        s = 1 / math.sqrt(2)
        return np.array([s, s if ket.sign == "+" else -s], dtype=complex)
    if isinstance(ket, n.VectorKet):
        if len(ket.entries) != d:
            raise DimensionMismatch(f"explicit ket of length {len(ket.entries)} on a coin of dimension {d}")
        return np.array([eval_complex(x) for x in ket.entries], dtype=complex)
    raise TypeMismatch(f"ket {ket!r} is not constant")


def coin_kets(branches, dims, tol: float = 1e-9) -> np.ndarray:
    d = math.prod(dims)
    if len(branches) != d:
        raise BranchCount(f"coin of dimension {d} needs {d} branches, got {len(branches)}")
    kets = np.array([ket_vector(b.ket, dims) for b in branches])
    gram = kets.conj() @ kets.T
    if np.max(np.abs(gram - np.eye(d)), initial=0.0) > tol:
        raise NonUnitary("branch kets are not an orthonormal basis")
    return kets


class Interpreter:
    """Executes statements of one instantiated program."""

    def __init__(self, inst: Instance, limits: RunLimits | None = None, trace: list | None = None):
        self.inst = inst
        self.program = inst.program
        self.limits = limits or RunLimits()
        self.trace = trace
        self.depth = 0
        self.fuel = self.limits.loop_fuel
        self._kets = {}
        self._procs = {p.name: p for p in inst.program.procs}
        self._dispatch = {
            n.Skip: self._skip,
            n.Assign: self._assign,
            n.GateApp: self._gate,
            n.Seq: self._seq,
            n.If: self._if,
            n.While: self._while,
            n.Qif: self._qif,
            n.QifForall: self._qif_forall,
            n.Block: self._block,
            n.Call: self._call,
        }

    def _emit(self, rule, node, detail=""):
        if self.trace is not None:
            sp = node.span
            self.trace.append(TraceEvent(rule, sp.line if sp else None, sp.col if sp else None, self.depth, detail))

    def execute(self, stmt, store: ClassicalStore, state: StateVector, locked=frozenset()):
        """Run ``stmt`` to termination; returns the final ``(store, state)``."""
        try:
            handler = self._dispatch[type(stmt)]
        except KeyError:
            raise TypeMismatch(f"not a statement: {stmt!r}") from None
        return handler(stmt, store, state, locked)

    def _skip(self, s, store, state, locked):
        self._emit("SK", s)
        return store, state

    def _assign(self, s, store, state, locked):
        self._emit("AS", s)
        return exec_assign(store, s), state

    def _seq(self, s, store, state, locked):
        self._emit("SC", s)
        for item in s.stmts:
            store, state = self.execute(item, store, state, locked)
        return store, state

    def _if(self, s, store, state, locked):
        taken = eval_bool(store, s.cond)
        self._emit("IF", s, "then" if taken else "else")
        return self.execute(s.then if taken else s.orelse, store, state, locked)

    def _while(self, s, store, state, locked):
        self._emit("WH", s)
        while eval_bool(store, s.cond):
            if self.fuel <= 0:
                raise FuelExhausted(f"loop fuel ({self.limits.loop_fuel} iterations) exhausted")
            self.fuel -= 1
            store, state = self.execute(s.body, store, state, locked)
        return store, state

    def _check_free(self, wires, locked, what):
        for w in wires:
            if w in locked:
                raise CoinViolation(f"{what} touches wire {w}, a coin of an enclosing qif")

    def _gate(self, s, store, state, locked):
        reg = resolve_register(store, s.register, self.inst.quantum)
        self._check_free(reg, locked, f"gate {s.name}")
        check = False
        if s.name in self.inst.gates:
            if s.params:
                raise TypeMismatch(f"user gate {s.name} takes no parameters")
            u = self.inst.gates[s.name]
        elif s.name == "I" and not s.params:
            u = np.eye(math.prod(state.dim_of(w) for w in reg), dtype=complex)
        elif s.name in BUILTINS:
            params = [eval_expr(store, p) for p in s.params]
            u = builtin_matrix(s.name, params)
            check = bool(params)
        else:
            raise UnknownGate(f"unknown gate {s.name!r}")
        self._emit("GA", s, f"{s.name}[{', '.join(map(str, reg))}]")
        return store, apply_unitary(state, reg, u, self.limits.tol, check=check)

    def _coin(self, s, store, state, locked):
        reg = resolve_register(store, s.coin, self.inst.quantum)
        self._check_free(reg, locked, "qif coin")
        dims = tuple(state.dim_of(w) for w in reg)
        return reg, dims

    def _branches(self, bodies, store, comps, locked, run_branch):
        out_store, outs = None, []
        for i, (body, comp) in enumerate(zip(bodies, comps)):
            st, psi = run_branch(i, body, store, comp, locked)
            if out_store is None:
                out_store = st
            elif st != out_store:
                raise ClassicalDivergence(
                    f"branch {i + 1} ends in {st}, branch 1 ended in {out_store}"
                )
            outs.append(psi)
        return out_store, outs

    def _qif(self, s, store, state, locked):
        reg, dims = self._coin(s, store, state, locked)
        key = (id(s), dims)
        kets = self._kets.get(key)
        if kets is None:
            kets = self._kets[key] = coin_kets(s.branches, dims, self.limits.tol)
        basis = CoinBasis(reg.wires, dims, kets)
        self._emit("QC", s, f"coin={reg}")
        comps = components(state, basis)
        inner = locked | set(reg)

        def run_branch(i, body, st, comp, lk):
            return self.execute(body, st, comp, lk)

        out_store, outs = self._branches([b.body for b in s.branches], store, comps, inner, run_branch)
        return out_store, recombine(basis, outs, state.layout)

    def _qif_forall(self, s, store, state, locked):
        reg, dims = self._coin(s, store, state, locked)
        basis = CoinBasis.computational(reg.wires, dims)
        self._emit("QC", s, f"coin={reg} forall {s.binder}")
        comps = components(state, basis)
        inner = locked | set(reg)
        binder = (s.binder,)

        def run_branch(x, body, st, comp, lk):
            st, saved = enter_block(st, binder, (n.IntLit(x),))
            st, psi = self.execute(body, st, comp, lk)
            return leave_block(st, saved), psi

        out_store, outs = self._branches([s.body] * basis.dim, store, comps, inner, run_branch)
        return out_store, recombine(basis, outs, state.layout)

    def _block(self, s, store, state, locked):
        self._emit("BS", s, ", ".join(s.names))
        return self._run_block(s.names, s.inits, s.body, store, state, locked)

    def _run_block(self, names, inits, body, store, state, locked):
        store, saved = enter_block(store, names, inits)
        store, state = self.execute(body, store, state, locked)
        return leave_block(store, saved), state

    def _call(self, s, store, state, locked):
        proc = self._procs.get(s.name)
        if proc is None:
            raise UnknownProcedure(f"undeclared procedure {s.name!r}")
        if len(proc.params) != len(s.args):
            raise TypeMismatch(f"{s.name} takes {len(proc.params)} argument(s), got {len(s.args)}")
        if self.depth >= self.limits.recursion_depth:
            raise RecursionLimit(f"recursion depth limit {self.limits.recursion_depth} reached in {s.name}")
        self.depth += 1
        try:
            if proc.params:
                self._emit("RC", s, s.name)
                self._emit("BS", s, ", ".join(proc.params))
                return self._run_block(proc.params, s.args, proc.body, store, state, locked)
            self._emit("CR", s, s.name)
            return self.execute(proc.body, store, state, locked)
        finally:
            self.depth -= 1


_deep = threading.local()


def call_deep(fn, *args, depth: int = DEFAULT_RECURSION_DEPTH):
    """Run ``fn`` on a thread with a stack large enough for ``depth`` nested calls."""
    if getattr(_deep, "active", False):
        return fn(*args)
    box = {}

    def target():
        _deep.active = True
        limit = max(sys.getrecursionlimit(), depth * _FRAMES_PER_LEVEL + 2000)
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(limit)
        try:
            box["value"] = fn(*args)
        except BaseException as exc:  # re-raised in the caller's thread
            box["error"] = exc
        finally:
            sys.setrecursionlimit(old)

    old_size = threading.stack_size()
    threading.stack_size(_STACK_BYTES)
    try:
        worker = threading.Thread(target=target, name="qrpl-run")
        worker.start()
    finally:
        threading.stack_size(old_size)
    worker.join()
    if "error" in box:
        raise box["error"]
    return box["value"]


def entry_statement(program: n.Program, entry=None):
    """Resolve ``entry`` (``None``/``"main"``, call text, or a node) to a statement."""
    if entry is None or entry == "main":
        if program.main is None:
            raise UnknownProcedure("program has no main block; give an entry call")
        return program.main
    if isinstance(entry, str):
        return parse_call(entry)
    return entry


def prepare(program, env=None, gates=None) -> Instance:
    if isinstance(program, Instance):
        if env or gates:
            return instantiate(program.program, env, gates)
        return program
    return instantiate(program, env, gates)


def initial_state(inst: Instance, state=None) -> StateVector:
    if state is None:
        return StateVector.basis(inst.layout, 0)
    if isinstance(state, (int, np.integer)):
        return StateVector.basis(inst.layout, int(state))
    if state.layout != inst.layout:
        raise LayoutMismatch("initial state layout differs from the declared layout")
    return state


def run(program, entry=None, store: ClassicalStore | None = None, state=None,
        limits: RunLimits | None = None, env=None, gates=None, trace: list | None = None):
    """Run a program (or an :class:`Instance`) from ``entry``.

    ``state`` may be a :class:`StateVector` or a basis index (default 0).
    Returns ``(final_store, final_state)``.
    """
    inst = prepare(program, env, gates)
    limits = limits or RunLimits()
    stmt = entry_statement(inst.program, entry)
    store = inst.store if store is None else store
    psi = initial_state(inst, state)
    interp = Interpreter(inst, limits, trace)
    return call_deep(interp.execute, stmt, store, psi, depth=limits.recursion_depth)


def trace(program, entry=None, store=None, state=None, limits=None, env=None, gates=None):
    """Run with tracing; returns ``(events, final_store, final_state)``."""
    events = []
    st, psi = run(program, entry, store, state, limits, env, gates, trace=events)
    return events, st, psi

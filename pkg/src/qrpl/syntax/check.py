"""Static well-formedness checks.

``static_check`` never raises for a parsed program; it returns diagnostics
sorted by source position. Checks that depend on runtime values (subscripts,
coin sizes given by expressions) are left to the interpreter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ParseError, QrplError, StaticError
from ..values import ClassicalStore
from . import nodes as n
from .parser import parse

TOL = 1e-9


@dataclass(frozen=True, order=True)
class Diagnostic:
    line: int
    col: int
    code: str
    message: str
    severity: str = "error"

    def format(self, file: str = "<input>") -> str:
        return f"{file}:{self.line}:{self.col}: {self.severity}: [{self.code}] {self.message}"

    def __str__(self):
        return self.format()


def _pos(node):
    sp = getattr(node, "span", None)
    return (sp.line, sp.col) if sp is not None else (0, 0)


class _Checker:
    def __init__(self, program: n.Program, extra_names=()):
        from ..gates import BUILTINS

        self.p = program
        self.builtins = BUILTINS
        self.out: list[Diagnostic] = []
        self.quantum = {d.name: d for d in program.quantum_decls}
        self.gates = {}
        self.procs = {}
        self.globals = {d.name for d in program.var_decls} | set(extra_names)
        self.dynamic = set()
        # only literal expressions are sized statically: declared initial
        # values can be overridden at instantiation or reassigned
        self.consts = ClassicalStore()

    def diag(self, node, code, message):
        line, col = _pos(node)
        self.out.append(Diagnostic(line, col, code, message))

    # declarations

    def _const_int(self, e):
        from ..classical import eval_int

        try:
            return eval_int(self.consts, e)
        except QrplError:
            return None

    def declarations(self):
        seen = {}
        for d in self.p.decls:
            kind = type(d).__name__
            if d.name in seen:
                self.diag(d, "Duplicate", f"{d.name} is already declared")
            seen[d.name] = kind
            if isinstance(d, n.GateDecl):
                self.gate_decl(d)
        for proc in self.p.procs:
            if proc.name in self.procs:
                self.diag(proc, "Duplicate", f"procedure {proc.name} is declared twice")
            self.procs.setdefault(proc.name, proc)
            if len(set(proc.params)) != len(proc.params):
                self.diag(proc, "Duplicate", f"procedure {proc.name} repeats a formal parameter")
            for u in proc.params:
                if u in self.quantum:
                    self.diag(proc, "Duplicate", f"formal parameter {u} names a quantum variable")
            self.dynamic.update(proc.params)
        for s in self._all_stmts():
            if isinstance(s, n.Block):
                self.dynamic.update(s.names)
            elif isinstance(s, n.QifForall):
                self.dynamic.add(s.binder)

    def gate_decl(self, d: n.GateDecl):
        from ..classical import eval_complex, eval_expr
        from ..gates import builtin_matrix, is_unitary

        mat = None
        try:
            if d.rows is not None:
                mat = np.array([[eval_complex(x, self.consts) for x in row] for row in d.rows], dtype=complex)
            elif d.base in self.gates:
                if d.params:
                    self.diag(d, "Arity", f"user gate {d.base} takes no parameters")
                mat = self.gates[d.base]
            elif d.base in self.builtins:
                want = self.builtins[d.base][0]
                if len(d.params) != want:
                    self.diag(d, "Arity", f"gate {d.base} takes {want} parameter(s), got {len(d.params)}")
                else:
                    mat = builtin_matrix(d.base, [eval_expr(self.consts, e) for e in d.params])
            else:
                self.diag(d, "UnknownGate", f"unknown gate {d.base!r} in definition of {d.name}")
        except QrplError:
            mat = None  # depends on values only known at run time
        if d.rows is not None and any(len(r) != len(d.rows) for r in d.rows):
            self.diag(d, "NonUnitary", f"gate {d.name} is not a square matrix")
            mat = None
        elif mat is not None and not is_unitary(mat, TOL):
            self.diag(d, "NonUnitary", f"gate {d.name} is not unitary")
        self.gates[d.name] = mat

    def _all_stmts(self):
        roots = [p.body for p in self.p.procs]
        if self.p.main is not None:
            roots.append(self.p.main)
        stack = list(roots)
        while stack:
            s = stack.pop()
            yield s
            if isinstance(s, n.Seq):
                stack.extend(s.stmts)
            elif isinstance(s, n.If):
                stack.extend((s.then, s.orelse))
            elif isinstance(s, (n.While, n.Block, n.QifForall)):
                stack.append(s.body)
            elif isinstance(s, n.Qif):
                stack.extend(b.body for b in s.branches)

    # expressions and registers

    def expr(self, e, scope):
        if isinstance(e, n.Var):
            if e.name not in scope:
                self.diag(e, "Undeclared", f"undeclared classical variable {e.name}")
        elif isinstance(e, n.Index):
            if e.name not in scope:
                self.diag(e, "Undeclared", f"undeclared classical array {e.name}")
            self.expr(e.index, scope)
        elif isinstance(e, n.BinOp):
            self.expr(e.left, scope)
            self.expr(e.right, scope)
        elif isinstance(e, n.UnOp):
            self.expr(e.operand, scope)
        elif isinstance(e, n.Func):
            for a in e.args:
                self.expr(a, scope)
        elif isinstance(e, n.ImagLit):
            self.diag(e, "TypeMismatch", "imaginary literals are only allowed in kets and gate matrices")

    def register(self, items, scope):
        """Check register items; returns the site dims when statically known."""
        dims = []
        for it in items:
            decl = self.quantum.get(it.var)
            if decl is None:
                self.diag(it, "UnknownQuantumVariable", f"undeclared quantum variable {it.var}")
                dims = None
                continue
            for s in it.subscripts:
                if isinstance(s, n.RangeSub):
                    self.expr(s.lo, scope)
                    self.expr(s.hi, scope)
                else:
                    self.expr(s, scope)
            count = self._wire_count(decl, it)
            if count is None or dims is None:
                dims = None
            else:
                dims.extend([decl.site_dim] * count)
        return dims

    def _wire_count(self, decl, it):
        if it.subscripts and len(it.subscripts) != len(decl.ranges):
            self.diag(it, "Arity", f"{it.var} takes {len(decl.ranges)} subscript(s), got {len(it.subscripts)}")
            return None
        subs = it.subscripts or decl.ranges
        count = 1
        for s in subs:
            if isinstance(s, n.RangeSub):
                lo, hi = self._const_int(s.lo), self._const_int(s.hi)
                if lo is None or hi is None or lo > hi:
                    return None
                count *= hi - lo + 1
        return count

    # statements

    def stmt(self, s, scope, binders=frozenset()):
        t = type(s)
        if t is n.Skip:
            return
        if t is n.Assign:
            for x in s.targets:
                name = x.name
                if name in binders:
                    self.diag(x, "BinderAssigned", f"assignment to qif binder {name}")
                self.expr(x, scope)
            for v in s.values:
                self.expr(v, scope)
            if len(s.targets) != len(s.values):
                self.diag(s, "Arity", f"{len(s.targets)} target(s) but {len(s.values)} value(s)")
        elif t is n.GateApp:
            self.gate_app(s, scope)
        elif t is n.Seq:
            for x in s.stmts:
                self.stmt(x, scope, binders)
        elif t is n.If:
            self.expr(s.cond, scope)
            self.stmt(s.then, scope, binders)
            self.stmt(s.orelse, scope, binders)
        elif t is n.While:
            self.expr(s.cond, scope)
            self.stmt(s.body, scope, binders)
        elif t is n.Block:
            if len(set(s.names)) != len(s.names):
                self.diag(s, "Duplicate", "block repeats a local variable")
            for e in s.inits:
                self.expr(e, scope)
            for x in s.names:
                if x in self.quantum:
                    self.diag(s, "Duplicate", f"local {x} names a quantum variable")
            self.stmt(s.body, scope | set(s.names), binders - set(s.names))
        elif t is n.Call:
            proc = self.procs.get(s.name)
            if proc is None:
                self.diag(s, "UnknownProcedure", f"undeclared procedure {s.name}")
            elif len(proc.params) != len(s.args):
                self.diag(s, "Arity", f"{s.name} takes {len(proc.params)} argument(s), got {len(s.args)}")
            for a in s.args:
                self.expr(a, scope)
        elif t is n.Qif:
            self.qif(s, scope, binders)
        elif t is n.QifForall:
            self.register(s.coin, scope)
            if s.binder in self.quantum:
                self.diag(s, "BinderShadowsQuantum", f"binder {s.binder} names a quantum variable")
            self.stmt(s.body, scope | {s.binder}, binders | {s.binder})

    def gate_app(self, s, scope):
        for p in s.params:
            self.expr(p, scope)
        dims = self.register(s.register, scope)
        mat_dim = None
        if s.name in self.gates:
            if s.params:
                self.diag(s, "Arity", f"user gate {s.name} takes no parameters")
            if self.gates[s.name] is not None:
                mat_dim = self.gates[s.name].shape[0]
        elif s.name in self.builtins:
            want = self.builtins[s.name][0]
            if len(s.params) != want:
                self.diag(s, "Arity", f"gate {s.name} takes {want} parameter(s), got {len(s.params)}")
            elif s.name != "I":
                mat_dim = 4 if s.name in ("SWAP", "CNOT") else 2
        else:
            self.diag(s, "UnknownGate", f"unknown gate {s.name}")
        if mat_dim is not None and dims is not None and math.prod(dims) != mat_dim:
            self.diag(s, "DimensionMismatch",
                      f"gate {s.name} of dimension {mat_dim} on a register of dimension {math.prod(dims)}")

    def qif(self, s, scope, binders):
        from ..classical import eval_complex, is_constant

        dims = self.register(s.coin, scope)
        kets = [b.ket for b in s.branches]
        if dims is None:
            bits = {len(k.digits) for k in kets if isinstance(k, n.BitKet)}
            if len(bits) == 1 and all(self.quantum.get(it.var) is not None
                                      and self.quantum[it.var].site_dim == 2 for it in s.coin):
                dims = [2] * bits.pop()
        if dims is not None:
            d = math.prod(dims)
            if len(kets) != d:
                self.diag(s, "BranchCount", f"coin of dimension {d} needs {d} branches, got {len(kets)}")
            vecs = []
            for k in kets:
                v = self._ket(k, dims, eval_complex, is_constant)
                if v is None:
                    vecs = None
                    break
                vecs.append(v)
            if vecs and len(vecs) == d:
                m = np.array(vecs)
                gram = m.conj() @ m.T
                if np.max(np.abs(gram - np.eye(d))) > TOL:
                    self.diag(s, "NonOrthonormal", "branch kets are not orthonormal")
        for b in s.branches:
            self.stmt(b.body, scope, binders)

    def _ket(self, k, dims, eval_complex, is_constant):
        d = math.prod(dims)
        if isinstance(k, n.BitKet):
            if len(k.digits) != len(dims):
                self.diag(k, "DimensionMismatch", f"ket |{k.digits}> on a coin of {len(dims)} wire(s)")
                return None
            idx = 0
            for ch, sd in zip(k.digits, dims):
                if int(ch) >= sd:
                    self.diag(k, "DimensionMismatch", f"digit {ch} exceeds site dimension {sd}")
                    return None
                idx = idx * sd + int(ch)
            v = np.zeros(d, dtype=complex)
            v[idx] = 1
            return v
        if isinstance(k, n.NamedKet):
            if list(dims) != [2]:
                self.diag(k, "DimensionMismatch", f"|{k.sign}> needs a single-qubit coin")
                return None
            r = 1 / math.sqrt(2)
            return np.array([r, r if k.sign == "+" else -r], dtype=complex)
        if isinstance(k, n.VectorKet):
            if not all(is_constant(x) for x in k.entries):
                self.diag(k, "NonConstantKet", "ket entries must be constant")
                return None
            if len(k.entries) != d:
                self.diag(k, "DimensionMismatch", f"ket of length {len(k.entries)} on a coin of dimension {d}")
                return None
            try:
                return np.array([eval_complex(x) for x in k.entries], dtype=complex)
            except QrplError as exc:
                self.diag(k, "NonConstantKet", str(exc))
                return None
        self.diag(k, "NonConstantKet", "variable kets are only allowed in qif ... forall")
        return None

    def run(self):
        self.declarations()
        for proc in self.p.procs:
            scope = self.globals | set(proc.params) | self.dynamic
            self.stmt(proc.body, scope)
        if self.p.main is not None:
            self.stmt(self.p.main, set(self.globals))
        return sorted(set(self.out))


def static_check(program: n.Program, extra_names=()) -> list[Diagnostic]:
    """Diagnostics for ``program`` sorted by source position (empty when clean).

    ``extra_names`` are classical names bound from outside (for example by
    ``--env``) that count as declared.
    """
    return _Checker(program, extra_names).run()


def check_source(source: str, extra_names=()) -> tuple[n.Program | None, list[Diagnostic]]:
    """Parse and check; a syntax error becomes a single ``Syntax`` diagnostic."""
    try:
        program = parse(source)
    except ParseError as exc:
        msg = exc.message
        if exc.expected:
            msg += " (expected one of: " + ", ".join(exc.expected) + ")"
        return None, [Diagnostic(exc.line, exc.col, "Syntax", msg)]
    return program, static_check(program, extra_names)


def require_clean(program: n.Program, extra_names=()) -> n.Program:
    diags = static_check(program, extra_names)
    if diags:
        raise StaticError(diags)
    return program

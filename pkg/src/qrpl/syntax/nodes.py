"""Abstract syntax.

Nodes are frozen dataclasses. Source spans are carried on every node but are
excluded from equality, so two trees compare equal when they have the same
structure regardless of where they came from.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union


@dataclass(frozen=True)
class Span:
    line: int
    col: int

    def __str__(self):
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class Node:
    span: Optional[Span] = field(default=None, compare=False, repr=False, kw_only=True)


# expressions

@dataclass(frozen=True)
class IntLit(Node):
    value: int


@dataclass(frozen=True)
class RealLit(Node):
    value: float


@dataclass(frozen=True)
class ImagLit(Node):
    """Imaginary literal such as ``0.5i``; only meaningful in constant complex contexts."""
    value: float


@dataclass(frozen=True)
class BoolLit(Node):
    value: bool


@dataclass(frozen=True)
class Const(Node):
    name: str  # "pi" or "e"


@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Index(Node):
    name: str
    index: "Expr"


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class UnOp(Node):
    op: str  # "-" or "not"
    operand: "Expr"


@dataclass(frozen=True)
class Func(Node):
    name: str
    args: Tuple["Expr", ...]


Expr = Union[IntLit, RealLit, ImagLit, BoolLit, Const, Var, Index, BinOp, UnOp, Func]

ARITH_OPS = ("+", "-", "*", "/", "div", "mod", "^")
COMPARE_OPS = ("<", "<=", ">", ">=", "=", "!=")
BOOL_OPS = ("and", "or")


# quantum registers

@dataclass(frozen=True)
class RangeSub(Node):
    lo: Expr
    hi: Expr


@dataclass(frozen=True)
class RegItem(Node):
    """``q``, ``q[e1, e2]`` or a section ``q[lo:hi]``."""
    var: str
    subscripts: Tuple[Union[Expr, RangeSub], ...] = ()


# kets

@dataclass(frozen=True)
class BitKet(Node):
    digits: str


@dataclass(frozen=True)
class NamedKet(Node):
    sign: str  # "+" or "-"


@dataclass(frozen=True)
class VectorKet(Node):
    entries: Tuple[Expr, ...]


@dataclass(frozen=True)
class BinderKet(Node):
    name: str


Ket = Union[BitKet, NamedKet, VectorKet, BinderKet]


# statements

@dataclass(frozen=True)
class Skip(Node):
    pass


@dataclass(frozen=True)
class Assign(Node):
    targets: Tuple[Union[Var, Index], ...]
    values: Tuple[Expr, ...]


@dataclass(frozen=True)
class GateApp(Node):
    name: str
    params: Tuple[Expr, ...]
    register: Tuple[RegItem, ...]


@dataclass(frozen=True)
class Seq(Node):
    stmts: Tuple["Stmt", ...]


@dataclass(frozen=True)
class If(Node):
    cond: Expr
    then: "Stmt"
    orelse: "Stmt"


@dataclass(frozen=True)
class While(Node):
    cond: Expr
    body: "Stmt"


@dataclass(frozen=True)
class Branch(Node):
    ket: Ket
    body: "Stmt"


@dataclass(frozen=True)
class Qif(Node):
    coin: Tuple[RegItem, ...]
    branches: Tuple[Branch, ...]


@dataclass(frozen=True)
class QifForall(Node):
    coin: Tuple[RegItem, ...]
    binder: str
    body: "Stmt"


@dataclass(frozen=True)
class Block(Node):
    names: Tuple[str, ...]
    inits: Tuple[Expr, ...]
    body: "Stmt"


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: Tuple[Expr, ...] = ()


Stmt = Union[Skip, Assign, GateApp, Seq, If, While, Qif, QifForall, Block, Call]


def seq(stmts) -> "Stmt":
    """Build a flattened sequence; a single statement stands for itself."""
    flat = []
    for s in stmts:
        if isinstance(s, Seq):
            flat.extend(s.stmts)
        else:
            flat.append(s)
    if not flat:
        return Skip()
    if len(flat) == 1:
        return flat[0]
    return Seq(tuple(flat), span=flat[0].span)


# declarations

@dataclass(frozen=True)
class QuantumVarDecl(Node):
    name: str
    site_dim: int
    ranges: Tuple[RangeSub, ...] = ()


@dataclass(frozen=True)
class VarDecl(Node):
    name: str
    kind: str
    range: Optional[RangeSub] = None
    init: Union[Expr, Tuple[Expr, ...], None] = None


@dataclass(frozen=True)
class GateDecl(Node):
    """Either an explicit matrix (``rows``) or an alias of a built-in gate."""
    name: str
    rows: Optional[Tuple[Tuple[Expr, ...], ...]] = None
    base: Optional[str] = None
    params: Tuple[Expr, ...] = ()


@dataclass(frozen=True)
class ProcDecl(Node):
    name: str
    params: Tuple[str, ...]
    body: Stmt


Decl = Union[QuantumVarDecl, VarDecl, GateDecl]


@dataclass(frozen=True)
class Program(Node):
    decls: Tuple[Decl, ...] = ()
    procs: Tuple[ProcDecl, ...] = ()
    main: Optional[Stmt] = None

    @property
    def quantum_decls(self):
        return tuple(d for d in self.decls if isinstance(d, QuantumVarDecl))

    @property
    def var_decls(self):
        return tuple(d for d in self.decls if isinstance(d, VarDecl))

    @property
    def gate_decls(self):
        return tuple(d for d in self.decls if isinstance(d, GateDecl))

    def proc(self, name: str) -> Optional[ProcDecl]:
        for p in self.procs:
            if p.name == name:
                return p
        return None

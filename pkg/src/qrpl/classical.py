"""Classical expression evaluation and the classical while-fragment."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (
    DivisionByZero,
    DuplicateTarget,
    FuelExhausted,
    IntOverflow,
    TypeMismatch,
    Unbound,
)
from .syntax import nodes as n
from .values import ClassicalStore, check_int, kind_of, store_update

DEFAULT_FUEL = 10**6

_REAL_FUNCS = {
    "sqrt": math.sqrt,
    "exp": math.exp,
    "ln": math.log,
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "asin": math.asin,
    "acos": math.acos,
    "atan": math.atan,
}
FUNCTIONS = frozenset(_REAL_FUNCS) | {"abs", "floor", "ceil"}

_CONSTS = {"pi": math.pi, "e": math.e}


@dataclass
class EvalContext:
    store: ClassicalStore
    step_budget: int = DEFAULT_FUEL


def _num(v, op):
    k = kind_of(v)
    if k == "bool":
        raise TypeMismatch(f"operator {op!r} needs numbers, got bool")
    return k


def _arith(op, a, b):
    ka, kb = _num(a, op), _num(b, op)
    both_int = ka == kb == "int"
    if op == "+":
        return check_int(a + b) if both_int else float(a) + float(b)
    if op == "-":
        return check_int(a - b) if both_int else float(a) - float(b)
    if op == "*":
        return check_int(a * b) if both_int else float(a) * float(b)
    if op == "/":
        if b == 0:
            raise DivisionByZero("division by zero")
        return float(a) / float(b)
    if op in ("div", "mod"):
        if not both_int:
            raise TypeMismatch(f"{op} needs integer operands")
        if b == 0:
            raise DivisionByZero(f"{op} by zero")
        return check_int(a // b) if op == "div" else a % b
    if op == "^":
        if both_int:
            if b < 0:
                raise TypeMismatch("negative integer exponent; use a real base")
            if abs(a) > 1 and b > 64:
                raise IntOverflow(f"integer overflow in {a}^{b}")
            return check_int(a**b)
        if a == 0 and b < 0:
            raise DivisionByZero("zero to a negative power")
        try:
            return math.pow(float(a), float(b))
        except (ValueError, OverflowError) as exc:
            raise TypeMismatch(f"invalid power {a}^{b}: {exc}") from None
    raise TypeMismatch(f"unknown operator {op!r}")


def _compare(op, a, b):
    ka, kb = kind_of(a), kind_of(b)
    if "bool" in (ka, kb):
        if ka != kb or op not in ("=", "!="):
            raise TypeMismatch(f"cannot compare {ka} and {kb} with {op!r}")
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    return a >= b


def _func(name, args):
    if len(args) != 1:
        raise TypeMismatch(f"{name} takes one argument")
    (x,) = args
    _num(x, name)
    if name == "abs":
        return check_int(abs(x)) if kind_of(x) == "int" else abs(x)
    if name in ("floor", "ceil"):
        return check_int(math.floor(x) if name == "floor" else math.ceil(x))
    try:
        return _REAL_FUNCS[name](float(x))
    except ValueError:
        raise TypeMismatch(f"{name}({x}) is undefined") from None


def eval_expr(store: ClassicalStore, e):
    """Value of expression ``e`` in ``store``."""
    if isinstance(e, EvalContext):
        raise TypeError("pass the store, not the context")
    t = type(e)
    if t is n.IntLit:
        return check_int(e.value)
    if t is n.RealLit:
        return e.value
    if t is n.BoolLit:
        return e.value
    if t is n.Var:
        return store.lookup(e.name)
    if t is n.BinOp:
        op = e.op
        if op in ("and", "or"):
            left = eval_bool(store, e.left)
            if (op == "and" and not left) or (op == "or" and left):
                return left
            return eval_bool(store, e.right)
        a = eval_expr(store, e.left)
        b = eval_expr(store, e.right)
        if op in n.COMPARE_OPS:
            return _compare(op, a, b)
        return _arith(op, a, b)
    if t is n.Index:
        idx = eval_expr(store, e.index)
        if kind_of(idx) != "int":
            raise TypeMismatch(f"subscript of {e.name} must be int")
        return store.lookup_element(e.name, idx)
    if t is n.UnOp:
        v = eval_expr(store, e.operand)
        if e.op == "not":
            if kind_of(v) != "bool":
                raise TypeMismatch("'not' needs a boolean")
            return not v
        _num(v, "-")
        return check_int(-v) if kind_of(v) == "int" else -v
    if t is n.Const:
        return _CONSTS[e.name]
    if t is n.Func:
        if e.name not in FUNCTIONS:
            raise Unbound(f"unknown function {e.name!r}")
        return _func(e.name, [eval_expr(store, a) for a in e.args])
    if t is n.ImagLit:
        raise TypeMismatch("imaginary literal outside a constant complex context")
    raise TypeMismatch(f"not an expression: {e!r}")


def eval_bool(store: ClassicalStore, b) -> bool:
    v = eval_expr(store, b)
    if kind_of(v) != "bool":
        raise TypeMismatch("condition is not boolean")
    return v


def eval_int(store: ClassicalStore, e, what="value") -> int:
    v = eval_expr(store, e)
    if kind_of(v) != "int":
        raise TypeMismatch(f"{what} must be int, got {kind_of(v)}")
    return v


_CFUNCS = {"sqrt": cmath.sqrt, "exp": cmath.exp, "ln": cmath.log, "sin": cmath.sin, "cos": cmath.cos}


def eval_complex(e, store: ClassicalStore | None = None) -> complex:
    """Evaluate a complex constant expression (ket and matrix entries).

    Classical variables are allowed when a store is given.
    """
    t = type(e)
    if t is n.ImagLit:
        return complex(0.0, e.value)
    if t in (n.IntLit, n.RealLit):
        return complex(e.value)
    if t is n.Const:
        return complex(_CONSTS[e.name])
    if t is n.UnOp and e.op == "-":
        return -eval_complex(e.operand, store)
    if t is n.BinOp and e.op in ("+", "-", "*", "/", "^"):
        a, b = eval_complex(e.left, store), eval_complex(e.right, store)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            if b == 0:
                raise DivisionByZero("division by zero")
            return a / b
        if b.imag == 0 and b.real == int(b.real) and b.real >= 0:
            return a ** int(b.real)
        return a**b
    if t is n.Func and e.name in _CFUNCS and len(e.args) == 1:
        return _CFUNCS[e.name](eval_complex(e.args[0], store))
    if t is n.Func and e.name == "abs" and len(e.args) == 1:
        return complex(abs(eval_complex(e.args[0], store)))
    if store is not None and t in (n.Var, n.Index, n.Func, n.BinOp, n.UnOp):
        v = eval_expr(store, e)
        if kind_of(v) == "bool":
            raise TypeMismatch("boolean in a complex context")
        return complex(v)
    raise TypeMismatch("expected a constant complex expression")


def is_constant(e) -> bool:
    """True if ``e`` mentions no classical variables."""
    if isinstance(e, (n.Var, n.Index)):
        return False
    if isinstance(e, n.BinOp):
        return is_constant(e.left) and is_constant(e.right)
    if isinstance(e, n.UnOp):
        return is_constant(e.operand)
    if isinstance(e, n.Func):
        return all(is_constant(a) for a in e.args)
    return True


def lvalue_key(store: ClassicalStore, target):
    if isinstance(target, n.Var):
        return target.name
    idx = eval_expr(store, target.index)
    if kind_of(idx) != "int":
        raise TypeMismatch(f"subscript of {target.name} must be int")
    return (target.name, idx)


def exec_assign(store: ClassicalStore, stmt: n.Assign) -> ClassicalStore:
    """Evaluate every right-hand side in the old store, then update simultaneously."""
    keys = [lvalue_key(store, t) for t in stmt.targets]
    vals = [eval_expr(store, v) for v in stmt.values]
    return store_update(store, keys, vals)


def enter_block(store: ClassicalStore, names, inits):
    """Bind block locals; returns the new store and what is needed to restore it.

    Locals that were unbound on entry are removed again on exit.
    """
    if len(set(names)) != len(names):
        raise DuplicateTarget(f"duplicate local variables {names}")
    values = [eval_expr(store, e) for e in inits]
    saved = tuple((x, store.lookup(x) if x in store else None, x in store) for x in names)
    fresh = store
    for x, _, bound in saved:
        if not bound:
            fresh = fresh.bind(x, values[names.index(x)])
    return store_update(fresh, list(names), values), saved


def leave_block(store: ClassicalStore, saved) -> ClassicalStore:
    bound = [(x, v) for x, v, was in saved if was]
    store = store_update(store, [x for x, _ in bound], [v for _, v in bound])
    for x, _, was in saved:
        if not was:
            store = store.unbind(x)
    return store


def exec_classical(ctx: EvalContext, c) -> ClassicalStore:
    """Run a statement of the classical fragment (skip, :=, ;, if, while).

    Loop iterations consume ``ctx.step_budget``; running out raises
    :class:`FuelExhausted`. ``ctx.store`` is updated to the final store.
    """
    store = ctx.store
    t = type(c)
    if t is n.Skip:
        pass
    elif t is n.Assign:
        store = exec_assign(store, c)
    elif t is n.Seq:
        for s in c.stmts:
            ctx.store = store
            store = exec_classical(ctx, s)
    elif t is n.If:
        ctx.store = store
        store = exec_classical(ctx, c.then if eval_bool(store, c.cond) else c.orelse)
    elif t is n.While:
        while eval_bool(store, c.cond):
            if ctx.step_budget <= 0:
                raise FuelExhausted("loop fuel exhausted")
            ctx.step_budget -= 1
            ctx.store = store
            store = exec_classical(ctx, c.body)
    elif t is n.Block:
        ctx.store, saved = enter_block(store, c.names, c.inits)
        store = leave_block(exec_classical(ctx, c.body), saved)
    else:
        raise TypeMismatch(f"{type(c).__name__} is not in the classical fragment")
    ctx.store = store
    return store

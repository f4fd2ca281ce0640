"""Render ASTs back to ``.qrp`` text; ``parse(pretty(p)) == p``."""
from __future__ import annotations

from . import nodes as n

_PREC = {"or": 1, "and": 2, "<": 4, "<=": 4, ">": 4, ">=": 4, "=": 4, "!=": 4,
         "+": 5, "-": 5, "*": 6, "/": 6, "div": 6, "mod": 6, "^": 8}
_ATOM = 9


def _real(v: float) -> str:
    text = repr(float(v))
    if text in ("inf", "-inf", "nan"):
        raise ValueError(f"cannot print non-finite literal {text}")
    return text


def expr(e, ctx: int = 0) -> str:
    t = type(e)
    if t is n.IntLit:
        text, prec = str(e.value), _ATOM if e.value >= 0 else 7
    elif t is n.RealLit:
        text = _real(e.value)
        prec = 7 if text.startswith("-") else _ATOM
    elif t is n.ImagLit:
        text = _real(e.value) + "i"
        prec = 7 if text.startswith("-") else _ATOM
    elif t is n.BoolLit:
        text, prec = ("true" if e.value else "false"), _ATOM
    elif t in (n.Const, n.Var):
        text, prec = e.name, _ATOM
    elif t is n.Index:
        text, prec = f"{e.name}[{expr(e.index)}]", _ATOM
    elif t is n.Func:
        text, prec = f"{e.name}({', '.join(expr(a) for a in e.args)})", _ATOM
    elif t is n.UnOp:
        if e.op == "not":
            text, prec = "not " + expr(e.operand, 3), 3
        else:
            text, prec = "-" + expr(e.operand, 7), 7
    elif t is n.BinOp:
        prec = _PREC[e.op]
        if e.op == "^":
            left, right = expr(e.left, _ATOM), expr(e.right, 7)
        elif prec == 4:
            left, right = expr(e.left, 5), expr(e.right, 5)
        else:
            left, right = expr(e.left, prec), expr(e.right, prec + 1)
        text = f"{left} {e.op} {right}" if e.op != "^" else f"{left}^{right}"
    else:
        raise TypeError(f"not an expression: {e!r}")
    return f"({text})" if prec < ctx else text


def _sub(s) -> str:
    if isinstance(s, n.RangeSub):
        return f"{expr(s.lo)}:{expr(s.hi)}"
    return expr(s)


def reg_item(r: n.RegItem) -> str:
    if not r.subscripts:
        return r.var
    return f"{r.var}[{', '.join(_sub(s) for s in r.subscripts)}]"


def register(items) -> str:
    return ", ".join(reg_item(r) for r in items)


def ket(k) -> str:
    if isinstance(k, n.BitKet):
        return f"|{k.digits}>"
    if isinstance(k, n.NamedKet):
        return f"|{k.sign}>"
    if isinstance(k, n.BinderKet):
        return f"|{k.name}>"
    return "|(" + ", ".join(expr(x) for x in k.entries) + ")>"


def _lvalue(t) -> str:
    return expr(t)


def stmt(s, indent: int = 0) -> str:
    pad = "  " * indent
    t = type(s)
    if t is n.Skip:
        return pad + "skip"
    if t is n.Assign:
        return (pad + ", ".join(_lvalue(x) for x in s.targets) + " := "
                + ", ".join(expr(v) for v in s.values))
    if t is n.GateApp:
        params = f"({', '.join(expr(p) for p in s.params)})" if s.params else ""
        return f"{pad}{s.name}{params}[{register(s.register)}]"
    if t is n.Call:
        return f"{pad}{s.name}({', '.join(expr(a) for a in s.args)})"
    if t is n.Seq:
        return ";\n".join(stmt(x, indent) for x in s.stmts)
    if t is n.If:
        out = f"{pad}if {expr(s.cond)} then\n{stmt(s.then, indent + 1)}\n"
        if not isinstance(s.orelse, n.Skip):
            out += f"{pad}else\n{stmt(s.orelse, indent + 1)}\n"
        return out + pad + "fi"
    if t is n.While:
        return f"{pad}while {expr(s.cond)} do\n{stmt(s.body, indent + 1)}\n{pad}od"
    if t is n.Qif:
        lines = [f"{pad}qif[{register(s.coin)}]"]
        for b in s.branches:
            lines.append(f"{pad}  case {ket(b.ket)} ->\n{stmt(b.body, indent + 2)}")
        lines.append(pad + "fiq")
        return "\n".join(lines)
    if t is n.QifForall:
        return (f"{pad}qif[{register(s.coin)}] forall {s.binder} {{ |{s.binder}> ->\n"
                f"{stmt(s.body, indent + 2)}\n{pad}}}")
    if t is n.Block:
        head = f"{pad}begin"
        if s.names:
            head += f" local {', '.join(s.names)} := {', '.join(expr(e) for e in s.inits)};"
        return f"{head}\n{stmt(s.body, indent + 1)}\n{pad}end"
    raise TypeError(f"not a statement: {s!r}")


def decl(d) -> str:
    if isinstance(d, n.QuantumVarDecl):
        head = "qubit" if d.site_dim == 2 else f"qudit({d.site_dim})"
        ranges = f"[{', '.join(_sub(r) for r in d.ranges)}]" if d.ranges else ""
        return f"{head} {d.name}{ranges};"
    if isinstance(d, n.VarDecl):
        out = f"var {d.name} : {d.kind}"
        if d.range is not None:
            out += f"[{_sub(d.range)}]"
        if isinstance(d.init, tuple):
            out += " := [" + ", ".join(expr(x) for x in d.init) + "]"
        elif d.init is not None:
            out += " := " + expr(d.init)
        return out + ";"
    if isinstance(d, n.GateDecl):
        if d.rows is not None:
            rows = ", ".join("[" + ", ".join(expr(x) for x in row) + "]" for row in d.rows)
            return f"gate {d.name} := [{rows}];"
        params = f"({', '.join(expr(p) for p in d.params)})" if d.params else ""
        return f"gate {d.name} := {d.base}{params};"
    raise TypeError(f"not a declaration: {d!r}")


def pretty(p: n.Program) -> str:
    parts = [decl(d) for d in p.decls]
    for proc in p.procs:
        params = f"({', '.join(proc.params)})" if proc.params else ""
        parts.append(f"\nproc {proc.name}{params} {{\n{stmt(proc.body, 1)}\n}}")
    if p.main is not None:
        parts.append(f"\nmain {{\n{stmt(p.main, 1)}\n}}")
    return "\n".join(parts) + "\n"

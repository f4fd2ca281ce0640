"""Recursive-descent parser for ``.qrp`` programs.

Concrete grammar (informal)::

    program  := (decl | proc | main)*
    decl     := "qubit" qvar ("," qvar)* ";"
              | "qudit" "(" INT ")" qvar ("," qvar)* ";"
              | "var" IDENT ":" type ["[" range "]"] [":=" (expr | "[" exprs "]")] ";"
              | "gate" IDENT ":=" (matrix | IDENT ["(" exprs ")"]) ";"
    proc     := "proc" IDENT ["(" [IDENT ("," IDENT)*] ")"] "{" stmts "}"
    main     := "main" "{" stmts "}"
    stmts    := stmt (";" stmt)* [";"]
    stmt     := "skip" | lvals ":=" exprs | IDENT ["(" exprs ")"] "[" reg "]"
              | IDENT ["(" exprs ")"]                       -- procedure call
              | "if" expr "then" stmts ["else" stmts] "fi"
              | "while" expr "do" stmts "od"
              | "qif" "[" reg "]" ("case" ket "->" stmts)+ "fiq"
              | "qif" "[" reg "]" "forall" IDENT "{" "|x>" "->" stmts "}"
              | "begin" ["local" IDENT,+ ":=" exprs ";"] stmts "end"
"""
from __future__ import annotations

from ..errors import ParseError
from . import nodes as n
from .lexer import Token, tokenize

_STMT_END = {"}", "fi", "else", "od", "end", "case", "fiq"}
_COMPARE = {"<", "<=", ">", ">=", "=", "!="}


class Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset=1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, text, kind=None) -> bool:
        t = self.tok
        if kind is not None and t.kind != kind:
            return False
        return t.text == text and t.kind in ("SYM", "KW")

    def error(self, message, expected=()):
        t = self.tok
        raise ParseError(f"{message}, found {t.describe()}", t.line, t.col, expected)

    def expect(self, text) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}", (text,))
        t = self.tok
        self.pos += 1
        return t

    def accept(self, text) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def ident(self) -> Token:
        if self.tok.kind != "IDENT":
            self.error("expected identifier", ("identifier",))
        t = self.tok
        self.pos += 1
        return t

    @staticmethod
    def span(t: Token) -> n.Span:
        return n.Span(t.line, t.col)

    # program

    def program(self) -> n.Program:
        start = self.tok
        decls, procs, main = [], [], None
        while self.tok.kind != "EOF":
            if self.at("qubit") or self.at("qudit"):
                decls.extend(self.quantum_decl())
            elif self.at("var"):
                decls.append(self.var_decl())
            elif self.at("gate"):
                decls.append(self.gate_decl())
            elif self.at("proc"):
                procs.append(self.proc_decl())
            elif self.at("main"):
                t = self.expect("main")
                if main is not None:
                    raise ParseError("duplicate main block", t.line, t.col)
                self.expect("{")
                main = self.stmts()
                self.expect("}")
            else:
                self.error("expected declaration", ("qubit", "qudit", "var", "gate", "proc", "main"))
        return n.Program(tuple(decls), tuple(procs), main, span=self.span(start))

    def quantum_decl(self):
        t = self.tok
        if self.accept("qubit"):
            dim = 2
        else:
            self.expect("qudit")
            self.expect("(")
            if self.tok.kind != "INT":
                self.error("expected site dimension", ("integer",))
            dim = int(self.tok.text)
            self.pos += 1
            self.expect(")")
        out = []
        while True:
            name = self.ident()
            ranges = []
            if self.accept("["):
                ranges.append(self.range_sub())
                while self.accept(","):
                    ranges.append(self.range_sub())
                self.expect("]")
            out.append(n.QuantumVarDecl(name.text, dim, tuple(ranges), span=self.span(name)))
            if not self.accept(","):
                break
        self.expect(";")
        return out

    def range_sub(self) -> n.RangeSub:
        t = self.tok
        lo = self.expr()
        self.expect(":")
        hi = self.expr()
        return n.RangeSub(lo, hi, span=self.span(t))

    def var_decl(self) -> n.VarDecl:
        self.expect("var")
        name = self.ident()
        self.expect(":")
        if self.tok.kind == "KW" and self.tok.text in ("int", "real", "bool"):
            kind = self.tok.text
            self.pos += 1
        else:
            self.error("expected type", ("int", "real", "bool"))
        rng = None
        if self.accept("["):
            rng = self.range_sub()
            self.expect("]")
        init = None
        if self.accept(":="):
            if self.accept("["):
                items = [self.expr()]
                while self.accept(","):
                    items.append(self.expr())
                self.expect("]")
                init = tuple(items)
            else:
                init = self.expr()
        self.expect(";")
        return n.VarDecl(name.text, kind, rng, init, span=self.span(name))

    def gate_decl(self) -> n.GateDecl:
        self.expect("gate")
        name = self.ident()
        self.expect(":=")
        if self.accept("["):
            rows = [self.matrix_row()]
            while self.accept(","):
                rows.append(self.matrix_row())
            self.expect("]")
            decl = n.GateDecl(name.text, rows=tuple(rows), span=self.span(name))
        else:
            base = self.ident()
            params = self.paren_args() if self.at("(") else ()
            decl = n.GateDecl(name.text, base=base.text, params=params, span=self.span(name))
        self.expect(";")
        return decl

    def matrix_row(self):
        self.expect("[")
        row = [self.expr()]
        while self.accept(","):
            row.append(self.expr())
        self.expect("]")
        return tuple(row)

    def proc_decl(self) -> n.ProcDecl:
        self.expect("proc")
        name = self.ident()
        params = []
        if self.accept("("):
            if not self.at(")"):
                params.append(self.ident().text)
                while self.accept(","):
                    params.append(self.ident().text)
            self.expect(")")
        self.expect("{")
        body = self.stmts()
        self.expect("}")
        return n.ProcDecl(name.text, tuple(params), body, span=self.span(name))

    # statements

    def at_stmt_end(self) -> bool:
        t = self.tok
        return t.kind == "EOF" or (t.kind in ("SYM", "KW") and t.text in _STMT_END)

    def stmts(self):
        if self.at_stmt_end():
            self.error("expected statement", ("statement",))
        items = [self.stmt()]
        while self.accept(";"):
            if self.at_stmt_end():
                break
            items.append(self.stmt())
        return n.seq(items)

    def stmt(self):
        t = self.tok
        sp = self.span(t)
        if self.accept("skip"):
            return n.Skip(span=sp)
        if self.accept("if"):
            cond = self.expr()
            self.expect("then")
            then = self.stmts()
            orelse = self.stmts() if self.accept("else") else n.Skip(span=sp)
            self.expect("fi")
            return n.If(cond, then, orelse, span=sp)
        if self.accept("while"):
            cond = self.expr()
            self.expect("do")
            body = self.stmts()
            self.expect("od")
            return n.While(cond, body, span=sp)
        if self.accept("qif"):
            return self.qif(sp)
        if self.accept("begin"):
            names, inits = [], []
            if self.accept("local"):
                names.append(self.ident().text)
                while self.accept(","):
                    names.append(self.ident().text)
                self.expect(":=")
                inits = list(self.exprs())
                self.expect(";")
                if len(names) != len(inits):
                    raise ParseError(f"{len(names)} locals but {len(inits)} initial values", t.line, t.col)
            body = self.stmts()
            self.expect("end")
            return n.Block(tuple(names), tuple(inits), body, span=sp)
        if t.kind == "IDENT":
            saved = self.pos
            try:
                targets = self.lvalues()
            except ParseError:
                targets = None
            if targets is not None and self.at(":="):
                return self.assignment(targets, t)
            self.pos = saved
            return self.gate_or_call()
        self.error("expected statement", ("statement",))

    def lvalues(self):
        targets = [self.lvalue()]
        while self.accept(","):
            targets.append(self.lvalue())
        return targets

    def assignment(self, targets, t) -> n.Assign:
        self.expect(":=")
        values = self.exprs()
        if len(values) != len(targets):
            raise ParseError(f"{len(targets)} targets but {len(values)} values", t.line, t.col)
        return n.Assign(tuple(targets), values, span=self.span(t))

    def lvalue(self):
        name = self.ident()
        if self.accept("["):
            idx = self.expr()
            self.expect("]")
            return n.Index(name.text, idx, span=self.span(name))
        return n.Var(name.text, span=self.span(name))

    def gate_or_call(self):
        name = self.ident()
        args = self.paren_args() if self.at("(") else ()
        if self.accept("["):
            reg = self.register()
            self.expect("]")
            return n.GateApp(name.text, args, reg, span=self.span(name))
        return n.Call(name.text, args, span=self.span(name))

    def paren_args(self):
        self.expect("(")
        if self.accept(")"):
            return ()
        args = self.exprs()
        self.expect(")")
        return args

    def exprs(self):
        out = [self.expr()]
        while self.accept(","):
            out.append(self.expr())
        return tuple(out)

    def register(self):
        items = [self.reg_item()]
        while self.accept(","):
            items.append(self.reg_item())
        return tuple(items)

    def reg_item(self) -> n.RegItem:
        name = self.ident()
        subs = []
        if self.accept("["):
            subs.append(self.subscript())
            while self.accept(","):
                subs.append(self.subscript())
            self.expect("]")
        return n.RegItem(name.text, tuple(subs), span=self.span(name))

    def subscript(self):
        t = self.tok
        e = self.expr()
        if self.accept(":"):
            return n.RangeSub(e, self.expr(), span=self.span(t))
        return e

    def qif(self, sp):
        self.expect("[")
        coin = self.register()
        self.expect("]")
        if self.accept("forall"):
            binder = self.ident().text
            self.expect("{")
            t = self.tok
            if t.kind != "KETVAR" or t.text != binder:
                self.error(f"expected |{binder}>", (f"|{binder}>",))
            self.pos += 1
            self.expect("->")
            body = self.stmts()
            self.expect("}")
            return n.QifForall(coin, binder, body, span=sp)
        branches = []
        while self.at("case"):
            ct = self.expect("case")
            ket = self.ket()
            self.expect("->")
            body = self.stmts()
            branches.append(n.Branch(ket, body, span=self.span(ct)))
        if not branches:
            self.error("expected 'case'", ("case", "forall"))
        self.expect("fiq")
        return n.Qif(coin, tuple(branches), span=sp)

    def ket(self):
        t = self.tok
        sp = self.span(t)
        if t.kind == "KET":
            self.pos += 1
            if t.text in ("+", "-"):
                return n.NamedKet(t.text, span=sp)
            return n.BitKet(t.text, span=sp)
        if t.kind == "KETOPEN":
            self.pos += 1
            entries = self.exprs()
            self.expect(")")
            self.expect(">")
            return n.VectorKet(entries, span=sp)
        self.error("expected ket", ("|0>", "|+>", "|(...)>"))

    # expressions

    def expr(self):
        return self.or_expr()

    def or_expr(self):
        left = self.and_expr()
        while self.at("or"):
            t = self.tok
            self.pos += 1
            left = n.BinOp("or", left, self.and_expr(), span=self.span(t))
        return left

    def and_expr(self):
        left = self.not_expr()
        while self.at("and"):
            t = self.tok
            self.pos += 1
            left = n.BinOp("and", left, self.not_expr(), span=self.span(t))
        return left

    def not_expr(self):
        if self.at("not"):
            t = self.tok
            self.pos += 1
            return n.UnOp("not", self.not_expr(), span=self.span(t))
        return self.cmp_expr()

    def cmp_expr(self):
        left = self.add_expr()
        t = self.tok
        if t.kind == "SYM" and t.text in _COMPARE:
            self.pos += 1
            return n.BinOp(t.text, left, self.add_expr(), span=self.span(t))
        return left

    def add_expr(self):
        left = self.mul_expr()
        while self.tok.kind == "SYM" and self.tok.text in ("+", "-"):
            t = self.tok
            self.pos += 1
            left = n.BinOp(t.text, left, self.mul_expr(), span=self.span(t))
        return left

    def mul_expr(self):
        left = self.unary()
        while (self.tok.kind == "SYM" and self.tok.text in ("*", "/")) or self.at("div") or self.at("mod"):
            t = self.tok
            self.pos += 1
            left = n.BinOp(t.text, left, self.unary(), span=self.span(t))
        return left

    def unary(self):
        if self.tok.kind == "SYM" and self.tok.text == "-":
            t = self.tok
            self.pos += 1
            return n.UnOp("-", self.unary(), span=self.span(t))
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "SYM" and self.tok.text == "^":
            t = self.tok
            self.pos += 1
            return n.BinOp("^", base, self.unary(), span=self.span(t))
        return base

    def atom(self):
        t = self.tok
        sp = self.span(t)
        if t.kind == "INT":
            self.pos += 1
            return n.IntLit(int(t.text), span=sp)
        if t.kind == "REAL":
            self.pos += 1
            return n.RealLit(float(t.text), span=sp)
        if t.kind == "IMAG":
            self.pos += 1
            return n.ImagLit(float(t.text), span=sp)
        if self.accept("true"):
            return n.BoolLit(True, span=sp)
        if self.accept("false"):
            return n.BoolLit(False, span=sp)
        if self.accept("pi"):
            return n.Const("pi", span=sp)
        if self.accept("e"):
            return n.Const("e", span=sp)
        if t.kind == "IDENT":
            self.pos += 1
            if self.accept("["):
                idx = self.expr()
                self.expect("]")
                return n.Index(t.text, idx, span=sp)
            if self.at("("):
                return n.Func(t.text, self.paren_args(), span=sp)
            return n.Var(t.text, span=sp)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        self.error("expected expression", ("number", "identifier", "("))


def parse(source: str) -> n.Program:
    """Parse a whole program; raises :class:`ParseError` with line and column."""
    return Parser(source).program()


def parse_stmt(source: str):
    p = Parser(source)
    s = p.stmts()
    if p.tok.kind != "EOF":
        p.error("trailing input")
    return s


def parse_expr(source: str):
    p = Parser(source)
    e = p.expr()
    if p.tok.kind != "EOF":
        p.error("trailing input")
    return e


def parse_call(source: str) -> n.Call:
    """Parse an entry-point template such as ``QFT(1, 3)``."""
    p = Parser(source)
    name = p.ident()
    args = p.paren_args() if p.at("(") else ()
    if p.tok.kind != "EOF":
        p.error("trailing input after call")
    return n.Call(name.text, args, span=Parser.span(name))

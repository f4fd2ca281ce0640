"""Concrete syntax: lexer, parser, pretty printer and static checks."""
from . import nodes
from .check import Diagnostic, check_source, require_clean, static_check
from .parser import parse, parse_call, parse_expr, parse_stmt
from .pretty import pretty

__all__ = [
    "Diagnostic",
    "check_source",
    "nodes",
    "parse",
    "parse_call",
    "parse_expr",
    "parse_stmt",
    "pretty",
    "require_clean",
    "static_check",
]

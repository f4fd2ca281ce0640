"""Command-line front end: ``qrpl check | run | matrix | verify``.

Exit codes: 0 success or pass, 1 verification failure, 2 runtime error,
3 parse or static error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import oracle
from .classical import eval_expr
from .errors import ExecutionError, ParseError, QrplError, StaticError
from .interpreter import RunLimits, prepare, run
from .model import gate_from_text
from .qstate import state_from_json, state_to_json
from .syntax import check_source, parse_expr
from .values import ClassicalArray, ClassicalStore

EXIT_OK, EXIT_FAIL, EXIT_RUNTIME, EXIT_STATIC = 0, 1, 2, 3
DEFAULT_TOL = 1e-9


class _Usage(Exception):
    pass


def default_tolerance() -> float:
    text = os.environ.get("QRPL_TOLERANCE")
    if not text:
        return DEFAULT_TOL
    try:
        tol = float(text)
    except ValueError:
        raise _Usage(f"QRPL_TOLERANCE is not a number: {text!r}") from None
    if not tol > 0:
        raise _Usage("QRPL_TOLERANCE must be positive")
    return tol


def _positive_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _literal(text: str):
    """Value of a ``--env`` right-hand side: JSON, else a constant expression."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return eval_expr(ClassicalStore(), parse_expr(text))


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _complex_list(items) -> list:
    out = []
    for z in items:
        out.append(complex(z[0], z[1]) if isinstance(z, (list, tuple)) else complex(z))
    return out


def load_data(path) -> dict:
    """Classical bindings from a JSON object.

    A key ``"a"`` holding a complex amplitude table (``[re, im]`` pairs or
    numbers) is expanded to ``n``, ``amod`` and ``aphase``.
    """
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise _Usage(f"{path}: expected a JSON object")
    obj = dict(obj)
    if "a" in obj:
        obj.update(oracle.qsp_data(_complex_list(obj.pop("a"))))
    return obj


def _env(args) -> dict:
    env = {}
    if getattr(args, "data", None):
        env.update(load_data(args.data))
    for item in args.env or []:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise _Usage(f"--env expects NAME=VALUE, got {item!r}")
        env[name.strip()] = _literal(value)
    return env


def _gates(args) -> dict:
    out = {}
    for item in args.gate or []:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise _Usage(f"--gate expects NAME=GATE, got {item!r}")
        out[name.strip()] = value.strip()
    return out


def _limits(args) -> RunLimits:
    # the tolerance only applies to comparisons; unitarity checks keep their default
    return RunLimits(args.recursion_limit, args.fuel)


def _tol(args) -> float:
    return args.tol if args.tol is not None else default_tolerance()


def _load(args, env):
    with open(args.file, encoding="utf-8") as fh:
        source = fh.read()
    program, diags = check_source(source, extra_names=env)
    if diags:
        raise StaticError(diags)
    return program


def _write(args, obj):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _value_json(v):
    if isinstance(v, ClassicalArray):
        return {"kind": v.kind, "lo": v.lo, "items": list(v.items)}
    return v


def store_to_json(store: ClassicalStore) -> dict:
    return {name: _value_json(store.lookup(name)) for name in store}


def _initial_state(args):
    if getattr(args, "input", None):
        return state_from_json(_read_json(args.input))
    return args.basis


# commands

def cmd_check(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        _, diags = check_source(fh.read(), extra_names=_env(args))
    for d in diags:
        print(d.format(args.file), file=sys.stderr)
    return EXIT_STATIC if diags else EXIT_OK


def cmd_run(args) -> int:
    env = _env(args)
    program = _load(args, env)
    inst = prepare(program, env, _gates(args))
    events = [] if args.trace else None
    store, psi = run(inst, args.call, state=_initial_state(args), limits=_limits(args), trace=events)
    for e in events or []:
        print(str(e), file=sys.stderr)
    _write(args, {"state": state_to_json(psi), "store": store_to_json(store)})
    return EXIT_OK


def cmd_matrix(args) -> int:
    env = _env(args)
    program = _load(args, env)
    m = oracle.matrix_of(program, args.call, env, _gates(args), limits=_limits(args))
    _write(args, oracle.matrix_to_json(m))
    return EXIT_OK


def _report(label, rep) -> int:
    print(f"{label}: {rep}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    kind, params = args.oracle[0], args.oracle[1:]
    env = _env(args)
    gates = _gates(args)
    tol = _tol(args)
    limits = _limits(args)

    def need(count):
        if len(params) != count:
            raise _Usage(f"--oracle {kind} takes {count} argument(s)")

    if kind == "qsp":
        need(1)
        a = _complex_list(_read_json(params[0])["a"])
        env = {**oracle.qsp_data(a), **env}
        program = _load(args, env)
        _, psi = run(program, args.call, env=env, gates=gates, limits=limits)
        return _report("qsp", oracle.compare(psi, oracle.qsp_target(a), tol, args.up_to_phase))
    if kind == "qraqm":
        need(1)
        n = int(params[0])
        env = {"n": n, **env}
        program = _load(args, env)
        return verify_qraqm(program, n, args.call, env, gates, limits, tol)
    program = _load(args, env)
    if kind == "dft":
        need(1)
        want = oracle.dft_matrix(int(params[0]))
    elif kind == "cu":
        need(2)
        inst = prepare(program, env, gates)
        u = inst.gates.get(params[1])
        if u is None:
            u = gate_from_text(params[1], inst.store)
        want = oracle.controlled_u_matrix(int(params[0]), u)
    elif kind == "matrix":
        need(1)
        want = oracle.matrix_from_json(_read_json(params[0]))
    else:
        raise _Usage(f"unknown oracle {kind!r} (dft, cu, qsp, qraqm, matrix)")
    got = oracle.matrix_of(program, args.call, env, gates, limits=limits)
    if got.dim != want.dim:
        print(f"{kind}: FAIL: program dimension {got.dim}, oracle dimension {want.dim}")
        return EXIT_FAIL
    return _report(kind, oracle.compare(got, want, tol, args.up_to_phase))


def verify_qraqm(program, n, entry, env, gates, limits, tol, seed: int = 7) -> int:
    """Run every address on distinct random data cells and compare slot by slot."""
    inst = prepare(program, env, gates)
    rng = np.random.default_rng(seed)
    cells = []
    for _ in range(2**n):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        cells.append(v / np.linalg.norm(v))
    ok = True
    for j in range(2**n):
        exp = oracle.qraqm_expected(n, j)
        _, psi = run(inst, entry, state=oracle.qraqm_state(n, j, cells), limits=limits)
        want = oracle.qraqm_state(n, j, [cells[s] for s in exp.slots])
        rep = oracle.compare(psi, want, tol)
        ok &= rep.passed and exp.slots[0] == j
        literal = "literal layout" if exp.literal else "permuted residual"
        print(f"qraqm j={j}: slots {list(exp.slots)} ({literal}): {rep}")
    print(f"qraqm n={n}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qrpl", description="Check, run and verify quantum recursive programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, state=False, out=True):
        p.add_argument("file", help=".qrp source file")
        p.add_argument("--call", default=None, help="entry call such as 'QFT(1, 3)' (default: main)")
        p.add_argument("--env", action="append", metavar="NAME=VALUE", help="initial classical binding")
        p.add_argument("--data", metavar="FILE", help="JSON object of classical bindings")
        p.add_argument("--gate", action="append", metavar="NAME=GATE", help="override a declared gate, e.g. U=H")
        p.add_argument("--recursion-limit", type=_positive_int, default=4096)
        p.add_argument("--fuel", type=_positive_int, default=10**6, help="loop iteration budget per run")
        p.add_argument("--tol", type=_positive_float, default=None, help="tolerance (default 1e-9 or QRPL_TOLERANCE)")
        if state:
            g = p.add_mutually_exclusive_group()
            g.add_argument("--in", dest="input", metavar="STATE.json", help="initial state")
            g.add_argument("--basis", type=int, default=0, help="initial basis state index")
            p.add_argument("--trace", action="store_true", help="print one line per rule application to stderr")
        if out:
            p.add_argument("--out", metavar="PATH", help="write JSON here instead of stdout")

    p = sub.add_parser("check", help="parse and statically check a program")
    p.add_argument("file")
    p.add_argument("--env", action="append", metavar="NAME=VALUE")
    p.add_argument("--data", metavar="FILE")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("run", help="run a program and print the final state and store")
    common(p, state=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("matrix", help="extract the unitary a program implements")
    common(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("verify", help="compare a program against an oracle")
    common(p, out=False)
    p.add_argument("--oracle", nargs="+", required=True, metavar="ARG",
                   help="dft N | cu N GATE | qsp FILE | qraqm N | matrix FILE")
    p.add_argument("--up-to-phase", action="store_true", help="ignore a global phase")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, StaticError) as exc:
        diags = getattr(exc, "diagnostics", None)
        if diags:
            for d in diags:
                print(d.format(args.file), file=sys.stderr)
        else:
            print(f"{args.file}:{exc}", file=sys.stderr)
        return EXIT_STATIC
    except ExecutionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (_Usage, QrplError, OSError, ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

"""Independent reference results for checking programs.

Everything here except :func:`matrix_of` is computed directly from the
mathematics, without the interpreter. ``matrix_of`` goes the other way: it
extracts the operator a program actually implements, one basis column at a
time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ClassicalStoreMismatch,
    DimensionMismatch,
    NonUnitary,
    NonUnitaryResult,
    SizeCap,
    ZeroVector,
)
from .gates import is_unitary
from .interpreter import Interpreter, RunLimits, call_deep, entry_statement, prepare
from .model import WireId
from .qstate import CoinBasis, StateVector, layout_from_json, layout_to_json

MATRIX_CAP_QUBITS = 12


@dataclass(frozen=True)
class UnitaryMatrix:
    """A square matrix plus the wire layout its rows and columns refer to."""

    entries: np.ndarray
    layout: tuple = ()
    store: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"matrix of shape {m.shape} is not square")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def is_unitary(self, tol: float = 1e-9) -> bool:
        return is_unitary(self.entries, tol)


def _as_array(m) -> np.ndarray:
    if isinstance(m, UnitaryMatrix):
        return m.entries
    if isinstance(m, StateVector):
        return m.amplitudes
    return np.asarray(m, dtype=complex)


def matrix_of(program, entry=None, env=None, gates=None, store=None,
              limits: RunLimits | None = None, tol: float = 1e-9) -> UnitaryMatrix:
    """Operator implemented by ``entry``: column k is the run from basis state k.

    Every column must end in the same classical store; the resulting matrix
    must be unitary within ``tol``.
    """
    inst = prepare(program, env, gates)
    if inst.dim > 2**MATRIX_CAP_QUBITS:
        raise SizeCap(f"matrix extraction limited to dimension {2**MATRIX_CAP_QUBITS}, got {inst.dim}")
    limits = limits or RunLimits()
    stmt = entry_statement(inst.program, entry)
    store0 = inst.store if store is None else store

    def columns():
        cols, final = [], None
        for k in range(inst.dim):
            st, psi = Interpreter(inst, limits).execute(stmt, store0, StateVector.basis(inst.layout, k))
            if final is None:
                final = st
            elif st != final:
                raise ClassicalStoreMismatch(f"basis state {k} ends in {st}, basis state 0 in {final}")
            cols.append(psi.amplitudes)
        return np.stack(cols, axis=1), final

    m, final = call_deep(columns, depth=limits.recursion_depth)
    if not is_unitary(m, tol):
        raise NonUnitaryResult("extracted matrix is not unitary")
    return UnitaryMatrix(m, inst.layout, final)


def multiplexor_matrix(basis, blocks) -> UnitaryMatrix:
    """``sum_i |psi_i><psi_i| (x) blocks[i]`` for the coin kets of ``basis``."""
    kets = basis.kets if isinstance(basis, CoinBasis) else np.asarray(basis, dtype=complex)
    blocks = [_as_array(b) for b in blocks]
    if kets.ndim != 2 or kets.shape[0] != kets.shape[1]:
        raise DimensionMismatch("coin kets must form a square array")
    if len(blocks) != kets.shape[0]:
        raise DimensionMismatch(f"{kets.shape[0]} kets but {len(blocks)} blocks")
    shape = blocks[0].shape
    if any(b.shape != shape for b in blocks) or len(shape) != 2 or shape[0] != shape[1]:
        raise DimensionMismatch("blocks must be square and of equal size")
    out = np.zeros((kets.shape[0] * shape[0],) * 2, dtype=complex)
    for ket, b in zip(kets, blocks):
        out += np.kron(np.outer(ket, ket.conj()), b)
    return UnitaryMatrix(out)


def dft_matrix(n: int) -> UnitaryMatrix:
    """``F[k, j] = exp(2 pi i j k / 2^n) / sqrt(2^n)``."""
    if not 1 <= n <= MATRIX_CAP_QUBITS:
        raise SizeCap(f"dft_matrix needs 1 <= n <= {MATRIX_CAP_QUBITS}, got {n}")
    d = 2**n
    jk = np.outer(np.arange(d), np.arange(d)) % d
    return UnitaryMatrix(np.exp(2j * np.pi * jk / d) / math.sqrt(d))


def controlled_u_matrix(n: int, u) -> UnitaryMatrix:
    """``U`` on the last qubit when all ``n`` control qubits are 1."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise DimensionMismatch("controlled_u_matrix needs a 2x2 target gate")
    if not is_unitary(u):
        raise NonUnitary("target gate is not unitary")
    if not 0 <= n < MATRIX_CAP_QUBITS:
        raise SizeCap(f"too many controls: {n}")
    m = np.eye(2 ** (n + 1), dtype=complex)
    m[-2:, -2:] = u
    return UnitaryMatrix(m)


def _phases(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    return np.where(a == 0, 0.0, np.angle(a))


def _qsp_n(a) -> int:
    size = len(a)
    n = size.bit_length() - 1
    if size < 2 or 2**n != size:
        raise DimensionMismatch(f"QSP vector length must be a power of two >= 2, got {size}")
    return n


def qsp_layout(n: int, var: str = "q") -> tuple:
    return tuple((WireId(var, (i,)), 2) for i in range(1, n + 1))


def qsp_target(a, var: str = "q") -> StateVector:
    """``sum_j exp(i theta_j / 2) sqrt|a_j| |j> / sqrt(sum |a_j|)`` on ``var[1:n]``."""
    a = np.asarray(a, dtype=complex)
    n = _qsp_n(a)
    total = float(np.sum(np.abs(a)))
    if total == 0:
        raise ZeroVector("QSP target of the zero vector")
    amps = np.exp(0.5j * _phases(a)) * np.sqrt(np.abs(a)) / math.sqrt(total)
    return StateVector(qsp_layout(n, var), amps)


def qsp_angles(a, k: int, x: int) -> tuple[float, float]:
    """``(gamma, beta)`` of the step-``k`` rotation on branch ``x``."""
    a = np.asarray(a, dtype=complex)
    n = _qsp_n(a)
    if not (0 <= k < n and 0 <= x < 2**k):
        raise DimensionMismatch(f"QSP step ({k}, {x}) out of range for n={n}")
    mod, theta = np.abs(a), _phases(a)
    u = 2 ** (n - k) * x
    v = u + 2 ** (n - k)
    w = (u + v) // 2
    s_uv = float(np.sum(mod[u:v]))
    if s_uv == 0:
        return 1.0, 0.0
    return float(np.sum(mod[u:w])) / s_uv, float(theta[w] - theta[u])


def qsp_data(a) -> dict:
    """Classical bindings (``n``, ``amod``, ``aphase``) for the stdlib QSP program."""
    a = np.asarray(a, dtype=complex)
    return {
        "n": _qsp_n(a),
        "amod": [float(v) for v in np.abs(a)],
        "aphase": [float(v) for v in _phases(a)],
    }


@dataclass(frozen=True)
class QraqmExpectation:
    n: int
    address: int
    slots: tuple  # slots[s] = index of the data cell found in slot s afterwards
    literal: bool  # True when slots is (j, 0, ..., j-1, j+1, ..., N)


def qraqm_expected(n: int, j: int) -> QraqmExpectation:
    """Slot permutation of the recursive QRAQM program for address ``j``.

    Computed by unfolding the recursion classically: at level ``k`` the
    address bit ``k`` (first bit most significant) picks a half, and the
    one-branch additionally swaps the first slot of the range with the first
    slot of the right half after the recursive call.
    """
    big_n = 2**n - 1
    if not 0 <= j <= big_n:
        raise DimensionMismatch(f"address {j} outside [0, {big_n}]")
    bits = [(j >> (n - k)) & 1 for k in range(1, n + 1)]
    slots = list(range(big_n + 1))

    def unfold(lo, hi, k):
        if k > n:
            return
        mid = (lo + hi) // 2
        if bits[k - 1] == 0:
            unfold(lo, mid, k + 1)
        else:
            unfold(mid + 1, hi, k + 1)
            slots[lo], slots[mid + 1] = slots[mid + 1], slots[lo]

    unfold(0, big_n, 1)
    literal = tuple([j] + [i for i in range(big_n + 1) if i != j])
    return QraqmExpectation(n, j, tuple(slots), tuple(slots) == literal)


def qraqm_state(n: int, j, cells, addr: str = "qa", data: str = "qD") -> StateVector:
    """``|j>|cells[0]>...|cells[N]>`` with 1-qubit data cells.

    ``j`` may be an address or a vector of address amplitudes.
    """
    if isinstance(j, (int, np.integer)):
        address = np.zeros(2**n, dtype=complex)
        address[int(j)] = 1
    else:
        address = np.asarray(j, dtype=complex)
    psi = address
    for c in cells:
        psi = np.kron(psi, np.asarray(c, dtype=complex))
    layout = tuple((WireId(addr, (k,)), 2) for k in range(1, n + 1))
    layout += tuple((WireId(data, (s,)), 2) for s in range(len(cells)))
    return StateVector(layout, psi)


@dataclass(frozen=True)
class CompareReport:
    max_diff: float
    passed: bool
    worst: tuple
    eps: float
    up_to_phase: bool
    phase: complex = 1.0

    def __str__(self):
        verdict = "PASS" if self.passed else "FAIL"
        mode = " (up to global phase)" if self.up_to_phase else ""
        return f"{verdict}: max |diff| = {self.max_diff:.3e} at {self.worst}, eps = {self.eps:g}{mode}"


def compare(a, b, eps: float = 1e-9, up_to_phase: bool = False) -> CompareReport:
    """Entrywise comparison of two matrices or vectors.

    With ``up_to_phase`` the phase is fixed at b's largest entry before
    comparing.
    """
    x, y = _as_array(a), _as_array(b)
    if x.shape != y.shape:
        raise DimensionMismatch(f"cannot compare shapes {x.shape} and {y.shape}")
    c = 1.0 + 0j
    if up_to_phase and y.size:
        k = np.unravel_index(int(np.argmax(np.abs(y))), y.shape)
        if y[k] != 0 and x[k] != 0:
            c = x[k] / y[k]
            c /= abs(c)
    diff = np.abs(x - c * y)
    if diff.size == 0:
        return CompareReport(0.0, True, (), eps, up_to_phase, c)
    worst = np.unravel_index(int(np.argmax(diff)), diff.shape)
    m = float(diff[worst])
    return CompareReport(m, m <= eps, tuple(int(i) for i in worst), eps, up_to_phase, c)


def matrix_to_json(m: UnitaryMatrix) -> dict:
    return {
        "dim": m.dim,
        "layout": layout_to_json(m.layout),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in m.entries],
    }


def matrix_from_json(obj) -> UnitaryMatrix:
    entries = np.array([[complex(re, im) for re, im in row] for row in obj["entries"]], dtype=complex)
    if "dim" in obj and entries.shape != (obj["dim"], obj["dim"]):
        raise DimensionMismatch(f"matrix JSON says dim {obj['dim']} but has shape {entries.shape}")
    return UnitaryMatrix(entries, layout_from_json(obj.get("layout", [])))

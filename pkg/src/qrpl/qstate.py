"""Dense state vectors over a layout of wires.

The basis index of a state maps to wire values in mixed radix with the first
wire of the layout most significant. Internally the amplitudes are kept as a
tensor with one axis per wire; ``amplitudes`` gives the flat vector.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    BranchCount,
    DimensionMismatch,
    LayoutMismatch,
    NonUnitary,
    UnknownWire,
)
from .gates import is_unitary
from .model import WireId

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class StateVector:
    layout: tuple  # ((WireId, dim), ...)
    data: np.ndarray

    def __post_init__(self):
        layout = tuple((w, int(d)) for w, d in self.layout)
        dims = tuple(d for _, d in layout)
        data = np.asarray(self.data, dtype=complex)
        if data.size != math.prod(dims):
            raise LayoutMismatch(f"{data.size} amplitudes for a layout of dimension {math.prod(dims)}")
        object.__setattr__(self, "layout", layout)
        object.__setattr__(self, "data", data.reshape(dims))

    @classmethod
    def basis(cls, layout, index: int = 0) -> "StateVector":
        dim = math.prod(d for _, d in layout)
        if not 0 <= index < dim:
            raise DimensionMismatch(f"basis index {index} outside [0, {dim})")
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(layout, amps)

    @cached_property
    def _axes(self) -> dict:
        return {w: i for i, (w, _) in enumerate(self.layout)}

    @property
    def wires(self) -> tuple:
        return tuple(w for w, _ in self.layout)

    @property
    def dims(self) -> tuple:
        return tuple(d for _, d in self.layout)

    @property
    def amplitudes(self) -> np.ndarray:
        return self.data.reshape(-1)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def axis(self, wire) -> int:
        try:
            return self._axes[wire]
        except KeyError:
            raise UnknownWire(f"wire {wire} is not in the state layout") from None

    def has(self, wire) -> bool:
        return wire in self._axes

    def dim_of(self, wire) -> int:
        return self.layout[self.axis(wire)][1]


def apply_unitary(s: StateVector, register, u, tol: float = DEFAULT_TOL, check: bool = True) -> StateVector:
    """Apply ``u`` to the wires of ``register``; identity on every other wire."""
    wires = tuple(register)
    if len(set(wires)) != len(wires):
        raise DimensionMismatch("register wires must be distinct")
    axes = [s.axis(w) for w in wires]
    rdims = [s.layout[a][1] for a in axes]
    d = math.prod(rdims)
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise DimensionMismatch(f"gate of shape {u.shape} on register of dimension {d}")
    if check and not is_unitary(u, tol):
        raise NonUnitary("gate matrix is not unitary")
    k = len(axes)
    if k == 0:
        return s
    ut = u.reshape(tuple(rdims) * 2)
    out = np.tensordot(ut, s.data, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return StateVector(s.layout, out)


@dataclass(frozen=True)
class CoinBasis:
    """An orthonormal basis of the coin register; ``kets[i]`` is branch ``i``."""

    wires: tuple
    dims: tuple
    kets: np.ndarray  # shape (d, d), row i is ket i

    def __post_init__(self):
        wires = tuple(self.wires)
        dims = tuple(int(x) for x in self.dims)
        kets = np.asarray(self.kets, dtype=complex)
        object.__setattr__(self, "wires", wires)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "kets", kets)
        if len(wires) != len(dims):
            raise DimensionMismatch("one dimension per coin wire")
        d = math.prod(dims)
        if kets.ndim != 2 or kets.shape[1] != d:
            raise DimensionMismatch(f"coin kets must have length {d}")
        if kets.shape[0] != d:
            raise BranchCount(f"coin of dimension {d} needs {d} branches, got {kets.shape[0]}")

    @classmethod
    def computational(cls, wires, dims) -> "CoinBasis":
        return cls(tuple(wires), tuple(dims), np.eye(math.prod(dims), dtype=complex))

    @cached_property
    def is_computational(self) -> bool:
        return bool(np.array_equal(self.kets, np.eye(self.kets.shape[0])))

    def is_orthonormal(self, tol: float = DEFAULT_TOL) -> bool:
        gram = self.kets.conj() @ self.kets.T
        return bool(np.max(np.abs(gram - np.eye(len(gram))), initial=0.0) <= tol)

    @property
    def dim(self) -> int:
        return self.kets.shape[0]


def _split(s: StateVector, basis: CoinBasis):
    axes = [s.axis(w) for w in basis.wires]
    for w, a, d in zip(basis.wires, axes, basis.dims):
        if s.layout[a][1] != d:
            raise DimensionMismatch(f"coin wire {w} has dimension {s.layout[a][1]}, basis says {d}")
    coin = set(axes)
    rest = tuple(item for i, item in enumerate(s.layout) if i not in coin)
    moved = np.moveaxis(s.data, axes, list(range(len(axes)))).reshape(basis.dim, -1)
    return moved, rest


def components(s: StateVector, basis: CoinBasis) -> list:
    """All unnormalized components ``(<psi_i| x I)|s>`` over the non-coin wires."""
    moved, rest = _split(s, basis)
    if basis.is_computational:
        rows = moved
    else:
        rows = basis.kets.conj() @ moved
    return [StateVector(rest, rows[i]) for i in range(basis.dim)]


def extract_component(s: StateVector, basis: CoinBasis, i: int) -> StateVector:
    moved, rest = _split(s, basis)
    row = moved[i] if basis.is_computational else basis.kets[i].conj() @ moved
    return StateVector(rest, row)


def recombine(basis: CoinBasis, comps, layout=None) -> StateVector:
    """``sum_i ket_i (x) comps[i]``.

    The result uses ``layout`` when given (it must hold exactly the coin wires
    plus the component wires); otherwise the coin wires come first.
    """
    comps = list(comps)
    if len(comps) != basis.dim:
        raise BranchCount(f"{basis.dim} kets but {len(comps)} components")
    rest = comps[0].layout
    for c in comps[1:]:
        if c.layout != rest:
            raise LayoutMismatch("components have different layouts")
    stacked = np.stack([c.data.reshape(-1) for c in comps])
    if not basis.is_computational:
        stacked = basis.kets.T @ stacked
    natural = tuple(zip(basis.wires, basis.dims)) + rest
    data = stacked.reshape(tuple(d for _, d in natural))
    if layout is None:
        return StateVector(natural, data)
    layout = tuple((w, int(d)) for w, d in layout)
    pos = {w: i for i, (w, _) in enumerate(natural)}
    if len(layout) != len(natural) or {w for w, _ in layout} != set(pos):
        raise LayoutMismatch("target layout does not match coin and component wires")
    return StateVector(layout, np.transpose(data, [pos[w] for w, _ in layout]))


def _same_layout(a: StateVector, b: StateVector):
    if a.layout != b.layout:
        raise LayoutMismatch("states have different layouts")


def max_abs_diff(a: StateVector, b: StateVector) -> float:
    _same_layout(a, b)
    return float(np.max(np.abs(a.amplitudes - b.amplitudes), initial=0.0))


def state_close(a: StateVector, b: StateVector, eps: float = DEFAULT_TOL) -> bool:
    return max_abs_diff(a, b) <= eps


def align_phase(a: StateVector, b: StateVector) -> complex:
    """Unit phase ``c`` making ``c * b`` best match ``a`` at b's largest amplitude."""
    _same_layout(a, b)
    k = int(np.argmax(np.abs(b.amplitudes)))
    ratio = a.amplitudes[k] / b.amplitudes[k] if b.amplitudes[k] != 0 else 1.0
    return ratio / abs(ratio) if ratio != 0 else 1.0


def state_close_up_to_phase(a: StateVector, b: StateVector, eps: float = DEFAULT_TOL) -> bool:
    c = align_phase(a, b)
    return float(np.max(np.abs(a.amplitudes - c * b.amplitudes), initial=0.0)) <= eps


# JSON interchange

def layout_to_json(layout) -> list:
    return [{"var": w.var, "indices": list(w.indices), "dim": d} for w, d in layout]


def layout_from_json(items) -> tuple:
    return tuple((WireId(it["var"], tuple(it.get("indices", ()))), int(it.get("dim", 2))) for it in items)


def state_to_json(s: StateVector) -> dict:
    return {
        "layout": layout_to_json(s.layout),
        "amplitudes": [[float(z.real), float(z.imag)] for z in s.amplitudes],
    }


def state_from_json(obj) -> StateVector:
    amps = np.array([complex(re, im) for re, im in obj["amplitudes"]], dtype=complex)
    return StateVector(layout_from_json(obj["layout"]), amps)

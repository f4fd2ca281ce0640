"""Classical values and the classical store.

Values are plain Python objects: ``int`` for Int, ``float`` for Real and
``bool`` for Bool. One-dimensional classical arrays are :class:`ClassicalArray`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import DuplicateTarget, IntOverflow, OutOfRange, TypeMismatch, Unbound

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1

KINDS = ("int", "real", "bool")

Scalar = Union[int, float, bool]


def kind_of(value) -> str:
    # bool first: bool is an int subclass
    if isinstance(value, bool):
        return "bool"
    if isinstance(value, int):
        return "int"
    if isinstance(value, float):
        return "real"
    if isinstance(value, ClassicalArray):
        return value.kind
    raise TypeMismatch(f"not a classical value: {value!r}")


def check_int(value: int) -> int:
    if not INT_MIN <= value <= INT_MAX:
        raise IntOverflow(f"integer overflow: {value}")
    return value


def coerce(value, kind: str, what: str = "value") -> Scalar:
    """Convert ``value`` to ``kind``, widening Int to Real only."""
    actual = kind_of(value)
    if actual == kind:
        return value
    if kind == "real" and actual == "int":
        return float(value)
    raise TypeMismatch(f"{what}: expected {kind}, got {actual}")


def same_value(a, b) -> bool:
    if kind_of(a) != kind_of(b):
        return False
    if isinstance(a, ClassicalArray):
        return (
            a.lo == b.lo
            and len(a.items) == len(b.items)
            and all(same_value(x, y) for x, y in zip(a.items, b.items))
        )
    if isinstance(a, float) and math.isnan(a):
        return math.isnan(b)
    return a == b


@dataclass(frozen=True)
class ClassicalArray:
    kind: str
    lo: int
    items: tuple

    @property
    def hi(self) -> int:
        return self.lo + len(self.items) - 1

    def _offset(self, index: int, name: str) -> int:
        if not self.lo <= index <= self.hi:
            raise OutOfRange(f"{name}[{index}] outside [{self.lo}:{self.hi}]")
        return index - self.lo

    def get(self, index: int, name: str = "array"):
        return self.items[self._offset(index, name)]

    def set(self, index: int, value, name: str = "array") -> "ClassicalArray":
        off = self._offset(index, name)
        value = coerce(value, self.kind, f"{name}[{index}]")
        return ClassicalArray(self.kind, self.lo, self.items[:off] + (value,) + self.items[off + 1:])

    @classmethod
    def filled(cls, kind: str, lo: int, hi: int, values: Iterable | None = None) -> "ClassicalArray":
        size = hi - lo + 1
        if size < 1:
            raise OutOfRange(f"empty array range [{lo}:{hi}]")
        if values is None:
            default = {"int": 0, "real": 0.0, "bool": False}[kind]
            return cls(kind, lo, (default,) * size)
        items = tuple(coerce(v, kind, "array element") for v in values)
        if len(items) != size:
            raise OutOfRange(f"array [{lo}:{hi}] needs {size} values, got {len(items)}")
        return cls(kind, lo, items)


class ClassicalStore:
    """Immutable map from classical variable names to values.

    Array elements are addressed by name plus index. Every update returns a
    new store; equality is exact value equality over all bindings.
    """

    __slots__ = ("_values",)

    def __init__(self, values: dict | None = None):
        vals = {}
        for name, value in (values or {}).items():
            kind_of(value)
            vals[name] = value
        self._values = vals

    def lookup(self, name: str):
        try:
            return self._values[name]
        except KeyError:
            raise Unbound(f"unbound classical variable {name!r}") from None

    def lookup_element(self, name: str, index: int):
        arr = self.lookup(name)
        if not isinstance(arr, ClassicalArray):
            raise TypeMismatch(f"{name} is not an array")
        return arr.get(index, name)

    def kind(self, name: str) -> str:
        return kind_of(self.lookup(name))

    def bind(self, name: str, value) -> "ClassicalStore":
        """Bind or rebind ``name``; an existing binding keeps its kind."""
        vals = dict(self._values)
        if name in vals:
            old = vals[name]
            if isinstance(old, ClassicalArray) or isinstance(value, ClassicalArray):
                if not (isinstance(old, ClassicalArray) and isinstance(value, ClassicalArray)):
                    raise TypeMismatch(f"cannot mix array and scalar for {name}")
                if old.kind != value.kind:
                    raise TypeMismatch(f"{name}: expected {old.kind} array")
            else:
                value = coerce(value, kind_of(old), name)
        else:
            kind_of(value)
        vals[name] = value
        return _from_dict(vals)

    def unbind(self, name: str) -> "ClassicalStore":
        vals = dict(self._values)
        vals.pop(name, None)
        return _from_dict(vals)

    def as_dict(self) -> dict:
        return dict(self._values)

    def __contains__(self, name) -> bool:
        return name in self._values

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._values))

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClassicalStore):
            return NotImplemented
        if self._values.keys() != other._values.keys():
            return False
        return all(same_value(v, other._values[k]) for k, v in self._values.items())

    __hash__ = None

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={self._values[k]!r}" for k in sorted(self._values))
        return f"ClassicalStore({inner})"


def _from_dict(vals: dict) -> ClassicalStore:
    store = ClassicalStore.__new__(ClassicalStore)
    store._values = vals
    return store


def _target_key(target):
    if isinstance(target, str):
        return target, None
    name, index = target
    if isinstance(index, tuple):
        if len(index) != 1:
            raise TypeMismatch(f"classical arrays are one-dimensional: {name}{list(index)}")
        index = index[0]
    return name, index


def store_update(store: ClassicalStore, targets, values) -> ClassicalStore:
    """Simultaneous assignment ``targets := values``.

    A target is a variable name or a ``(name, index)`` pair for an array
    element. All values must already be evaluated, so the update is
    simultaneous by construction.
    """
    targets = [_target_key(t) for t in targets]
    values = list(values)
    if len(targets) != len(values):
        raise DuplicateTarget(f"{len(targets)} targets but {len(values)} values")
    whole, elems = set(), set()
    for name, index in targets:
        clash = name in whole or (name, index) in elems
        if index is None:
            clash = clash or any(n == name for n, _ in elems)
        if clash:
            raise DuplicateTarget(f"variable {name} assigned twice in one assignment")
        if index is None:
            whole.add(name)
        else:
            elems.add((name, index))
    vals = dict(store._values)
    for (name, index), value in zip(targets, values):
        if index is None:
            if name in vals:
                old = vals[name]
                if isinstance(old, ClassicalArray):
                    raise TypeMismatch(f"cannot assign a scalar to array {name}")
                value = coerce(value, kind_of(old), name)
            else:
                kind_of(value)
            vals[name] = value
        else:
            if name not in vals:
                raise Unbound(f"unbound classical array {name!r}")
            arr = vals[name]
            if not isinstance(arr, ClassicalArray):
                raise TypeMismatch(f"{name} is not an array")
            vals[name] = arr.set(index, value, name)
    return _from_dict(vals)

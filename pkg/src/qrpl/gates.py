"""Built-in gate constants and parameterized gate families."""
from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import NonUnitary, TypeMismatch, UnknownGate

SQRT1_2 = 1 / math.sqrt(2)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) * SQRT1_2
S = np.array([[1, 0], [0, 1j]], dtype=complex)
T = np.array([[1, 0], [0, cmath.exp(1j * math.pi / 4)]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def rotation_r(l) -> np.ndarray:
    """``R_l = diag(1, exp(2 pi i / 2^l))``."""
    return np.array([[1, 0], [0, cmath.exp(2j * math.pi / 2.0**l)]], dtype=complex)


def phase(phi) -> np.ndarray:
    return np.array([[1, 0], [0, cmath.exp(1j * phi)]], dtype=complex)


def rx(theta) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(theta) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta) -> np.ndarray:
    return np.array([[cmath.exp(-0.5j * theta), 0], [0, cmath.exp(0.5j * theta)]], dtype=complex)


def deutsch_block(theta) -> np.ndarray:
    """Target block of the Deutsch gate; ``deutsch_block(pi/2)`` is X."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[1j * c, s], [s, 1j * c]], dtype=complex)


def prep_rotation(gamma, beta) -> np.ndarray:
    """Single-qubit gate mapping |0> to ``sqrt(g)|0> + exp(i b/2) sqrt(1-g)|1>``.

    The second column is the unitary completion
    ``(-sqrt(1-g), exp(i b/2) sqrt(g))``.
    """
    if not -1e-12 <= gamma <= 1 + 1e-12:
        raise NonUnitary(f"PrepRot needs 0 <= gamma <= 1, got {gamma}")
    gamma = min(max(gamma, 0.0), 1.0)
    a, b = math.sqrt(gamma), math.sqrt(1 - gamma)
    ph = cmath.exp(0.5j * beta)
    return np.array([[a, -b], [ph * b, ph * a]], dtype=complex)


# name -> (number of classical parameters, factory)
BUILTINS = {
    "I": (0, lambda: I2),
    "X": (0, lambda: X),
    "Y": (0, lambda: Y),
    "Z": (0, lambda: Z),
    "H": (0, lambda: H),
    "S": (0, lambda: S),
    "T": (0, lambda: T),
    "SWAP": (0, lambda: SWAP),
    "CNOT": (0, lambda: CNOT),
    "R": (1, rotation_r),
    "P": (1, phase),
    "Rx": (1, rx),
    "Ry": (1, ry),
    "Rz": (1, rz),
    "Deutsch": (1, deutsch_block),
    "PrepRot": (2, prep_rotation),
}


def builtin_arity(name: str) -> int:
    try:
        return BUILTINS[name][0]
    except KeyError:
        raise UnknownGate(f"unknown gate {name!r}") from None


def builtin_matrix(name: str, params=()) -> np.ndarray:
    arity = builtin_arity(name)
    if len(params) != arity:
        raise TypeMismatch(f"gate {name} takes {arity} parameter(s), got {len(params)}")
    for p in params:
        if isinstance(p, bool):
            raise TypeMismatch(f"gate {name}: boolean parameter")
    return BUILTINS[name][1](*params)


def is_unitary(u: np.ndarray, tol: float = 1e-9) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])), initial=0.0) <= tol)

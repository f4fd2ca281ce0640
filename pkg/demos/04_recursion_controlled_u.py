"""
Recursive multi-controlled gates
================================

Two recursive programs for U controlled by q[m..n-1] with target q[n]:
one narrows a global with a local block, the other passes parameters.
"""
# %%
import numpy as np

from qrpl.model import gate_from_text
from qrpl.oracle import compare, controlled_u_matrix, matrix_of
from qrpl.stdlib import load_program
from qrpl.values import ClassicalStore

local, param = load_program("cstar_local"), load_program("cstar_param")

for k in range(1, 5):
    for gate in ("X", "H", "Deutsch(0.7)"):
        want = controlled_u_matrix(k, gate_from_text(gate, ClassicalStore()))
        a = matrix_of(local, env={"first": 1, "last": 1 + k}, gates={"U": gate})
        b = matrix_of(param, "CStar(lo, hi)", env={"lo": 1, "hi": 1 + k}, gates={"U": gate})
        print(f"controls={k} U={gate:13s} {compare(a, want)}  identical={np.array_equal(a.entries, b.entries)}")

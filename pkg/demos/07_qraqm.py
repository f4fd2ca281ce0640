"""
Quantum random access to quantum memory
=======================================

An address register selects which data cell ends up in slot 0. The remaining
cells come out in a fixed, address-dependent order.
"""
# %%
import math

import numpy as np

from qrpl.interpreter import prepare, run
from qrpl.oracle import compare, qraqm_expected, qraqm_state
from qrpl.stdlib import load_program

n = 2
inst = prepare(load_program("qraqm"), {"n": n})
rng = np.random.default_rng(0)
cells = [c / np.linalg.norm(c) for c in rng.normal(size=(2**n, 2)) + 1j * rng.normal(size=(2**n, 2))]

for j in range(2**n):
    exp = qraqm_expected(n, j)
    _, psi = run(inst, state=qraqm_state(n, j, cells))
    rep = compare(psi, qraqm_state(n, j, [cells[s] for s in exp.slots]))
    print(f"address {j}: slots {exp.slots} literal={exp.literal} {rep}")

# %% addresses in superposition: the outputs superpose too
uniform = np.full(2**n, 1 / math.sqrt(2**n))
_, psi = run(inst, state=qraqm_state(n, uniform, cells))
parts = [qraqm_state(n, j, [cells[s] for s in qraqm_expected(n, j).slots]).amplitudes for j in range(2**n)]
print("linearity:", np.max(np.abs(psi.amplitudes - sum(parts) / math.sqrt(2**n))))

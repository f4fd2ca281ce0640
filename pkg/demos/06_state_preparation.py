"""
State preparation
=================

Build sum_j exp(i arg(a_j) / 2) sqrt|a_j| |j> (normalized) with a binary tree
of rotations selected by multi-qubit coins.
"""
# %%
import numpy as np

from qrpl.interpreter import run
from qrpl.oracle import compare, qsp_angles, qsp_data, qsp_target
from qrpl.stdlib import load_program

qsp = load_program("qsp")
rng = np.random.default_rng(1)
a = rng.normal(size=8) + 1j * rng.normal(size=8)
a[5] = 0

print("first rotation (gamma, beta):", qsp_angles(a, 0, 0))
_, psi = run(qsp, "QSP(0, n)", env=qsp_data(a))
rep = compare(psi, qsp_target(a), up_to_phase=True)
print(rep)
print("global phase:", np.round(rep.phase, 6), " expected exp(-i arg(a_0)/2):", np.round(np.exp(-0.5j * np.angle(a[0])), 6))

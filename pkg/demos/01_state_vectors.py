"""
State vectors and gates
=======================

Dense states over named wires, gates on wire subsets, and splitting a state
along a coin register.
"""
# %%
import numpy as np

from qrpl import gates
from qrpl.model import WireId
from qrpl.qstate import CoinBasis, StateVector, apply_unitary, components, recombine, state_close

a, b = WireId("a"), WireId("b")
layout = ((a, 2), (b, 2))  # first wire is the most significant digit
psi = StateVector.basis(layout, 0)

# %% Hadamard then CNOT gives a Bell state
psi = apply_unitary(psi, [a], gates.H)
psi = apply_unitary(psi, [a, b], gates.CNOT)
print("Bell state:", np.round(psi.amplitudes, 4))

# %% the components along the coin a, one per coin basis ket
coin = CoinBasis.computational([a], [2])
parts = components(psi, coin)
for i, t in enumerate(parts):
    print(f"component {i} on b:", np.round(t.amplitudes, 4))

# in the |+>, |-> basis the split is different, but recombining is exact
pm = CoinBasis([a], [2], np.array([[1, 1], [1, -1]]) / np.sqrt(2))
print("|+>/|-> components:", [np.round(t.amplitudes, 4) for t in components(psi, pm)])
print("recombined equals input:", state_close(recombine(pm, components(psi, pm), psi.layout), psi, 1e-12))

"""
Quantum case statements
=======================

A qif runs every branch on its component of the state and adds the results
back together. Branches must agree on the classical store and must leave the
coin alone.
"""
# %%
import numpy as np

from qrpl.errors import ClassicalDivergence, CoinViolation
from qrpl.interpreter import prepare, run, trace
from qrpl.oracle import compare, matrix_of
from qrpl.qstate import StateVector
from qrpl.stdlib import load_program
from qrpl.syntax import parse

cnot = load_program("cnot")
inst = prepare(cnot)
psi = StateVector(inst.layout, np.kron([0.6, 0.8], [1, 0]))  # (0.6|0> + 0.8|1>)|0>
_, out = run(inst, state=psi)
print("CNOT on a superposed control:", np.round(out.amplitudes.real, 3))

# %% one event per rule application
events, _, _ = trace(cnot)
for e in events:
    print(e)

# %% a case over |+>, |-> on q1 is the same operator as a computational case over q2
pair = load_program("basis_change")
print("Lhs vs Rhs:", compare(matrix_of(pair, "Lhs()"), matrix_of(pair, "Rhs()"), 1e-12))

# %% the two error paths
try:
    run(parse("qubit a; qubit b; main { qif[a] case |0> -> skip; case |1> -> X[a] fiq }"))
except CoinViolation as exc:
    print("CoinViolation:", exc)
try:
    run(parse("var x : int; qubit a; qubit b; main { qif[a] case |0> -> x := 1; case |1> -> x := 2 fiq }"))
except ClassicalDivergence as exc:
    print("ClassicalDivergence:", exc)

"""
Recursive quantum Fourier transform
===================================
"""
# %%
import time

from qrpl.errors import RecursionLimit
from qrpl.oracle import compare, dft_matrix, matrix_of
from qrpl.stdlib import get, load_program

qft = load_program("qft")
for n in range(1, 8):
    start = time.perf_counter()
    rep = compare(matrix_of(qft, "QFT(1, n)", env={"n": n}), dft_matrix(n))
    print(f"n={n}: {rep} ({time.perf_counter() - start:.2f}s)")

# %% the original forms, for comparison
print(get("qft").note)
try:
    matrix_of(load_program("qft_printed"), "QFT(1, n)", env={"n": 3})
except RecursionLimit as exc:
    print("unconditional Rotate self-call:", exc)
per_level = load_program("qft_reverse_each_level")
print("Reverse at every level, n=3:", compare(matrix_of(per_level, "QFT(1, n)", env={"n": 3}), dft_matrix(3)))

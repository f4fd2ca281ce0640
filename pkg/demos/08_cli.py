"""
The qrpl command line
=====================

The same steps as the shell commands

    qrpl check src/qrpl/stdlib/cnot.qrp
    qrpl run src/qrpl/stdlib/qft.qrp --call "QFT(1, 3)" --env n=3
    qrpl verify src/qrpl/stdlib/qft.qrp --call "QFT(1, 4)" --env n=4 --oracle dft 4
    qrpl run demos/divergence.qrp
"""
# %%
from pathlib import Path

from qrpl.cli import main

root = Path(__file__).resolve().parents[1]
lib = root / "src" / "qrpl" / "stdlib"

print("check exit:", main(["check", str(lib / "cnot.qrp")]))
print("verify exit:", main(["verify", str(lib / "qft.qrp"), "--call", "QFT(1, 4)", "--env", "n=4", "--oracle", "dft", "4"]))
print("qraqm exit:", main(["verify", str(lib / "qraqm.qrp"), "--oracle", "qraqm", "2"]))
print("divergence exit:", main(["run", str(root / "demos" / "divergence.qrp")]))

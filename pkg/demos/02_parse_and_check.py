"""
Parsing and static checks
=========================
"""
# %%
from qrpl.syntax import check_source, pretty

source = """
qubit q1;
qubit q2;

main {
  qif[q1]
    case |0> -> I[q2];
    case |1> -> X[q2]
  fiq
}
"""
program, diags = check_source(source)
print(pretty(program))
print("diagnostics:", diags)

# %% mistakes are reported with positions, sorted by location
bad = """
qubit c;
qubit t;
main {
  qif[c] case |0> -> Foo[t] fiq;
  Undefined()
}
"""
_, diags = check_source(bad)
for d in diags:
    print(d.format("bad.qrp"))

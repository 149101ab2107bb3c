"""
Local tomography over the reals
===============================

Two rebits have a 10-dimensional state space, but products of local
measurements only span 9 of those dimensions.  For three rebits, measuring
pairs jointly is enough to recover everything.
"""
from gptaxioms import check_k_local_tomography, compose, resolve
from gptaxioms.axioms import k_local_span

rebit, qubit = resolve("rebit"), resolve("qubit")

for parties, label in (([rebit] * 2, "2 rebits"), ([rebit] * 3, "3 rebits"), ([qubit] * 3, "3 qubits")):
    for k in range(1, len(parties) + 1):
        span, dim = k_local_span(parties, k)
        print(f"{label}, k = {k}: span {span:3d} of {dim}")

# %%
# The same numbers through the checker, which also validates that the
# composite carries the right dimension.
three = compose([rebit] * 3, "dimension-count-only")
for k in (1, 2):
    rep = check_k_local_tomography([rebit] * 3, three, k)
    print(f"k = {k}: {rep.verdict} {rep.details}")

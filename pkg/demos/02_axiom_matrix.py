"""
Which theories survive the four axioms
======================================

Run every checker on a selection of models and print the verdict table
next to the expected one.  Failing cells come with witnesses; we print the
first witness of each failure.
"""
from gptaxioms import resolve_entry, run_checks
from gptaxioms.zoo import AXIOMS

REFS = ["classical:3", "qubit", "qutrit", "gbit", "rebit", "ball:2", "ball:3", "ball:5",
        "quaternion-bit", "rebit-pair", "quaternion-bit-pair"]

header = f"{'model':22s}" + "".join(f"{a[:14]:>16s}" for a in AXIOMS)
print(header)
print("-" * len(header))
witnesses = []
for ref in REFS:
    entry = resolve_entry(ref)
    reports = run_checks(entry.spec, AXIOMS, trials=80, seed=0)
    cells = []
    for r in reports:
        mark = "" if r.verdict == entry.expected[r.axiom] else " (!)"
        cells.append(f"{r.verdict + mark:>16s}")
        if r.witnesses:
            witnesses.append((ref, r.axiom, r.witnesses[0]))
    print(f"{ref:22s}" + "".join(cells))

# %%
# One witness per failing cell.  Numbers are exact integers where the check
# is a count (capacities, dimensions, ranks).
print()
for ref, axiom, w in witnesses:
    print(f"{ref} / {axiom}: {w.kind}: {w.message}")
    print(f"    {w.numbers}")

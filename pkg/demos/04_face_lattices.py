"""
Faces as points, lines and planes
=================================

The faces of a good state space behave like the subspaces of a projective
space: a face of dimension zero is a pure state, two distinct pure states
span a line, and dimensions obey r + s = t + m for any two faces with join
of dimension t and meet of dimension m.  The simplex and the qutrit pass;
the square fails in three places.
"""
from gptaxioms import face_lattice, resolve, verify_dimension_law, verify_projective_axioms

for ref, frames in (("classical:4", 0), ("qutrit", 200), ("gbit", 0)):
    m = resolve(ref)
    lat = face_lattice(m, frames=frames, seed=0)
    proj = verify_projective_axioms(m, trials=100, seed=0, lattice=lat)
    law = verify_dimension_law(m, trials=100, seed=0, lattice=lat)
    print(f"{ref}: {len(lat.faces)} faces, dimension counts {lat.dim_counts()}")
    print(f"    clauses {proj.details['clauses']}")
    print(f"    dimension law: {law.details['exceptions']} exceptions in {law.details['pairs']} pairs")

# %%
# A failing pair on the square: two opposite edges.  Both are lines
# (dimension 1) and they do not meet (dimension -1), but their join is the
# whole square, which is itself only a line: 1 + 1 != -1 + 1.
from gptaxioms import StateVector, face_of
from gptaxioms.geometry import dimension_law_case

gbit = resolve("gbit")
left, right = face_of(StateVector([-1, 0, 1]), gbit), face_of(StateVector([1, 0, 1]), gbit)
print(dimension_law_case(left, right).numbers)

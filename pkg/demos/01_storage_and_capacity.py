"""
Storing a die roll
==================

A six-sided die can be stored in any system that holds six perfectly
distinguishable states.  We count those states for a few systems, then look
at what happens to capacity when two states are mixed.
"""
import numpy as np

from gptaxioms import StateVector, face_of, info_capacity, mix, perfectly_distinguishable, resolve

# %%
# The classical die is a simplex with six vertices.  Its capacity is six,
# and the witness is the set of vertices.
die = resolve("die")
res = info_capacity(die)
print(f"{die.name}: capacity {res.capacity} ({res.method}, {res.oracle_calls} oracle calls)")

# %%
# No single quantum system below Hilbert dimension six can store the die.
# Smooth state spaces get their capacity from the support rank;
# the engine then tries random candidate sets to falsify it.
for ref in ("qubit", "qutrit", "quantum:4"):
    print(f"{ref:10s} capacity {info_capacity(resolve(ref)).capacity}")

# %%
# The square ("gbit") holds two distinguishable states, like a bit, but
# no three of its four vertices are jointly distinguishable.
gbit = resolve("gbit")
V = [StateVector(v) for v in gbit.backend.V]
print("gbit capacity", info_capacity(gbit).capacity)
print("three vertices distinguishable?", perfectly_distinguishable(V[:3], gbit).feasible)

# %%
# Mixing two distinguishable states should produce a face that holds both
# capacities.  For classical and quantum systems it does.
q = resolve("qutrit")
b = q.backend
up, down = b.pure([1, 0, 0]), b.pure([0, 1, 0])
m = mix([up, down], [0.3, 0.7])
print("qutrit: capacity of the mixture face =", face_of(m, q).capacity)

# %%
# For the square it does not: the midpoints of two opposite edges are
# distinguishable and each sits on an edge of capacity two, yet their
# mixture is the centre, whose face is the whole square, again capacity two.
s1, s2 = StateVector([1, 0, 1]), StateVector([-1, 0, 1])
centre = mix([s1, s2], [0.5, 0.5])
print("gbit: distinguishable?", perfectly_distinguishable([s1, s2], gbit).feasible)
print("gbit: capacities", face_of(s1, gbit).capacity, face_of(s2, gbit).capacity,
      "-> mixture", face_of(centre, gbit).capacity)
print("centre coordinates", np.round(centre.coords, 3))

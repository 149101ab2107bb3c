"""
Why the Bloch ball is three-dimensional
=======================================

Write a two-qubit state as (alpha, beta, gamma, 1): local Bloch vectors and
the correlation matrix.  Pure states have squared norm 4, so each pure state
doubles as the effect that detects it.  Rotating one half of a maximally
entangled state by a reflection pair gives states orthogonal to it, and
those orthogonality conditions pin the number of Bloch axes to three.
"""
import numpy as np
import sympy as sp

from gptaxioms import bloch

psi = bloch.build_psi_ent()
print("alpha =", psi.alpha, " beta =", psi.beta)
print("gamma =\n", np.round(psi.gamma, 12))
print("|psi|^2 =", round(psi.norm_sq, 12))

# %%
# Every pure two-qubit state has the same norm.
rng = np.random.default_rng(1)
norms = [bloch.pure_two_qubit(bloch.haar_vector(rng)).norm_sq for _ in range(1000)]
print(f"1000 Haar states: |psi|^2 in [{min(norms):.15f}, {max(norms):.15f}]")

# %%
# Reflect two axes of the first qubit; the result is orthogonal to psi.
for i in (2, 3):
    psi_i = bloch.apply_Ri(psi, i)
    print(f"(psi^{i}|psi) = {bloch.verify_orthogonality(psi, psi_i):.2e}")

# %%
# With d2 axes, write g_i for the squared row norms of gamma.  Orthogonality
# gives 1 + sum(g) - 2 g_i - 2 g_1 = 0, normalization gives sum(g) = 3.
for d in (3, 5, 7):
    g, eqs = bloch.d2_constraints(d)
    sol = bloch.d2_solutions(d)
    print(f"d2 = {d}: solutions {sol if sol != sp.EmptySet else 'none'};"
          f" orthogonality alone forces sum(g) = {bloch.forced_total(d)}")
print("derived d2 =", bloch.derive_d2())

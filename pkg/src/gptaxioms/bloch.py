"""Bloch vectors of one and two qubits, and the arithmetic that fixes d2 = 3.

Fiducial measurements are the Pauli observables in the order (z, x, y), so a
coordinate is ``2 p - 1`` for the probability ``p`` of the ``+`` outcome.
A two-qubit state is the vector ``(alpha, beta, gamma, 1)``: the two local
Bloch vectors and the row-major correlation matrix, which is the same
layout the composite ``qubit x qubit`` model uses.  A pure state has
squared norm 4, and its corresponding effect is the state vector itself
read with the composite pairing scale 1/4.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy as sp

from .core import TAU_EQ, EffectVector, StateVector, pair
from .errors import NotAState, RequiresPure

PAULI = np.array([
    [[1, 0], [0, -1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
], dtype=complex)
I2 = np.eye(2, dtype=complex)

#: tolerance for the pure-state norm test
TAU_PURE = 1e-9


@lru_cache(maxsize=1)
def two_qubit_model():
    from .zoo import build_quantum, compose

    q = build_quantum(2).spec
    return compose([q, q], "local-tomographic")


def _check_density(rho: np.ndarray, n: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (n, n):
        raise NotAState(f"expected a {n}x{n} matrix, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=TAU_EQ):
        raise NotAState("matrix is not Hermitian")
    if abs(np.trace(rho).real - 1) > 1e-9 or np.linalg.eigvalsh(rho).min() < -1e-9:
        raise NotAState("matrix is not a density matrix")
    return rho


def fiducial_qubit(rho) -> StateVector:
    """``(<z>, <x>, <y>, 1)`` for a 2x2 density matrix."""
    rho = _check_density(rho, 2)
    r = [np.trace(rho @ P).real for P in PAULI]
    return StateVector(np.append(r, 1.0))


@dataclass(frozen=True, eq=False)
class TwoQubitVector:
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    norm_entry: float = 1.0

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.alpha, self.beta, np.ravel(self.gamma), [self.norm_entry]])

    def as_state(self) -> StateVector:
        return StateVector(self.as_vector())

    @property
    def norm_sq(self) -> float:
        return float(self.as_vector() @ self.as_vector())

    @classmethod
    def from_vector(cls, v) -> "TwoQubitVector":
        v = np.asarray(v, dtype=float)
        if v.shape != (16,):
            raise ValueError(f"two-qubit vectors have 16 entries, got {v.shape}")
        return cls(v[:3].copy(), v[3:6].copy(), v[6:15].reshape(3, 3).copy(), float(v[15]))


def fiducial_two_qubit(rho) -> TwoQubitVector:
    rho = _check_density(rho, 4)
    alpha = np.array([np.trace(rho @ np.kron(P, I2)).real for P in PAULI])
    beta = np.array([np.trace(rho @ np.kron(I2, P)).real for P in PAULI])
    gamma = np.array([[np.trace(rho @ np.kron(P, Q)).real for Q in PAULI] for P in PAULI])
    return TwoQubitVector(alpha, beta, gamma, 1.0)


def pure_two_qubit(vec) -> TwoQubitVector:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return fiducial_two_qubit(np.outer(v, v.conj()))


def haar_vector(rng, n: int = 4) -> np.ndarray:
    """Haar-random unit vector in C^n."""
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return z / np.linalg.norm(z)


def corresponding_effect(psi: TwoQubitVector) -> EffectVector:
    """The effect that is 1 on the pure state ``psi``.

    Its coordinates equal ``psi``; with the composite scale 1/4 the
    functional is ``psi / 4``.
    """
    if abs(psi.norm_sq - 4) > TAU_PURE:
        raise RequiresPure(f"squared norm {psi.norm_sq:.12g} != 4, the state is not pure")
    return EffectVector(psi.as_vector())


def two_qubit_pair(e: EffectVector, psi) -> float:
    s = psi.as_state() if isinstance(psi, TwoQubitVector) else psi
    return pair(e, s, two_qubit_model())


def product_effect(i: int, j: int) -> EffectVector:
    """The effect ``(ij|``: outcome ``i`` on qubit A and ``j`` on qubit B along z."""
    a = np.array([1.0, 0, 0]) * (1 - 2 * i)
    b = np.array([1.0, 0, 0]) * (1 - 2 * j)
    return EffectVector(np.concatenate([a, b, np.outer(a, b).ravel(), [1.0]]))


def deterministic_effect_two_bits() -> EffectVector:
    out = product_effect(0, 0)
    for i, j in ((0, 1), (1, 0), (1, 1)):
        out = out + product_effect(i, j)
    return out


def build_psi_ent() -> TwoQubitVector:
    """The Bell state (|00> + |11>)/sqrt(2)."""
    return pure_two_qubit(np.array([1, 0, 0, 1]) / np.sqrt(2))


def R_matrix(i: int, d2: int = 3) -> np.ndarray:
    if not 2 <= i <= d2:
        raise IndexError(f"axis index {i} outside 2..{d2}")
    R = np.eye(d2)
    R[0, 0] = R[i - 1, i - 1] = -1
    return R


def apply_Ri(psi: TwoQubitVector, i: int) -> TwoQubitVector:
    """Apply ``R^i x I``: flip axes 1 and ``i`` of qubit A."""
    R = R_matrix(i, len(psi.alpha))
    return TwoQubitVector(R @ psi.alpha, psi.beta.copy(), R @ psi.gamma, psi.norm_entry)


def verify_orthogonality(psi: TwoQubitVector, psi_i: TwoQubitVector) -> float:
    """Probability of ``psi_i``'s corresponding effect on ``psi``."""
    return two_qubit_pair(corresponding_effect(psi_i), psi)


def induced_map(U: np.ndarray) -> np.ndarray:
    """16x16 matrix of ``rho -> U rho U^dagger`` on two-qubit coordinates."""
    return two_qubit_model().backend.unitary_action(U)


def isometry_defect(U: np.ndarray) -> float:
    """Deviation of the induced map from an orthogonal map on the 15 non-normalization entries."""
    T = induced_map(U)
    B = T[:15, :15]
    return float(max(np.abs(B.T @ B - np.eye(15)).max(), np.abs(T[15, :15]).max(), np.abs(T[:15, 15]).max()))


# ---------------------------------------------------------------------------
# the d2 argument


def d2_constraints(d2: int):
    """Linear constraints on the squared row norms ``g_1..g_d2`` of the correlation matrix.

    * ``g_1 = 1`` (the first axis is the distinguishing one);
    * ``sum g = 3`` (squared norm 4 with vanishing local vectors);
    * ``1 + sum g - 2 g_i - 2 g_1 = 0`` for ``i = 2..d2`` (the rotated
      entangled states are orthogonal to the original).

    Returns ``(symbols, equations)``.
    """
    g = sp.symbols(f"g1:{d2 + 1}")
    total = sum(g)
    eqs = [sp.Eq(g[0], 1), sp.Eq(total, 3)]
    eqs += [sp.Eq(1 + total - 2 * g[i] - 2 * g[0], 0) for i in range(1, d2)]
    return g, eqs


def d2_solutions(d2: int):
    g, eqs = d2_constraints(d2)
    return sp.linsolve(eqs, g)


def forced_total(d2: int) -> int:
    """``sum g`` after feeding ``sum g = 3`` into the orthogonality constraints.

    Each of those constraints then reads ``g_i = 1``, so the row norms add
    up to ``d2``; only ``d2 = 3`` reproduces the 3 that went in.
    """
    g = sp.symbols(f"g1:{d2 + 1}")
    eqs = [sp.Eq(g[0], 1)] + [sp.Eq(1 + 3 - 2 * g[i] - 2 * g[0], 0) for i in range(1, d2)]
    (sol,) = sp.linsolve(eqs, g)
    return int(sum(sol))


def derive_d2(candidates=(3, 5, 7)) -> int:
    """The unique candidate dimension whose constraint system is consistent."""
    ok = [d for d in candidates if d2_solutions(d) != sp.EmptySet]
    if len(ok) != 1:
        raise ValueError(f"expected exactly one consistent dimension, got {ok}")
    return ok[0]


def two_qubit_identities() -> list:
    """``(name, value, expected)`` for every identity of the argument on the Bell state."""
    psi = build_psi_ent()
    out = [
        ("alpha = 0", float(np.abs(psi.alpha).max()), 0.0),
        ("beta = 0", float(np.abs(psi.beta).max()), 0.0),
        ("gamma_11 = 1", float(psi.gamma[0, 0]), 1.0),
        ("gamma first row off-diagonal = 0", float(np.abs(psi.gamma[0, 1:]).max()), 0.0),
        ("gamma first column off-diagonal = 0", float(np.abs(psi.gamma[1:, 0]).max()), 0.0),
        ("|psi|^2 = 4", psi.norm_sq, 4.0),
        ("(00|psi) = 1/2", two_qubit_pair(product_effect(0, 0), psi), 0.5),
        ("(11|psi) = 1/2", two_qubit_pair(product_effect(1, 1), psi), 0.5),
        ("(01|psi) = 0", two_qubit_pair(product_effect(0, 1), psi), 0.0),
        ("(10|psi) = 0", two_qubit_pair(product_effect(1, 0), psi), 0.0),
        ("(00| + (11| on psi = 1",
         two_qubit_pair(product_effect(0, 0) + product_effect(1, 1), psi), 1.0),
        ("(e|psi) = 1", two_qubit_pair(deterministic_effect_two_bits(), psi), 1.0),
        ("(psi|psi) = 1", verify_orthogonality(psi, psi), 1.0),
    ]
    rows = np.sum(psi.gamma ** 2, axis=1)
    out.append(("|gamma_1|^2 = 1", float(rows[0]), 1.0))
    out.append(("sum |gamma_theta|^2 = 3", float(rows.sum()), 3.0))
    for i in range(2, 4):
        psi_i = apply_Ri(psi, i)
        out.append((f"det R^{i} = 1", float(np.linalg.det(R_matrix(i))), 1.0))
        out.append((f"(psi^{i}|psi) = 0", verify_orthogonality(psi, psi_i), 0.0))
        out.append((f"1 + sum - 2|gamma_{i}|^2 - 2|gamma_1|^2 = 0",
                    float(1 + rows.sum() - 2 * rows[i - 1] - 2 * rows[0]), 0.0))
    return out

"""Convex-feasibility oracles over state spaces and effect cones.

Polytope models are decided by linear programs (HiGHS through
:func:`scipy.optimize.linprog`).  Quantum and ball models have smooth
effect cones; for them the same questions are answered spectrally, which
is exact up to floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from .core import (
    DELTA_DISC,
    TAU_EQ,
    TAU_RANK,
    EffectVector,
    Face,
    Measurement,
    ModelSpec,
    StateVector,
    mix,
    pair,
)
from .errors import DimensionError, NotAState, NotInFace, NumericalError


@dataclass
class LPWitness:
    """Outcome of a perfect-distinguishability problem.

    Exactly one of ``effects`` (a discriminating measurement) and
    ``dual_certificate`` is set.  ``deviation`` is the smallest achievable
    ``max |pair(e_j, rho_i) - delta_ij|`` (zero up to solver noise when
    feasible).  For polytopes the certificate is the dual solution of the
    deviation LP; for smooth models it is the coordinate vector of the
    smallest effect ``E`` certifying state ``i``: every effect that is 1 on
    state ``i`` is at least ``pair(E, state_j) > 0`` on state ``j``.
    """

    feasible: bool
    effects: Optional[Measurement] = None
    dual_certificate: Optional[np.ndarray] = None
    deviation: float = 0.0
    method: str = "lp"
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.feasible


def _check_states(states, m: ModelSpec):
    for s in states:
        if s.dim != m.dim:
            raise DimensionError(f"state has {s.dim} coordinates, {m.name} has dim {m.dim}")


def membership(x, m: ModelSpec, cone: str = "state", tol: float = TAU_EQ) -> bool:
    """Is ``x`` in the state space (``cone="state"``) or the effect set (``cone="effect"``)?"""
    if x.dim != m.dim:
        raise DimensionError(f"vector has {x.dim} coordinates, {m.name} has dim {m.dim}")
    b = m.require_states()
    if cone == "state":
        return b.contains_state(x, tol)
    if cone == "effect":
        return b.contains_effect(x, max(tol, TAU_RANK))
    raise ValueError(f"unknown cone {cone!r}")


# ---------------------------------------------------------------------------
# perfect distinguishability


def perfectly_distinguishable(states: Sequence[StateVector], m: ModelSpec) -> LPWitness:
    """Decide whether ``states`` admit a measurement with ``pair(e_j, rho_i) = delta_ij``."""
    states = list(states)
    _check_states(states, m)
    if len(states) < 1:
        raise ValueError("need at least one state")
    states = [s.normalized() for s in states]
    b = m.require_states()
    if b.family == "polytope":
        return _polytope_distinguish(states, m)
    if b.family == "quantum":
        return _quantum_distinguish(states, m)
    return _ball_distinguish(states, m)


def _polytope_distinguish(states, m: ModelSpec) -> LPWitness:
    V = m.backend.V
    sc = m.pairing_scale
    k, D = V.shape
    N = len(states)
    R = np.array([s.coords for s in states])
    nv = N * D + 1  # effects stacked, then the deviation t
    rows, rhs = [], []
    # effects are nonnegative on every vertex
    for j in range(N):
        blk = np.zeros((k, nv))
        blk[:, j * D:(j + 1) * D] = -V
        rows.append(blk)
        rhs.append(np.zeros(k))
    # complement u - sum e_j is nonnegative on every vertex
    blk = np.zeros((k, nv))
    for j in range(N):
        blk[:, j * D:(j + 1) * D] = V
    rows.append(blk)
    rhs.append(V @ m.unit_effect.coords)
    # |sc * rho_i . e_j - delta_ij| <= t
    for i in range(N):
        for j in range(N):
            r = np.zeros(nv)
            r[j * D:(j + 1) * D] = sc * R[i]
            d = 1.0 if i == j else 0.0
            up = r.copy()
            up[-1] = -1
            lo = -r
            lo[-1] = -1
            rows.append(np.array([up, lo]))
            rhs.append(np.array([d, -d]))
    A = np.vstack(rows)
    bvec = np.concatenate(rhs)
    c = np.zeros(nv)
    c[-1] = 1
    bounds = [(None, None)] * (N * D) + [(0, None)]
    res = linprog(c, A_ub=A, b_ub=bvec, bounds=bounds, method="highs")
    if res.status != 0:
        raise NumericalError(
            f"distinguishability LP ended with status {res.status}: {res.message}",
            {"status": int(res.status), "cond_vertices": float(np.linalg.cond(V))},
        )
    t = float(res.x[-1])
    if t <= DELTA_DISC:
        E = res.x[:-1].reshape(N, D)
        effects = [EffectVector(e) for e in E]
        rest = m.unit_effect.coords - E.sum(axis=0)
        if np.abs(V @ rest).max() > TAU_EQ:
            effects.append(EffectVector(rest))
        else:
            effects[-1] = EffectVector(effects[-1].coords + rest)
        return LPWitness(True, Measurement(effects), None, t, "lp")
    return LPWitness(False, None, np.asarray(res.ineqlin.marginals), t, "lp")


def _quantum_distinguish(states, m: ModelSpec) -> LPWitness:
    b = m.backend
    rhos = [b.to_matrix(s) for s in states]
    supports = []
    for s in states:
        supports.append(b.support(s))
    projs = [Q @ Q.conj().T for Q in supports]
    worst, where = 0.0, None
    for i, P in enumerate(projs):
        for j, rho in enumerate(rhos):
            if i != j:
                v = float(np.trace(P @ rho).real)
                if v > worst:
                    worst, where = v, (i, j)
    if worst <= DELTA_DISC:
        effects = [b.effect_from_matrix(P) for P in projs]
        rest = np.eye(b.n) - sum(projs)
        if np.abs(rest).max() > TAU_EQ:
            effects.append(b.effect_from_matrix(rest))
        return LPWitness(True, Measurement(effects), None, worst, "spectral")
    i, j = where
    cert = b.effect_from_matrix(projs[i]).coords
    return LPWitness(False, None, cert, worst, "spectral",
                     {"pair": where, "lower_bound": worst})


def _ball_distinguish(states, m: ModelSpec) -> LPWitness:
    b = m.backend
    rs = [b.bloch(s) for s in states]
    norms = [np.linalg.norm(r) for r in rs]
    sc = m.pairing_scale
    # an effect that is 1 on r_i is at least the effect (r_i/|r_i|, 1) when r_i is pure,
    # and the unit effect when r_i is mixed
    def certifier(i):
        if norms[i] >= 1 - 1e-9:
            return b.effect(rs[i] / (norms[i] * 2 * sc), 1.0 / (2 * sc))
        return m.unit_effect

    worst, where = 0.0, None
    for i in range(len(rs)):
        E = certifier(i)
        for j in range(len(rs)):
            if i != j:
                v = pair(E, states[j], m)
                if v > worst:
                    worst, where = v, (i, j)
    if len(rs) == 1:
        return LPWitness(True, Measurement([m.unit_effect]), None, 0.0, "spherical")
    if worst <= DELTA_DISC:
        effects = [certifier(i) for i in range(len(rs))]
        return LPWitness(True, Measurement(effects), None, worst, "spherical")
    return LPWitness(False, None, certifier(where[0]).coords, worst, "spherical",
                     {"pair": where, "lower_bound": worst})


# ---------------------------------------------------------------------------
# faces


def face_of(s: StateVector, m: ModelSpec) -> Face:
    """Smallest face of the state space containing ``s``."""
    if s.dim != m.dim:
        raise DimensionError(f"state has {s.dim} coordinates, {m.name} has dim {m.dim}")
    b = m.require_states()
    if not b.contains_state(s, tol=1e-8):
        raise NotAState(f"{s} lies outside the state space of {m.name}")
    return b.face(b.support(s))


def whole_face(m: ModelSpec) -> Face:
    b = m.require_states()
    return b.face(b.whole_rep())


def empty_face(m: ModelSpec) -> Face:
    b = m.require_states()
    if b.family == "polytope":
        return b.face(frozenset())
    if b.family == "quantum":
        return b.face(np.zeros((b.n, 0), dtype=complex))
    return b.face(None)


def in_face(s: StateVector, f: Face) -> bool:
    if f.is_empty:
        return False
    return f.contains(face_of(s, f.owner))


def is_completely_mixed(s: StateVector, f: Face, m: ModelSpec) -> bool:
    """True iff every state of ``f`` can appear in a decomposition of ``s``."""
    g = face_of(s, m)
    if not f.contains(g):
        raise NotInFace(f"{s} does not lie in {f}")
    return g.contains(f)


def face_intersect(f: Face, g: Face) -> Face:
    b = f.owner.backend
    return b.face(b.intersect_rep(f, g))


def face_span(f: Face, g: Face) -> Face:
    if f.is_empty:
        return g
    if g.is_empty:
        return f
    return face_of(mix([f.generator, g.generator], [0.5, 0.5]), f.owner)


def minimal_support_lp(s: StateVector, m: ModelSpec) -> frozenset:
    """Vertices usable in some decomposition of ``s``, found by repeated LPs.

    Independent of the facet-based face computation; used to cross-check it.
    """
    V = m.backend.V
    k = V.shape[0]
    found = set()
    unknown = set(range(k))
    target = s.coords
    while unknown:
        c = np.zeros(k)
        c[list(unknown)] = -1
        res = linprog(c, A_eq=V.T, b_eq=target, bounds=[(0, None)] * k, method="highs")
        if res.status != 0:
            raise NotAState(f"{s} is not a convex combination of vertices")
        hit = {i for i in unknown if res.x[i] > 1e-9}
        if not hit:
            break
        found |= hit
        unknown -= hit
    return frozenset(found)


def polytope_faces(m: ModelSpec, dim_cap: Optional[int] = None) -> list:
    """Every nonempty face of a polytope model, as sorted vertex-index tuples.

    Faces are the vertex sets cut out by subsets of facets; the closure is
    built by intersecting known faces with facet zero sets.  Ordered by
    size, then lexicographically.
    """
    b = m.require_states()
    if b.family != "polytope":
        raise ValueError(f"{m.name} is not a polytope model")
    zero = [frozenset(np.flatnonzero(np.abs(b.V @ h) <= 1e-9).tolist()) for h in b.H]
    top = frozenset(range(b.n_vertices))
    seen = {top}
    stack = [top]
    while stack:
        f = stack.pop()
        for z in zero:
            g = f & z
            if g and g not in seen:
                seen.add(g)
                stack.append(g)
    faces = sorted((tuple(sorted(f)) for f in seen), key=lambda t: (len(t), t))
    if dim_cap is not None:
        def small(f):
            # capacity never exceeds the rank of the face's vertices
            if np.linalg.matrix_rank(b.V[list(f)], tol=1e-9) - 1 <= dim_cap:
                return True
            return b.rep_capacity(frozenset(f)) - 1 <= dim_cap

        faces = [f for f in faces if small(f)]
    return faces

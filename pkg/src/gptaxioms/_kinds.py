"""Kind-specific state-space machinery behind :class:`~gptaxioms.core.ModelSpec`.

Three families cover every model in the toolkit:

* :class:`PolytopeBackend` -- finitely many extreme points, effects are the
  full dual cone (classical simplices, the square bit, box-world composites);
* :class:`QuantumBackend` -- density matrices over the complex or real
  numbers, coordinates taken against a Hermitian observable basis whose
  last element is the identity;
* :class:`BallBackend` -- a unit ball of Bloch vectors with self-dual effects.

A group object exposes ``transport(phi, psi)``, returning the coordinate
matrix of a reversible transformation mapping pure state ``phi`` to pure
state ``psi`` (or ``None`` if the group has no such element), and
``sample(rng)``, returning a random group element.
"""
from __future__ import annotations

import itertools

import numpy as np
from scipy.spatial import ConvexHull, HalfspaceIntersection
from scipy.stats import ortho_group, special_ortho_group, unitary_group

from .core import (
    TAU_EQ,
    TAU_RANK,
    EffectVector,
    Face,
    ModelSpec,
    StateVector,
    layout_permutation,
    model_from_dict,
)
from .errors import NotAState, UnsupportedComposite


def make_backend(model: ModelSpec):
    g = model.geometry
    if model.kind == "polytope":
        return PolytopeBackend(model, np.array(g["vertices"], dtype=float))
    if model.kind == "quantum":
        return QuantumBackend(model, "complex", g["n"], hermitian_basis(g["n"], "complex"))
    if model.kind == "real-quantum":
        return QuantumBackend(model, "real", g["n"], hermitian_basis(g["n"], "real"))
    if model.kind == "ball":
        return BallBackend(model, g["d"])
    if model.kind == "quaternion-bit":
        # the quaternionic bit is the 5-ball; larger quaternionic systems are counted, not built
        return BallBackend(model, 5) if g["n"] == 2 else None
    if model.kind == "composite":
        if g["rule"] != "local-tomographic":
            return None
        return _composite_backend(model, [model_from_dict(f) for f in g["factors"]])
    raise ValueError(model.kind)


# ---------------------------------------------------------------------------
# Polytopes


def polytope_facets(V: np.ndarray) -> np.ndarray:
    """Facet functionals ``h`` with ``h . v >= 0`` on all vertices, max value 1.

    ``V`` holds homogeneous vertices (last coordinate 1) spanning R^D.
    """
    k, D = V.shape
    if k == D:
        H = np.linalg.inv(V).T
    else:
        xs = V[:, :-1]
        centre = xs.mean(axis=0)
        _, _, vt = np.linalg.svd(xs - centre)
        B = vt[: D - 1].T
        hull = ConvexHull((xs - centre) @ B)
        rows = []
        for eq in hull.equations:
            a, b = eq[:-1], eq[-1]
            Ba = B @ a
            rows.append(-np.append(Ba, b - Ba @ centre))
        H = np.array(rows)
    H = H / (V @ H.T).max(axis=0)[:, None]
    # qhull may report one facet several times after triangulating
    keep = []
    for h in H:
        if not any(np.allclose(h, o, atol=1e-9) for o in keep):
            keep.append(h)
    return np.array(keep)


class PolytopeBackend:
    family = "polytope"

    def __init__(self, model: ModelSpec, vertices: np.ndarray):
        self.model = model
        self.V = vertices
        self.H = polytope_facets(vertices)
        # (V e) >= 0 on vertices; effect values on vertex i are scale * V[i] @ e
        self._capacity_cache = {}
        self._group = None

    @property
    def n_vertices(self) -> int:
        return self.V.shape[0]

    @property
    def is_simplex(self) -> bool:
        return self.V.shape[0] == self.V.shape[1]

    def vertex(self, i: int) -> StateVector:
        return StateVector(self.V[i])

    def vertex_index(self, s: StateVector, tol: float = 1e-7):
        d = np.abs(self.V - s.coords / s.weight).max(axis=1)
        i = int(np.argmin(d))
        return i if d[i] <= tol else None

    def extreme_effects(self) -> np.ndarray:
        """Extreme rays of the effect cone, scaled to maximum value 1."""
        return self.H / self.model.pairing_scale

    def contains_state(self, s: StateVector, tol: float = TAU_EQ) -> bool:
        if s.weight < -tol:
            return False
        return bool(np.all(self.H @ s.coords >= -tol))

    def contains_effect(self, e: EffectVector, tol: float = TAU_EQ) -> bool:
        vals = self.model.pairing_scale * (self.V @ e.coords)
        return bool(np.all(vals >= -tol) and np.all(vals <= 1 + tol))

    def support(self, s: StateVector, tol: float = 1e-9) -> frozenset:
        if s.weight <= tol or not self.contains_state(s, tol=1e-8):
            raise NotAState(f"{s} is not a state of {self.model.name}")
        vals = self.H @ (s.coords / s.weight)
        active = self.H[np.abs(vals) <= tol]
        if active.shape[0] == 0:
            return frozenset(range(self.n_vertices))
        on = np.all(np.abs(active @ self.V.T) <= 1e-9, axis=0)
        return frozenset(int(i) for i in np.flatnonzero(on))

    def face(self, rep: frozenset) -> Face:
        rep = frozenset(rep)
        if not rep:
            return Face(self.model, None, -1, rep)
        gen = StateVector(self.V[sorted(rep)].mean(axis=0))
        return Face(self.model, gen, self.rep_capacity(rep) - 1, rep)

    def rep_capacity(self, rep: frozenset) -> int:
        if rep not in self._capacity_cache:
            from .capacity import polytope_capacity

            self._capacity_cache[rep] = polytope_capacity(self.model, rep).capacity
        return self._capacity_cache[rep]

    def whole_rep(self):
        return frozenset(range(self.n_vertices))

    def face_contains(self, f: Face, g: Face) -> bool:
        return g.representation <= f.representation

    def intersect_rep(self, f: Face, g: Face):
        return f.representation & g.representation

    def random_pure(self, rng) -> StateVector:
        return self.vertex(int(rng.integers(self.n_vertices)))

    def random_state(self, rng) -> StateVector:
        k = int(rng.integers(1, self.n_vertices + 1))
        idx = rng.choice(self.n_vertices, size=k, replace=False)
        w = rng.dirichlet(np.ones(k))
        return StateVector(w @ self.V[idx])

    def random_state_in(self, rep, rng) -> StateVector:
        idx = sorted(rep)
        w = rng.dirichlet(np.ones(len(idx)))
        return StateVector(w @ self.V[idx])

    def group(self):
        if self._group is None:
            self._group = PolytopeSymmetry(self.V)
        return self._group


class PolytopeSymmetry:
    """Linear symmetries of a polytope, found as vertex permutations.

    A permutation ``pi`` extends to a linear map iff it preserves the matrix
    ``K = V (V^T V)^{-1} V^T``; the search backtracks on that invariant.
    """

    def __init__(self, V: np.ndarray):
        self.V = V
        self.K = V @ np.linalg.solve(V.T @ V, V.T)
        self.pinv = np.linalg.pinv(V)
        self._perms = None

    def _search(self, order, candidates_for, fixed=None):
        k = len(self.V)
        K = self.K
        perm = [-1] * k
        used = [False] * k

        def ok(a, b_img):
            if abs(K[a, a] - K[b_img, b_img]) > 1e-8:
                return False
            for a2 in order:
                if perm[a2] < 0:
                    break
                if abs(K[a, a2] - K[b_img, perm[a2]]) > 1e-8:
                    return False
            return True

        def rec(pos):
            if pos == k:
                return True
            a = order[pos]
            for b in candidates_for(a):
                if used[b] or not ok(a, b):
                    continue
                perm[a] = b
                used[b] = True
                if rec(pos + 1):
                    return True
                perm[a] = -1
                used[b] = False
            return False

        if fixed is not None:
            a, b = fixed
            if abs(K[a, a] - K[b, b]) > 1e-8:
                return None
        return perm if rec(0) else None

    def matrix(self, perm) -> np.ndarray:
        # T v_i = v_perm(i)  <=>  T = V[perm]^T pinv(V)^T
        return (self.pinv @ self.V[perm]).T

    def transport(self, phi: StateVector, psi: StateVector):
        i = _vertex_of(self.V, phi)
        j = _vertex_of(self.V, psi)
        if i is None or j is None:
            return None
        order = [i] + [a for a in range(len(self.V)) if a != i]
        perm = self._search(order, lambda a: [j] if a == i else range(len(self.V)), fixed=(i, j))
        return None if perm is None else self.matrix(perm)

    def sample(self, rng) -> np.ndarray:
        k = len(self.V)
        order = list(rng.permutation(k))
        perm = self._search(order, lambda a: list(rng.permutation(k)))
        return self.matrix(perm)

    def permutations(self, limit: int = 20000) -> list:
        """Vertex permutations of the symmetry group (at most ``limit``, identity first)."""
        if self._perms is None:
            K = self.K
            k = len(self.V)
            out = []
            perm = [-1] * k
            used = [False] * k

            def rec(a):
                if len(out) >= limit:
                    return
                if a == k:
                    out.append(tuple(perm))
                    return
                for b in range(k):
                    if used[b] or abs(K[a, a] - K[b, b]) > 1e-8:
                        continue
                    if any(abs(K[a, a2] - K[b, perm[a2]]) > 1e-8 for a2 in range(a)):
                        continue
                    perm[a] = b
                    used[b] = True
                    rec(a + 1)
                    used[b] = False
                perm[a] = -1

            rec(0)
            self._perms = out
        return self._perms


def _vertex_of(V, s: StateVector, tol=1e-7):
    d = np.abs(V - s.coords / s.weight).max(axis=1)
    i = int(np.argmin(d))
    return i if d[i] <= tol else None


def max_tensor_vertices(backends) -> np.ndarray:
    """Extreme points of the maximal tensor product of polytopes.

    The composite state space is everything that gives nonnegative
    probability to every product of extreme effects.
    """
    if all(b.is_simplex for b in backends):
        pts = [b.V for b in backends]
        return np.array([_nested(list(vs)) for vs in itertools.product(*pts)])
    Hs = [b.H for b in backends]
    H = np.array([_nested(list(hs)) for hs in itertools.product(*Hs)])
    centre = _nested([b.V.mean(axis=0) for b in backends])
    D = H.shape[1]
    # y are the first D-1 coordinates; the last one is fixed to 1
    A = -H[:, :-1]
    c = -H[:, -1]
    hs = HalfspaceIntersection(np.column_stack([A, c]), centre[:-1])
    pts = []
    for y in hs.intersections:
        if not any(np.allclose(y, p, atol=1e-8) for p in pts):
            pts.append(y)
    pts = np.array(sorted(pts, key=lambda p: tuple(np.round(p, 9))))
    return np.column_stack([pts, np.ones(len(pts))])


def _nested(parts):
    out = np.asarray(parts[0], dtype=float)
    for p in parts[1:]:
        p = np.asarray(p, dtype=float)
        out = np.kron(out, p)[layout_permutation(len(out), len(p))]
    return out


# ---------------------------------------------------------------------------
# Quantum (complex and real)


def hermitian_basis(n: int, field: str) -> np.ndarray:
    """Generalized Gell-Mann observables rescaled to spectrum in [-1, 1], identity last.

    Order: diagonal elements, symmetric off-diagonals, antisymmetric
    off-diagonals (complex field only).  For ``n = 2`` this is (Z, X, Y, I).
    """
    mats = []
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1.0 / l
        d[l] = -1.0
        mats.append(np.diag(d).astype(complex))
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = m[k, j] = 1
            mats.append(m)
    if field == "complex":
        for j in range(n):
            for k in range(j + 1, n):
                m = np.zeros((n, n), dtype=complex)
                m[j, k] = -1j
                m[k, j] = 1j
                mats.append(m)
    mats.append(np.eye(n, dtype=complex))
    return np.array(mats)


def real_dim(n: int, field: str) -> int:
    return {"complex": n * n, "real": n * (n + 1) // 2, "quaternion": n * (2 * n - 1)}[field]


class QuantumBackend:
    family = "quantum"

    def __init__(self, model: ModelSpec, field: str, n: int, basis: np.ndarray, parties=None):
        self.model = model
        self.field = field
        self.n = n
        self.basis = basis
        self.norms = np.einsum("kij,kji->k", basis, basis).real
        self.parties = parties or [n]

    # coordinates <-> operators
    def to_matrix(self, s) -> np.ndarray:
        c = s.coords if hasattr(s, "coords") else np.asarray(s)
        return np.einsum("k,kij->ij", c / self.norms, self.basis)

    def from_matrix(self, rho: np.ndarray) -> StateVector:
        return StateVector(np.einsum("ij,kji->k", rho, self.basis).real)

    def effect_to_matrix(self, e) -> np.ndarray:
        c = e.coords if hasattr(e, "coords") else np.asarray(e)
        return self.model.pairing_scale * np.einsum("k,kij->ij", c, self.basis)

    def effect_from_matrix(self, E: np.ndarray) -> EffectVector:
        c = np.einsum("ij,kji->k", E, self.basis).real
        return EffectVector(c / (self.model.pairing_scale * self.norms))

    def pure(self, vec) -> StateVector:
        v = np.asarray(vec, dtype=complex)
        v = v / np.linalg.norm(v)
        return self.from_matrix(np.outer(v, v.conj()))

    def contains_state(self, s: StateVector, tol: float = TAU_EQ) -> bool:
        return bool(np.linalg.eigvalsh(self.to_matrix(s)).min() >= -tol)

    def contains_effect(self, e: EffectVector, tol: float = TAU_RANK) -> bool:
        w = np.linalg.eigvalsh(self.effect_to_matrix(e))
        return bool(w.min() >= -tol and w.max() <= 1 + tol)

    def support(self, s: StateVector, tol: float = TAU_RANK) -> np.ndarray:
        rho = self.to_matrix(s)
        w, U = np.linalg.eigh(rho)
        if w.min() < -1e-8 or s.weight <= tol:
            raise NotAState(f"{s} is not a state of {self.model.name} (min eigenvalue {w.min():.3g})")
        return U[:, w > tol * max(1.0, s.weight)]

    def projector(self, Q: np.ndarray) -> np.ndarray:
        return Q @ Q.conj().T

    def face(self, Q: np.ndarray) -> Face:
        r = Q.shape[1]
        if r == 0:
            return Face(self.model, None, -1, Q)
        gen = self.from_matrix(self.projector(Q) / r)
        return Face(self.model, gen, r - 1, Q)

    def whole_rep(self):
        return np.eye(self.n, dtype=complex)

    def face_contains(self, f: Face, g: Face) -> bool:
        Qf, Qg = f.representation, g.representation
        if Qg.shape[1] == 0:
            return True
        if Qf.shape[1] < Qg.shape[1]:
            return False
        resid = Qg - Qf @ (Qf.conj().T @ Qg)
        return bool(np.abs(resid).max() <= 1e-8)

    def intersect_rep(self, f: Face, g: Face) -> np.ndarray:
        Qf, Qg = f.representation, g.representation
        if Qf.shape[1] == 0 or Qg.shape[1] == 0:
            return Qf[:, :0]
        u, sv, _ = np.linalg.svd(Qf.conj().T @ Qg)
        # principal angles of zero mark the common subspace
        return Qf @ u[:, : len(sv)][:, sv > 1 - 1e-8]

    def random_vector(self, rng, dim=None) -> np.ndarray:
        dim = dim or self.n
        v = rng.normal(size=dim)
        if self.field == "complex":
            v = v + 1j * rng.normal(size=dim)
        return v / np.linalg.norm(v)

    def random_unitary(self, rng) -> np.ndarray:
        if self.field == "complex":
            return unitary_group.rvs(self.n, random_state=rng) if self.n > 1 else np.eye(1, dtype=complex)
        return ortho_group.rvs(self.n, random_state=rng).astype(complex) if self.n > 1 else np.eye(1, dtype=complex)

    def random_pure(self, rng) -> StateVector:
        return self.pure(self.random_vector(rng))

    def random_state(self, rng, rank=None) -> StateVector:
        rank = rank or int(rng.integers(1, self.n + 1))
        U = self.random_unitary(rng)[:, :rank]
        return self.state_on(U, rng)

    def state_on(self, Q: np.ndarray, rng) -> StateVector:
        """Random state whose support is exactly the column span of ``Q``."""
        p = rng.dirichlet(np.ones(Q.shape[1]))
        p = 0.1 / Q.shape[1] + 0.9 * p
        return self.from_matrix((Q * p) @ Q.conj().T)

    def random_state_in(self, rep, rng) -> StateVector:
        return self.state_on(rep, rng)

    def frame(self, rng) -> np.ndarray:
        return self.random_unitary(rng)

    def unitary_action(self, U: np.ndarray) -> np.ndarray:
        """Coordinate matrix of rho -> U rho U^dagger."""
        moved = np.einsum("ij,ljk,mk->lim", U, self.basis, U.conj())
        return (np.einsum("lij,kji->kl", moved, self.basis).real) / self.norms[None, :]

    def group(self):
        return ConjugationGroup(self)


class ConjugationGroup:
    def __init__(self, backend: QuantumBackend):
        self.b = backend

    def transport(self, phi: StateVector, psi: StateVector):
        a = _top_vector(self.b.to_matrix(phi))
        b = _top_vector(self.b.to_matrix(psi))
        U = _frame_with(b) @ _frame_with(a).conj().T
        return self.b.unitary_action(U)

    def sample(self, rng) -> np.ndarray:
        return self.b.unitary_action(self.b.random_unitary(rng))


def _top_vector(rho):
    w, U = np.linalg.eigh(rho)
    return U[:, -1]


def _frame_with(v):
    n = len(v)
    q, _ = np.linalg.qr(np.column_stack([v, np.eye(n, dtype=complex)]))
    # fix the phase so the first column is exactly v
    ph = np.vdot(q[:, 0], v)
    q[:, 0] *= ph / abs(ph)
    return q


# ---------------------------------------------------------------------------
# Balls


class BallBackend:
    family = "ball"

    def __init__(self, model: ModelSpec, d: int):
        self.model = model
        self.d = d

    def bloch(self, s: StateVector) -> np.ndarray:
        return s.coords[:-1]

    def state(self, r) -> StateVector:
        return StateVector(np.append(np.asarray(r, dtype=float), 1.0))

    def effect(self, a, b=1.0) -> EffectVector:
        return EffectVector(np.append(np.asarray(a, dtype=float), b))

    def contains_state(self, s: StateVector, tol: float = TAU_EQ) -> bool:
        return bool(s.weight >= -tol and np.linalg.norm(self.bloch(s)) <= s.weight + tol)

    def contains_effect(self, e: EffectVector, tol: float = TAU_EQ) -> bool:
        a, b = e.coords[:-1], e.coords[-1]
        sc = self.model.pairing_scale
        na = np.linalg.norm(a)
        return bool(sc * (b - na) >= -tol and sc * (b + na) <= 1 + tol)

    def support(self, s: StateVector, tol: float = TAU_EQ):
        w = s.weight
        r = np.linalg.norm(self.bloch(s))
        if w <= tol or r > w + 1e-8:
            raise NotAState(f"{s} is not a state of {self.model.name}")
        if r >= w - tol:
            return self.bloch(s) / r
        return "ball"

    def face(self, rep) -> Face:
        if rep is None:
            return Face(self.model, None, -1, None)
        if isinstance(rep, str):
            return Face(self.model, self.state(np.zeros(self.d)), 1, rep)
        return Face(self.model, self.state(rep), 0, np.asarray(rep, dtype=float))

    def whole_rep(self):
        return "ball"

    def face_contains(self, f: Face, g: Face) -> bool:
        if g.representation is None:
            return True
        if isinstance(f.representation, str):
            return True
        if f.representation is None or isinstance(g.representation, str):
            return False
        return bool(np.allclose(f.representation, g.representation, atol=1e-8))

    def intersect_rep(self, f: Face, g: Face):
        if self.face_contains(f, g):
            return g.representation
        if self.face_contains(g, f):
            return f.representation
        return None

    def random_direction(self, rng) -> np.ndarray:
        v = rng.normal(size=self.d)
        return v / np.linalg.norm(v)

    def random_pure(self, rng) -> StateVector:
        return self.state(self.random_direction(rng))

    def random_state(self, rng) -> StateVector:
        return self.state(self.random_direction(rng) * rng.uniform(0, 1) ** (1 / self.d))

    def random_state_in(self, rep, rng) -> StateVector:
        if isinstance(rep, str):
            return self.state(self.random_direction(rng) * 0.9 * rng.uniform(0, 1))
        return self.state(rep)

    def group(self):
        return RotationGroup(self.d)


def rotation_between(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """A proper rotation taking unit vector ``u`` to unit vector ``v``."""
    d = len(u)
    if d == 1:
        return np.array([[float(np.sign(u[0]) * np.sign(v[0]))]])
    c = float(np.clip(u @ v, -1, 1))
    if c > 1 - 1e-14:
        return np.eye(d)
    if c < -1 + 1e-14:
        # rotate by pi in a plane containing u
        w = np.eye(d)[np.argmin(np.abs(u))]
        w = w - (w @ u) * u
        w /= np.linalg.norm(w)
        return np.eye(d) - 2 * np.outer(u, u) - 2 * np.outer(w, w)
    w = v - c * u
    w /= np.linalg.norm(w)
    s = np.sqrt(1 - c * c)
    P = np.outer(u, u) + np.outer(w, w)
    return np.eye(d) + (c - 1) * P + s * (np.outer(w, u) - np.outer(u, w))


def _homogeneous(R: np.ndarray) -> np.ndarray:
    d = R.shape[0]
    T = np.eye(d + 1)
    T[:d, :d] = R
    return T


class RotationGroup:
    """SO(d) acting on Bloch vectors (O(1) when d = 1)."""

    def __init__(self, d: int):
        self.d = d

    def transport(self, phi: StateVector, psi: StateVector):
        u = phi.coords[:-1] / np.linalg.norm(phi.coords[:-1])
        v = psi.coords[:-1] / np.linalg.norm(psi.coords[:-1])
        return _homogeneous(rotation_between(u, v))

    def sample(self, rng) -> np.ndarray:
        if self.d == 1:
            return _homogeneous(np.array([[rng.choice([-1.0, 1.0])]]))
        return _homogeneous(special_ortho_group.rvs(self.d, random_state=rng))


class AxisRotationGroup:
    """Rotations about a single axis only; not transitive on the sphere."""

    def __init__(self, d: int, axis: int = 0):
        self.d = d
        self.axis = axis

    def transport(self, phi: StateVector, psi: StateVector):
        u, v = phi.coords[:-1], psi.coords[:-1]
        if abs(u[self.axis] - v[self.axis]) > 1e-9:
            return None
        rest = [i for i in range(self.d) if i != self.axis]
        pu, pv = u[rest], v[rest]
        R = np.eye(self.d)
        if np.linalg.norm(pu) > 1e-12:
            R[np.ix_(rest, rest)] = rotation_between(pu / np.linalg.norm(pu), pv / np.linalg.norm(pv))
        return _homogeneous(R)

    def sample(self, rng) -> np.ndarray:
        rest = [i for i in range(self.d) if i != self.axis]
        R = np.eye(self.d)
        R[np.ix_(rest, rest)] = special_ortho_group.rvs(len(rest), random_state=rng) if len(rest) > 1 else 1
        return _homogeneous(R)


# ---------------------------------------------------------------------------
# Composites


def operator_carrier(model: ModelSpec):
    """``(field, hilbert_dims, basis)`` for models realised by operators, else ``None``.

    Balls of dimension 3 and 2 coincide coordinate-for-coordinate with the
    qubit and the rebit, so they are accepted as those carriers.
    """
    if model.kind == "quantum":
        return "complex", [model.geometry["n"]], model.backend.basis
    if model.kind == "real-quantum":
        return "real", [model.geometry["n"]], model.backend.basis
    if model.kind == "ball" and model.geometry["d"] == 3:
        return "complex", [2], hermitian_basis(2, "complex")
    if model.kind == "ball" and model.geometry["d"] == 2:
        return "real", [2], hermitian_basis(2, "real")
    if model.kind == "composite" and model.backend is not None and model.backend.family == "quantum":
        return model.backend.field, list(model.backend.parties), model.backend.basis
    return None


def _composite_backend(model: ModelSpec, factors):
    backends = [f.backend for f in factors]
    if any(b is None for b in backends):
        raise UnsupportedComposite("a factor has no state space")
    if all(b.family == "polytope" for b in backends):
        return PolytopeBackend(model, max_tensor_vertices(backends))
    carriers = [operator_carrier(f) for f in factors]
    if all(c is not None and c[0] == "complex" for c in carriers):
        basis = carriers[0][2]
        parties = list(carriers[0][1])
        for c in carriers[1:]:
            da, db = len(basis), len(c[2])
            prods = np.einsum("aij,bkl->abikjl", basis, c[2])
            na, nb = basis.shape[1], c[2].shape[1]
            prods = prods.reshape(da * db, na * nb, na * nb)
            basis = prods[layout_permutation(da, db)]
            parties += c[1]
        return QuantumBackend(model, "complex", int(np.prod(parties)), basis, parties=parties)
    raise UnsupportedComposite(
        "local tomography is only available for polytopes and complex quantum factors; "
        f"got {[f.kind for f in factors]}"
    )

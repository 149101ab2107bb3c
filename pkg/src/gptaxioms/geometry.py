"""Faces as subspaces: lattice enumeration and the projective-space checks.

A face of dimension ``j`` is one whose capacity is ``j + 1``; the empty face
has dimension ``-1``.  For theories obeying the first two axioms the faces
behave like the subspaces of a projective space, in particular

    dim f + dim g = dim(f meet g) + dim(f join g).

The lattice of a polytope is enumerated exhaustively.  Quantum lattices are
continuous, so they are sampled: every coordinate subspace plus the flags
``span(U[:, :r])`` of random unitary frames ``U``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .axioms import AxiomReport, _mixed_state, _run
from .convex import empty_face, face_intersect, face_of, face_span, polytope_faces, whole_face
from .core import Face, ModelSpec, Violation

_SALT_FRAMES = 101
_SALT_PAIRS = 102

#: largest Hilbert dimension for which quantum lattices are sampled
MAX_HILBERT = 4
#: below this many faces every pair is checked
EXHAUSTIVE_FACES = 64


@dataclass
class FaceLattice:
    """Enumerated faces of one model, empty face first.

    ``structured`` counts the leading faces that are checked pairwise
    against everything (all faces for polytopes; the empty face and the
    coordinate subspaces for quantum models).  ``chains`` lists index
    tuples of nested faces taken from a single frame.
    """

    model: ModelSpec
    faces: list
    dim_cap: int
    structured: int
    chains: list

    def __len__(self):
        return len(self.faces)

    def leq(self, i: int, j: int) -> bool:
        return self.faces[j].contains(self.faces[i])

    @property
    def top(self) -> Face:
        return whole_face(self.model)

    def dim_counts(self) -> dict:
        out = {}
        for f in self.faces:
            out[f.dim_proj] = out.get(f.dim_proj, 0) + 1
        return dict(sorted(out.items()))


def face_lattice(m: ModelSpec, dim_cap: Optional[int] = None, frames: int = 500, seed: int = 0) -> FaceLattice:
    b = m.require_states()
    cap = m.capacity_declared - 1 if dim_cap is None else dim_cap
    faces = [empty_face(m)]
    chains = []
    if b.family == "polytope":
        faces += [b.face(frozenset(f)) for f in polytope_faces(m, dim_cap=cap)]
        return FaceLattice(m, faces, cap, len(faces), chains)
    if b.family == "quantum":
        n = b.n
        if n > MAX_HILBERT:
            raise ValueError(f"quantum face lattices are sampled only up to Hilbert dimension {MAX_HILBERT}")
        eye = np.eye(n, dtype=complex)
        for r in range(1, n + 1):
            for sub in itertools.combinations(range(n), r):
                if r - 1 <= cap:
                    faces.append(b.face(eye[:, list(sub)]))
        structured = len(faces)
        for k in range(frames):
            U = b.random_unitary(np.random.default_rng([seed, k, _SALT_FRAMES]))
            start = len(faces)
            for r in range(1, min(n, cap + 2)):
                faces.append(b.face(U[:, :r]))
            chains.append(tuple(range(start, len(faces))))
        return FaceLattice(m, faces, cap, structured, chains)
    faces.append(whole_face(m))
    structured = len(faces)
    for k in range(frames):
        rng = np.random.default_rng([seed, k, _SALT_FRAMES])
        faces.append(face_of(b.random_pure(rng), m))
    return FaceLattice(m, faces, cap, structured, chains)


def _pairs(lat: FaceLattice, trials: int, seed: int) -> list:
    N = len(lat.faces)
    if N <= EXHAUSTIVE_FACES:
        return [(i, j) for i in range(N) for j in range(N)]
    S = lat.structured
    out = [(i, j) for i in range(S) for j in range(N)]
    for ch in lat.chains:
        out += [(i, j) for i in ch for j in ch if i < j]
    rng = np.random.default_rng([seed, _SALT_PAIRS])
    for _ in range(trials):
        i, j = rng.integers(S, N, size=2)
        out.append((int(i), int(j)))
    return out


def _gens(*faces):
    return tuple(f.generator.coords for f in faces if not f.is_empty)


def dimension_law_case(f: Face, g: Face) -> Optional[Violation]:
    r, s = f.dim_proj, g.dim_proj
    t = face_intersect(f, g).dim_proj
    mm = face_span(f, g).dim_proj
    if r + s != t + mm:
        return Violation("dimension-law", f"{r} + {s} != {t} + {mm}", states=_gens(f, g),
                         numbers={"r": r, "s": s, "t": t, "m": mm})
    return None


def verify_dimension_law(m: ModelSpec, trials: int = 200, seed: int = 0, frames: int = 500,
                         lattice: Optional[FaceLattice] = None) -> AxiomReport:
    """Check ``dim f + dim g = dim(f meet g) + dim(f join g)`` over lattice pairs."""

    def body():
        lat = lattice or face_lattice(m, frames=frames, seed=seed)
        pairs = _pairs(lat, trials, seed)
        out = []
        for i, j in pairs:
            v = dimension_law_case(lat.faces[i], lat.faces[j])
            if v is not None:
                out.append(v)
        return out, {"faces": len(lat), "pairs": len(pairs), "exceptions": len(out)}

    return _run(m.name, "DimensionLaw", trials, seed, body)


def _face_rank(f: Face) -> int:
    b = f.owner.backend
    if f.is_empty:
        return 0
    return int(np.linalg.matrix_rank(b.projector(f.representation), tol=1e-8))


def verify_projective_axioms(m: ModelSpec, trials: int = 200, seed: int = 0, frames: int = 500,
                             lattice: Optional[FaceLattice] = None) -> AxiomReport:
    """Clauses (i)-(vi) of a projective space, checked on the face lattice.

    (i) the empty face is the only face of dimension -1; (ii) faces of
    dimension 0 are exactly the pure states; (iii) there is a unique face of
    top dimension, the whole state space; (iv) nested faces of equal
    dimension coincide; (v) intersections of faces are faces, and the
    largest face inside both; (vi) the dimension law.  Quantum lattices are
    also checked against support ranks.
    """

    def body():
        lat = lattice or face_lattice(m, frames=frames, seed=seed)
        b = m.backend
        F = lat.faces
        top = lat.top
        clauses = {c: [] for c in ("i", "ii", "iii", "iv", "v", "vi")}

        def bad(c, msg, faces=(), states=(), **numbers):
            clauses[c].append(Violation(f"clause-{c}", msg, states=_gens(*faces) + tuple(states),
                                        numbers=numbers))

        for f in F:
            if (f.dim_proj == -1) != f.is_empty:
                bad("i", "dimension -1 does not single out the empty face", (f,), dim=f.dim_proj)
            if f.dim_proj == 0 and face_of(f.generator, m).dim_proj != 0:
                bad("ii", "a dimension-0 face is not a pure state", (f,))
            if not top.contains(f):
                bad("iii", "face not contained in the whole state space", (f,))
            elif f.dim_proj == top.dim_proj and not f.contains(top):
                bad("iii", "a proper face has the top dimension", (f, top), dim=f.dim_proj)
        if top.dim_proj != m.capacity_declared - 1:
            bad("iii", "top dimension differs from capacity - 1", (top,),
                top=top.dim_proj, capacity=m.capacity_declared)
        for t in range(trials):
            rng = np.random.default_rng([seed, t, _SALT_PAIRS + 1])
            p = b.random_pure(rng)
            if face_of(p, m).dim_proj != 0:
                bad("ii", "a pure state has a face of positive dimension", states=(p.coords,))
            q = _mixed_state(b, rng)
            if face_of(q, m).dim_proj == 0:
                bad("ii", "a mixed state has a dimension-0 face", states=(q.coords,))
            if b.family == "polytope":
                break  # pure states are the vertices, all covered by the lattice

        pairs = _pairs(lat, trials, seed)
        meet_pool = F[: lat.structured]
        for i, j in pairs:
            f, g = F[i], F[j]
            if f <= g and f.dim_proj == g.dim_proj and not g <= f:
                bad("iv", "nested faces of equal dimension differ", (f, g), dim=f.dim_proj)
            h = face_intersect(f, g)
            if not (h <= f and h <= g):
                bad("v", "intersection not inside both faces", (f, g))
            elif not h.is_empty and not face_of(h.generator, m) == h:
                bad("v", "intersection is not a face", (f, g, h))
            elif any(k <= f and k <= g and not k <= h for k in meet_pool):
                bad("v", "a face inside both is not inside the intersection", (f, g))
            v = dimension_law_case(f, g)
            if v is not None:
                clauses["vi"].append(Violation("clause-vi", v.message, v.states, numbers=v.numbers))
        # proper faces of full dimension only show up against the top
        for f in F:
            if f <= top and f.dim_proj == top.dim_proj and not top <= f:
                bad("iv", "a face of top dimension inside the whole space differs from it", (f, top))

        out = [v for c in clauses.values() for v in c]
        details = {"clauses": {c: ("fail" if v else "pass") for c, v in clauses.items()},
                   "faces": len(F), "pairs": len(pairs), "dim_counts": lat.dim_counts()}
        if b.family == "quantum":
            mism = [f for f in F if f.dim_proj != _face_rank(f) - 1]
            details["rank_cross_check"] = "fail" if mism else "pass"
            for f in mism:
                out.append(Violation("cross-check", "face dimension differs from support rank - 1", _gens(f),
                                     numbers={"dim": f.dim_proj, "rank": _face_rank(f)}))
        return out, details

    return _run(m.name, "ProjectiveAxioms", trials, seed, body)


def lattice_law_violations(lat: FaceLattice, trials: int = 200, seed: int = 0) -> list:
    """Commutativity, associativity and absorption of meet/join on sampled faces."""
    rng = np.random.default_rng([seed, _SALT_PAIRS + 2])
    F = lat.faces
    out = []
    for _ in range(trials):
        f, g, h = (F[int(i)] for i in rng.integers(0, len(F), size=3))
        checks = {
            "join-commutes": face_span(f, g) == face_span(g, f),
            "meet-commutes": face_intersect(f, g) == face_intersect(g, f),
            "join-associates": face_span(face_span(f, g), h) == face_span(f, face_span(g, h)),
            "meet-associates": face_intersect(face_intersect(f, g), h) == face_intersect(f, face_intersect(g, h)),
            "absorb-meet": face_intersect(f, face_span(f, g)) == f,
            "absorb-join": face_span(f, face_intersect(f, g)) == f,
            "order-join": not (f <= g) or face_span(f, g) == g,
            "order-meet": not (f <= g) or face_intersect(f, g) == f,
        }
        for name, ok in checks.items():
            if not ok:
                out.append(Violation(name, f"lattice law {name} fails", _gens(f, g, h)))
    return out

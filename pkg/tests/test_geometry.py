import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gptaxioms import (
    empty_face,
    face_intersect,
    face_lattice,
    face_span,
    resolve,
    verify_dimension_law,
    verify_projective_axioms,
    whole_face,
)
from gptaxioms.geometry import dimension_law_case, lattice_law_violations


def subspace_rank(*Qs):
    return int(np.linalg.matrix_rank(np.hstack(Qs), tol=1e-8))


@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 3))
def test_quantum_join_and_meet_match_subspace_ranks(seed, r, s):
    m = resolve("quantum:4")
    b = m.backend
    gen = np.random.default_rng(seed)
    U, W = b.random_unitary(gen), b.random_unitary(gen)
    # share a random number of directions so meets are sometimes nontrivial
    shared = int(gen.integers(0, min(r, s) + 1))
    QU = U[:, :r]
    QW = np.hstack([U[:, :shared], W[:, : s - shared]])
    QW, _ = np.linalg.qr(QW)
    f, g = b.face(QU), b.face(QW)
    join = face_span(f, g)
    meet = face_intersect(f, g)
    assert join.dim_proj + 1 == subspace_rank(QU, QW)
    assert meet.dim_proj + 1 == r + s - subspace_rank(QU, QW)
    assert dimension_law_case(f, g) is None


def test_classical_join_and_meet_are_union_and_intersection():
    m = resolve("classical:4")
    b = m.backend
    for A, B in itertools.product(itertools.combinations(range(4), 2), itertools.combinations(range(4), 3)):
        f, g = b.face(frozenset(A)), b.face(frozenset(B))
        assert face_span(f, g).representation == frozenset(A) | frozenset(B)
        assert face_intersect(f, g).representation == frozenset(A) & frozenset(B)


def test_gbit_dimension_law_exception():
    g = resolve("gbit")
    b = g.backend
    V = b.V
    # two edges meeting in vertex 0
    edges = [frozenset({0, j}) for j in range(1, 4) if np.count_nonzero(V[0] != V[j]) == 1]
    f, h = (b.face(e) for e in edges)
    v = dimension_law_case(f, h)
    assert v is not None
    # r + s = 1 + 1 but meet + join = 0 + 1 (the join is the whole square)
    assert face_span(f, h) == whole_face(g)
    assert face_intersect(f, h).dim_proj == 0


def test_gbit_fails_three_clauses():
    rep = verify_projective_axioms(resolve("gbit"), trials=50)
    assert rep.verdict == "fail"
    assert rep.details["clauses"] == {"i": "pass", "ii": "pass", "iii": "fail", "iv": "fail",
                                      "v": "pass", "vi": "fail"}
    law = verify_dimension_law(resolve("gbit"), trials=50)
    assert law.verdict == "fail" and law.details["exceptions"] > 0


@pytest.mark.parametrize("ref,frames", [("classical:3", 0), ("qubit", 40), ("ball:3", 40), ("rebit", 40),
                                        ("quantum:4", 20), ("ball:5", 20)])
def test_projective_clauses_pass(ref, frames):
    m = resolve(ref)
    lat = face_lattice(m, frames=frames, seed=1)
    rep = verify_projective_axioms(m, trials=40, seed=1, lattice=lat)
    assert rep.verdict == "pass", [w.to_dict() for w in rep.witnesses[:3]]
    assert verify_dimension_law(m, trials=40, seed=1, lattice=lat).verdict == "pass"
    assert lattice_law_violations(lat, trials=40) == []


def test_qubit_lattice_dimensions():
    lat = face_lattice(resolve("qubit"), frames=30)
    assert set(lat.dim_counts()) == {-1, 0, 1}
    assert lat.dim_counts()[1] == 1


def test_lattice_structure():
    lat = face_lattice(resolve("qutrit"), frames=10, seed=2)
    # empty face plus the 7 coordinate subspaces, then a flag of 2 faces per frame
    assert lat.structured == 8
    assert len(lat.faces) == 8 + 2 * 10
    assert len(lat.chains) == 10
    for ch in lat.chains:
        assert all(lat.leq(i, j) for i, j in zip(ch, ch[1:]))
    assert lat.top == whole_face(resolve("qutrit"))
    assert lat.faces[0].is_empty


def test_dim_cap_truncates():
    m = resolve("classical:5")
    lat = face_lattice(m, dim_cap=1)
    assert max(lat.dim_counts()) == 1
    assert lat.dim_counts() == {-1: 1, 0: 5, 1: 10}


def test_large_hilbert_dimension_refused():
    with pytest.raises(ValueError):
        face_lattice(resolve("quantum:5"), frames=1)


def test_empty_face_is_bottom():
    q = resolve("qutrit")
    e = empty_face(q)
    assert face_intersect(e, whole_face(q)).is_empty
    assert face_span(e, whole_face(q)) == whole_face(q)
    assert dimension_law_case(e, whole_face(q)) is None


def test_dimension_law_examples():
    c4 = resolve("classical:4")
    b = c4.backend
    f, g = b.face(frozenset({0, 1})), b.face(frozenset({1, 2}))
    assert face_span(f, g).representation == frozenset({0, 1, 2})
    assert face_intersect(f, g).representation == frozenset({1})
    assert dimension_law_case(f, g) is None  # 1 + 1 = 0 + 2
    q = resolve("qutrit")
    qb = q.backend
    p1, p2 = qb.face(np.eye(3)[:, :1]), qb.face(np.eye(3)[:, 1:2])
    assert (face_span(p1, p2).dim_proj, face_intersect(p1, p2).dim_proj) == (1, -1)
    # two planes in C^3 meet in a line
    gen = np.random.default_rng(0)
    U, W = qb.random_unitary(gen), qb.random_unitary(gen)
    assert face_intersect(qb.face(U[:, :2]), qb.face(W[:, :2])).dim_proj == 0


def test_gbit_opposite_edges():
    from gptaxioms import StateVector, face_of

    g = resolve("gbit")
    left, right = face_of(StateVector([-1, 0, 1]), g), face_of(StateVector([1, 0, 1]), g)
    v = dimension_law_case(left, right)
    assert v.numbers == {"r": 1, "s": 1, "t": -1, "m": 1}

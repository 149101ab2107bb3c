"""Information capacity: size of the largest perfectly distinguishable set.

For polytopes the search is exact.  A perfectly distinguishable set can
always be replaced by extreme points of the members' faces without losing
distinguishability, so the search runs over vertices only, with the LP
oracle deciding each candidate set.  For smooth models the capacity
is known analytically and the engine tries to falsify it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .convex import face_of, perfectly_distinguishable, whole_face
from .core import Face, ModelSpec, StateVector
from .errors import Inconclusive, NumericalError

DEFAULT_BUDGET = 10_000


@dataclass
class CapacityResult:
    capacity: int
    witness_set: list
    method: str
    oracle_calls: int = 0


class _Search:
    """Level-wise search over symmetry orbits of vertex subsets.

    Subsets of a perfectly distinguishable set are perfectly distinguishable,
    so level ``k + 1`` only needs extensions of the distinguishable sets of
    level ``k``; symmetry-equivalent sets are checked once.  The search
    stops at the first empty level or when the rank bound is reached.
    """

    def __init__(self, model: ModelSpec, idx: Sequence[int], budget: int):
        self.model = model
        self.V = model.backend.V
        self.idx = list(idx)
        self.budget = budget
        self.calls = 0
        self.best = []
        self.upper = int(np.linalg.matrix_rank(self.V[self.idx], tol=1e-9))

    def oracle(self, subset) -> bool:
        if self.calls >= self.budget:
            raise Inconclusive(
                f"capacity search exhausted its budget of {self.budget} oracle calls",
                best=len(self.best),
            )
        self.calls += 1
        states = [StateVector(self.V[i]) for i in subset]
        return perfectly_distinguishable(states, self.model).feasible

    def _stabilizer(self):
        rep = set(self.idx)
        perms = self.model.backend.group().permutations()
        return [p for p in perms if all(p[i] in rep for i in self.idx)]

    def run(self) -> list:
        idx = self.idx
        if len(idx) == 1:
            return idx
        # the whole vertex set is worth one call when it could be independent
        if len(idx) <= self.upper and self.oracle(idx):
            return idx
        group = self._stabilizer()

        def canon(subset):
            return min(tuple(sorted(p[i] for i in subset)) for p in group)

        V = self.V

        def spread(subset):
            pts = V[list(subset)]
            return -float(np.sum(np.linalg.norm(pts[:, None] - pts[None], axis=-1)))

        level = sorted({canon((i,)) for i in idx})
        self.best = list(level[0])
        while level and len(self.best) < self.upper:
            candidates = sorted({canon(s + (v,)) for s in level for v in idx if v not in s},
                                key=lambda c: (spread(c), c))
            level = [c for c in candidates if self.oracle(c)]
            if level:
                self.best = list(level[0])
        return self.best


def polytope_capacity(model: ModelSpec, rep, budget: int = DEFAULT_BUDGET) -> CapacityResult:
    """Exact capacity of the face spanned by vertex indices ``rep``."""
    search = _Search(model, sorted(rep), budget)
    best = search.run()
    witness = [StateVector(search.V[i]) for i in best]
    return CapacityResult(len(best), witness, "branch-and-bound", search.calls)


def info_capacity(target: Union[Face, ModelSpec], seed: int = 0, falsify_trials: int = 16,
                  budget: int = DEFAULT_BUDGET) -> CapacityResult:
    """Capacity of a face, or of a whole model's state space."""
    face = whole_face(target) if isinstance(target, ModelSpec) else target
    if face.is_empty:
        raise ValueError("the empty face has no capacity")
    m = face.owner
    b = m.require_states()
    if b.family == "polytope":
        return polytope_capacity(m, face.representation, budget)
    rng = np.random.default_rng(seed)
    if b.family == "quantum":
        Q = face.representation
        r = Q.shape[1]
        witness = [b.pure(Q[:, i]) for i in range(r)]
        calls = 1
        if not perfectly_distinguishable(witness, m).feasible:
            raise NumericalError("support eigenbasis failed the distinguishability oracle")
        for _ in range(falsify_trials):
            coeffs = [b.random_vector(rng, r) for _ in range(r + 1)]
            trial = [b.pure(Q @ c) for c in coeffs]
            calls += 1
            if perfectly_distinguishable(trial, m).feasible:
                raise NumericalError(f"found {r + 1} distinguishable states in a rank-{r} face")
        return CapacityResult(r, witness, "analytic+falsification", calls)
    # ball
    if isinstance(face.representation, str):
        u = b.random_direction(rng)
        witness = [b.state(u), b.state(-u)]
        calls = 1
        if not perfectly_distinguishable(witness, m).feasible:
            raise NumericalError("antipodal pair failed the distinguishability oracle")
        for _ in range(falsify_trials):
            trial = [b.random_pure(rng) for _ in range(3)]
            calls += 1
            if perfectly_distinguishable(trial, m).feasible:
                raise NumericalError("found three distinguishable states in a ball")
        return CapacityResult(2, witness, "analytic+falsification", calls)
    return CapacityResult(1, [face.generator], "analytic+falsification", 0)


def maximal_distinguishable_extension(states: Sequence[StateVector], m: ModelSpec) -> Optional[StateVector]:
    """A state that keeps ``states`` perfectly distinguishable when added, or ``None``."""
    states = list(states)
    if not perfectly_distinguishable(states, m).feasible:
        raise ValueError("the given states are not perfectly distinguishable")
    b = m.require_states()
    if b.family == "polytope":
        centre = np.mean([s.coords for s in states], axis=0)
        order = np.argsort(-np.linalg.norm(b.V - centre, axis=1), kind="stable")
        for i in order:
            v = b.vertex(int(i))
            if perfectly_distinguishable(states + [v], m).feasible:
                return v
        return None
    if b.family == "quantum":
        cols = [b.support(s) for s in states]
        Q = np.column_stack(cols)
        u, sv, _ = np.linalg.svd(Q, full_matrices=True)
        rank = int(np.sum(sv > 1e-9))
        if rank >= b.n:
            return None
        return b.pure(u[:, rank])
    if len(states) == 1 and face_of(states[0], m).dim_proj == 0:
        return b.state(-b.bloch(states[0].normalized()))
    return None

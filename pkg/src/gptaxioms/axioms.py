"""Randomized checkers for the four axioms and auxiliary properties.

Each checker returns an :class:`AxiomReport`.  A ``fail`` verdict always
carries at least one :class:`~gptaxioms.core.Violation` with the concrete
states, effects and numbers that break the claim; when an oracle cannot
decide (solver trouble, exhausted search budget, no state space) the
verdict is ``inconclusive`` rather than a silent pass.

Trial ``t`` of a checker draws from ``default_rng([seed, t, salt])``, so a
report depends only on the model, the seed and the number of trials.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from ._kinds import hermitian_basis, operator_carrier, real_dim
from .capacity import info_capacity
from .convex import face_of, in_face, is_completely_mixed, membership, perfectly_distinguishable, polytope_faces
from .core import (
    TAU_EQ,
    EffectVector,
    Measurement,
    ModelSpec,
    StateVector,
    Violation,
    kron_layout,
    marginal,
    mix,
    pair,
    tensor,
)
from .errors import GPTError, Inconclusive, NumericalError, UnsupportedComposite
from .zoo import compose, natural_composite

AXIOM_ORDER = (
    "Distinguishability",
    "Conservation",
    "Reversibility",
    "Composition",
    "Causality",
    "PureProduct",
    "kLocalTomography",
    "DimensionLaw",
    "ProjectiveAxioms",
)
_SALT = {name: i + 1 for i, name in enumerate(AXIOM_ORDER)}

#: tolerance for replaying transformations (a few ulps of accumulated matrix products)
TAU_MAP = 1e-8


@dataclass
class AxiomReport:
    model: str
    axiom: str
    verdict: str
    trials: int
    seed: int
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "axiom": self.axiom,
            "verdict": self.verdict,
            "trials": self.trials,
            "seed": self.seed,
            "inconclusive": self.verdict == "inconclusive",
            "message": self.message,
            "details": _plain(self.details),
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_plain(v) for v in x]
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def trial_rng(seed: int, trial: int, axiom: str) -> np.random.Generator:
    return np.random.default_rng([seed, trial, _SALT[axiom]])


def _run(name: str, axiom: str, trials: int, seed: int, body: Callable) -> AxiomReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    try:
        witnesses, details = body()
    except (Inconclusive, NumericalError, UnsupportedComposite) as exc:
        return AxiomReport(name, axiom, "inconclusive", trials, seed, [], {}, str(exc))
    verdict = "fail" if witnesses else "pass"
    return AxiomReport(name, axiom, verdict, trials, seed, list(witnesses), details)


def _inconclusive(name, axiom, trials, seed, message) -> AxiomReport:
    return AxiomReport(name, axiom, "inconclusive", trials, seed, [], {}, message)


def _frame(fld: str, r: int, rng) -> np.ndarray:
    """Haar-random r x r unitary (orthogonal for the real field)."""
    z = rng.normal(size=(r, r))
    if fld == "complex":
        z = z + 1j * rng.normal(size=(r, r))
    q, rr = np.linalg.qr(z)
    return q * (np.diag(rr) / np.abs(np.diag(rr)))


def _mixed_state(b, rng) -> StateVector:
    if b.family == "polytope":
        return b.random_state_in(b.whole_rep(), rng)
    if b.family == "quantum":
        return b.random_state(rng, rank=b.n)
    return b.random_state_in("ball", rng)


# ---------------------------------------------------------------------------
# distinguishability


def check_distinguishability(m: ModelSpec, trials: int = 200, seed: int = 0) -> AxiomReport:
    """States not completely mixed in a face are distinguishable from some state of that face."""
    axiom = "Distinguishability"

    def body():
        b = m.require_states()
        out = []
        if b.family == "polytope":
            faces = [set(f) for f in polytope_faces(m, dim_cap=6)]
            pairs = [(F, G) for F in faces for G in faces if G < F]
            sel = range(len(pairs))
            if len(pairs) > trials:
                sel = sorted(np.random.default_rng([seed, _SALT[axiom]]).choice(len(pairs), trials, replace=False))
            checked = 0
            for t, k in enumerate(sel):
                F, G = pairs[k]
                rng = trial_rng(seed, t, axiom)
                rho = b.random_state_in(frozenset(G), rng)
                checked += 1
                if not any(perfectly_distinguishable([rho, b.vertex(v)], m).feasible for v in sorted(F - G)):
                    out.append(Violation(
                        "no-distinguishable-partner",
                        "state is not completely mixed in the face yet no state of the face is distinguishable from it",
                        states=(rho.coords,), numbers={"face": sorted(F), "subface": sorted(G)}))
            return out, {"face_pairs": len(pairs), "checked": checked}
        for t in range(trials):
            rng = trial_rng(seed, t, axiom)
            if b.family == "quantum":
                r = int(rng.integers(2, b.n + 1))
                QF = b.random_unitary(rng)[:, :r]
                s = int(rng.integers(1, r))
                inner = _frame(b.field, r, rng)
                rho = b.state_on(QF @ inner[:, :s], rng)
                phi = b.pure(QF @ inner[:, s])
                F = b.face(QF)
            else:
                rho = b.random_pure(rng)
                phi = b.state(-b.bloch(rho))
                F = b.face("ball")
            if is_completely_mixed(rho, F, m):
                continue
            if not in_face(phi, F) or not perfectly_distinguishable([rho, phi], m).feasible:
                out.append(Violation(
                    "no-distinguishable-partner",
                    "the support-complement state is not distinguishable from the sampled state",
                    states=(rho.coords, phi.coords), numbers={"face_dim": F.dim_proj}))
        return out, {}

    return _run(m.name, axiom, trials, seed, body)


# ---------------------------------------------------------------------------
# conservation of capacity


def conservation_case(m: ModelSpec, sigma: StateVector, rho: StateVector, p: float) -> Optional[Violation]:
    """Check one binary mixture; returns the violation or ``None``."""
    cs = face_of(sigma, m).capacity
    cr = face_of(rho, m).capacity
    cm = face_of(mix([sigma, rho], [p, 1 - p]), m).capacity
    dist = bool(perfectly_distinguishable([sigma, rho], m).feasible)
    numbers = {"p": p, "capacity_sigma": cs, "capacity_rho": cr, "capacity_mixture": cm,
               "required": cs + cr, "distinguishable": dist}
    if cm > cs + cr:
        return Violation("conservation-bound", "mixture face holds more capacity than its parts",
                         states=(sigma.coords, rho.coords), numbers=numbers)
    if dist and cm != cs + cr:
        return Violation("conservation-equality",
                         "distinguishable states whose mixture face has less than the summed capacity",
                         states=(sigma.coords, rho.coords), numbers=numbers)
    return None


def check_conservation(m: ModelSpec, trials: int = 200, seed: int = 0) -> AxiomReport:
    """Capacity of the face of a binary mixture is at most (or, when distinguishable, exactly) the sum."""
    axiom = "Conservation"

    def body():
        b = m.require_states()
        cases = []
        if b.family == "polytope":
            faces = polytope_faces(m)
            cents = [b.face(frozenset(f)).generator for f in faces]
            pairs = [(i, j) for i in range(len(faces)) for j in range(i, len(faces))]
            if len(pairs) > trials:
                pick = np.random.default_rng([seed, _SALT[axiom]]).choice(len(pairs), trials, replace=False)
                pairs = [pairs[k] for k in sorted(pick)]
            cases = [(cents[i], cents[j], 0.5) for i, j in pairs]
        for t in range(len(cases), trials):
            rng = trial_rng(seed, t, axiom)
            p = float(rng.uniform(0.05, 0.95))
            if b.family == "polytope":
                cases.append((b.random_state(rng), b.random_state(rng), p))
            elif b.family == "quantum" and t % 2 == 0:
                U = b.random_unitary(rng)
                r = int(rng.integers(1, b.n))
                s = int(rng.integers(1, b.n - r + 1))
                cases.append((b.state_on(U[:, :r], rng), b.state_on(U[:, r:r + s], rng), p))
            elif b.family == "quantum":
                cases.append((b.random_state(rng), b.random_state(rng), p))
            elif t % 2 == 0:
                s = b.random_pure(rng)
                cases.append((s, b.state(-b.bloch(s)), p))
            else:
                cases.append((b.random_state(rng), b.random_state(rng), p))
        found = [v for v in (conservation_case(m, *c) for c in cases) if v is not None]
        # largest capacity deficit first; stable, so ties keep discovery order
        found.sort(key=lambda v: -(v.numbers["required"] - v.numbers["capacity_mixture"]))
        return found, {"cases": len(cases)}

    return _run(m.name, axiom, trials, seed, body)


# ---------------------------------------------------------------------------
# reversibility


def check_reversibility(m: ModelSpec, trials: int = 200, seed: int = 0) -> AxiomReport:
    """Every pure state can be carried to every other by a reversible transformation."""
    axiom = "Reversibility"

    def body():
        b = m.require_states()
        G = m.group_access
        if G is None:
            raise Inconclusive(f"{m.name} exposes no transformation group")
        u = m.unit_effect.coords
        out = []
        for t in range(trials):
            rng = trial_rng(seed, t, axiom)
            phi, psi = b.random_pure(rng), b.random_pure(rng)
            T = G.transport(phi, psi)
            if T is None:
                out.append(Violation("no-transformation", "the group has no element mapping phi to psi",
                                     states=(phi.coords, psi.coords)))
                continue
            err = float(np.abs(T @ phi.coords - psi.coords).max())
            if err > TAU_MAP:
                out.append(Violation("transport-mismatch", "T phi differs from psi",
                                     states=(phi.coords, psi.coords), numbers={"max_deviation": err}))
            smin = float(np.linalg.svd(T, compute_uv=False).min())
            if smin < 1e-10:
                out.append(Violation("singular", "transformation is not invertible",
                                     numbers={"min_singular_value": smin}))
            for _ in range(3):
                s = b.random_state(rng)
                img = StateVector(T @ s.coords)
                if not membership(img, m, tol=TAU_MAP):
                    out.append(Violation("leaves-state-space", "T maps a state outside the state space",
                                         states=(s.coords, img.coords)))
            du = float(np.abs(T.T @ u - u).max())
            if du > TAU_MAP:
                out.append(Violation("unit-not-preserved", "T changes the deterministic effect",
                                     effects=(u, T.T @ u), numbers={"max_deviation": du}))
        return out, {}

    return _run(m.name, axiom, trials, seed, body)


# ---------------------------------------------------------------------------
# composition


def _vec_real(M: np.ndarray) -> np.ndarray:
    return np.concatenate([M.real.ravel(), M.imag.ravel()])


def _span_rank(rows) -> int:
    A = np.array(rows)
    sv = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(sv > 1e-9 * max(1.0, sv[0])))


def product_span(a: ModelSpec, b: ModelSpec, ab: ModelSpec) -> Optional[tuple]:
    """``(rank, target)`` for the span of product effects, or ``None`` when not computable.

    Polytope composites use products of the factors' extreme effects in
    coordinates.  Operator models use products of the factors' Hermitian
    bases inside the operator space of the joint Hilbert space.
    """
    B = ab.backend
    if B is not None and B.family == "polytope":
        Ha, Hb = a.backend.extreme_effects(), b.backend.extreme_effects()
        rows = [kron_layout(x, y) for x in Ha for y in Hb]
        return _span_rank(rows), ab.dim
    ca, cb = operator_carrier(a), operator_carrier(b)
    if ca is None or cb is None or ca[0] != cb[0]:
        return None
    rows = [_vec_real(np.kron(x, y)) for x in ca[2] for y in cb[2]]
    N = int(np.prod(ca[1]) * np.prod(cb[1]))
    return _span_rank(rows), real_dim(N, ca[0])


def check_composition(a: ModelSpec, b: ModelSpec, ab: ModelSpec, seed: int = 0) -> AxiomReport:
    """Dimensions and capacities multiply, and product effects are tomographically complete."""
    axiom = "Composition"

    def body():
        out = []
        prod_dim = a.dim * b.dim
        details = {"dim": [ab.dim, prod_dim]}
        if ab.dim != prod_dim:
            out.append(Violation("dimension", f"composite dimension {ab.dim} differs from product {prod_dim}",
                                 numbers={"composite": ab.dim, "product": prod_dim}))
        prod_cap = a.capacity_declared * b.capacity_declared
        cap = info_capacity(ab, seed=seed).capacity if ab.has_states else ab.capacity_declared
        details["capacity"] = [cap, prod_cap]
        if cap != prod_cap or ab.capacity_declared != prod_cap:
            out.append(Violation("capacity", f"composite capacity {cap} differs from product {prod_cap}",
                                 numbers={"composite": cap, "declared": ab.capacity_declared,
                                          "product": prod_cap}))
        span = product_span(a, b, ab)
        if span is None:
            details["local_tomography"] = "not computable"
        else:
            rank, target = span
            details["local_tomography"] = [rank, target]
            if rank != target:
                out.append(Violation("local-tomography",
                                     f"product effects span {rank} of {target} dimensions",
                                     numbers={"span": rank, "composite": target}))
        return out, details

    return _run(ab.name, axiom, 1, seed, body)


def check_composition_of(m: ModelSpec, seed: int = 0) -> AxiomReport:
    """Composition check for a single model (its factors, or two copies of it)."""
    try:
        if m.kind == "composite":
            factors = m.factors
            a = factors[0] if len(factors) == 2 else compose(factors[:-1], m.geometry["rule"])
            rep = check_composition(a, factors[-1], m, seed)
        else:
            ab = natural_composite(m)
            if ab is None:
                return _inconclusive(m.name, "Composition", 1, seed,
                                     f"no composite construction is available for {m.name}")
            rep = check_composition(m, m, ab, seed)
    except UnsupportedComposite as exc:
        return _inconclusive(m.name, "Composition", 1, seed, str(exc))
    rep.model = m.name
    return rep


# ---------------------------------------------------------------------------
# auxiliaries


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _block_operators(fld: str, dims: Sequence[int], blocks) -> list:
    """Products of each block's full operator basis, with tensor factors in party order."""
    n = len(dims)
    order = [p for blk in blocks for p in blk]
    inv = np.argsort(order)
    bases = [hermitian_basis(int(np.prod([dims[p] for p in blk])), fld) for blk in blocks]
    out = []
    shape = [dims[p] for p in order]
    N = int(np.prod(dims))
    for ops in itertools.product(*bases):
        M = ops[0]
        for o in ops[1:]:
            M = np.kron(M, o)
        T = M.reshape(shape + shape)
        T = T.transpose(list(inv) + [n + i for i in inv])
        out.append(T.reshape(N, N))
    return out


def k_local_span(parties: Sequence[ModelSpec], k: int) -> tuple:
    """``(span, dim)``: dimension of the span of effects touching at most ``k`` parties."""
    carriers = []
    for p in parties:
        if p.kind == "quaternion-bit":
            raise UnsupportedComposite("quaternionic operators are not represented")
        c = operator_carrier(p)
        if c is None:
            raise UnsupportedComposite(f"{p.name} has no operator realisation")
        carriers.append(c)
    fields = {c[0] for c in carriers}
    if len(fields) != 1:
        raise UnsupportedComposite("parties over different fields")
    fld = fields.pop()
    dims = [n for c in carriers for n in c[1]]
    # parties that are themselves composites keep their internal structure as one block
    groups, pos = [], 0
    for c in carriers:
        groups.append(list(range(pos, pos + len(c[1]))))
        pos += len(c[1])
    rows = []
    for part in _set_partitions(list(range(len(groups)))):
        if max(len(blk) for blk in part) > k:
            continue
        blocks = [[q for g in blk for q in groups[g]] for blk in part]
        rows.extend(_vec_real(M) for M in _block_operators(fld, dims, blocks))
    return _span_rank(rows), real_dim(int(np.prod(dims)), fld)


def check_k_local_tomography(parties: Sequence[ModelSpec], composite: ModelSpec, k: int) -> AxiomReport:
    """Do effects acting on at most ``k`` parties determine the composite state?"""
    axiom = "kLocalTomography"
    if k < 1:
        raise ValueError("k must be >= 1")

    def body():
        span, full = k_local_span(parties, k)
        numbers = {"k": k, "span": span, "dim": composite.dim}
        if full != composite.dim:
            raise UnsupportedComposite(
                f"{composite.name} has dim {composite.dim} but the parties' joint operator space has {full}")
        out = []
        if span != composite.dim:
            out.append(Violation("k-local-span", f"{k}-local effects span {span} of {composite.dim} dimensions",
                                 numbers=numbers))
        return out, numbers

    return _run(composite.name, axiom, 1, 0, body)


def check_pure_product(a: ModelSpec, b: ModelSpec, ab: ModelSpec, trials: int = 200,
                       seed: int = 0) -> AxiomReport:
    """Products of pure states are pure with pure marginals; a mixed factor gives a mixed product."""
    axiom = "PureProduct"

    def body():
        ab.require_states()
        ba, bb = a.require_states(), b.require_states()
        out = []
        for t in range(trials):
            rng = trial_rng(seed, t, axiom)
            pa, pb = ba.random_pure(rng), bb.random_pure(rng)
            s = tensor(pa, pb, ab)
            if face_of(s, ab).dim_proj != 0:
                out.append(Violation("product-not-extreme", "product of pure states is not pure",
                                     states=(pa.coords, pb.coords, s.coords)))
            for which, f in enumerate((a, b)):
                mg = marginal(s, ab, which)
                if face_of(mg, f).dim_proj != 0:
                    out.append(Violation("marginal-not-pure", "marginal of a pure product is mixed",
                                         states=(s.coords, mg.coords), numbers={"party": which}))
            ma = _mixed_state(ba, rng)
            if face_of(ma, a).dim_proj > 0 and face_of(tensor(ma, pb, ab), ab).dim_proj == 0:
                out.append(Violation("mixed-product-extreme", "product with a mixed factor is pure",
                                     states=(ma.coords, pb.coords)))
        return out, {}

    return _run(ab.name, axiom, trials, seed, body)


def _random_extreme_effect(b, m: ModelSpec, rng) -> EffectVector:
    if b.family == "polytope":
        H = b.extreme_effects()
        return EffectVector(H[int(rng.integers(len(H)))])
    if b.family == "quantum":
        v = b.random_vector(rng)
        return b.effect_from_matrix(np.outer(v, v.conj()))
    sc = m.pairing_scale
    return b.effect(b.random_direction(rng) / (2 * sc), 1.0 / (2 * sc))


def check_causality(m: ModelSpec, trials: int = 200, seed: int = 0) -> AxiomReport:
    """Sampled measurements sum to the unit effect, which pairs to each state's weight."""
    axiom = "Causality"

    def body():
        b = m.require_states()
        u = m.unit_effect
        out = []
        for t in range(trials):
            rng = trial_rng(seed, t, axiom)
            k = int(rng.integers(1, 4))
            w = rng.dirichlet(np.ones(k + 1))[:k]
            effects = [EffectVector(wi * _random_extreme_effect(b, m, rng).coords) for wi in w]
            effects.append(u - EffectVector(np.sum([e.coords for e in effects], axis=0)))
            M = Measurement(effects)
            for _ in range(2):
                s = b.random_state(rng)
                probs = np.array([pair(e, s, m) for e in M])
                if probs.min() < -TAU_EQ or probs.max() > 1 + TAU_EQ:
                    out.append(Violation("probability-range", "an outcome probability leaves [0, 1]",
                                         states=(s.coords,), effects=tuple(e.coords for e in M),
                                         numbers={"min": float(probs.min()), "max": float(probs.max())}))
                if abs(pair(u, s, m) - s.weight) > TAU_EQ:
                    out.append(Violation("unit-effect", "deterministic effect does not pair to the weight",
                                         states=(s.coords,), effects=(u.coords,),
                                         numbers={"pairing": pair(u, s, m), "weight": s.weight}))
        return out, {}

    return _run(m.name, axiom, trials, seed, body)


# ---------------------------------------------------------------------------
# driver and reports

CHECKERS = {
    "distinguishability": "Distinguishability",
    "conservation": "Conservation",
    "reversibility": "Reversibility",
    "composition": "Composition",
    "causality": "Causality",
}


def parse_axioms(text: str) -> list:
    """``"all"`` or a comma-separated list of checker names; unknown names raise ``ValueError``."""
    if text.strip().lower() == "all":
        return list(AXIOM_ORDER[:4])
    out = []
    for name in text.split(","):
        key = name.strip().lower()
        if key not in CHECKERS:
            raise ValueError(f"unknown axiom {name.strip()!r}; choose from {sorted(CHECKERS)} or 'all'")
        out.append(CHECKERS[key])
    return out


def run_checks(m: ModelSpec, axioms: Sequence[str] = AXIOM_ORDER[:4], trials: int = 200,
               seed: int = 0) -> list:
    out = []
    for ax in axioms:
        if ax == "Distinguishability":
            out.append(check_distinguishability(m, trials, seed))
        elif ax == "Conservation":
            out.append(check_conservation(m, trials, seed))
        elif ax == "Reversibility":
            out.append(check_reversibility(m, trials, seed))
        elif ax == "Composition":
            out.append(check_composition_of(m, seed))
        elif ax == "Causality":
            out.append(check_causality(m, trials, seed))
        else:
            raise ValueError(f"unknown axiom {ax!r}")
    return out


def _order_key(r: AxiomReport):
    return (r.model, AXIOM_ORDER.index(r.axiom) if r.axiom in AXIOM_ORDER else len(AXIOM_ORDER), r.axiom)


def reports_json(reports: Sequence[AxiomReport]) -> str:
    """Stable JSON: models alphabetically, then the four axioms in order, then auxiliaries."""
    data = [r.to_dict() for r in sorted(reports, key=_order_key)]
    return json.dumps(data, indent=2) + "\n"


def emit_report(reports: Sequence[AxiomReport], path) -> None:
    try:
        Path(path).write_text(reports_json(reports))
    except OSError as exc:
        raise GPTError(f"cannot write report to {path}: {exc}") from exc

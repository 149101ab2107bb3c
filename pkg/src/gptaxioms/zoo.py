"""Constructors for concrete theories and the model-reference grammar.

Every builder returns a :class:`ZooEntry`: the model plus the verdicts the
four axiom checkers are expected to reach on it.  Model references accepted
by :func:`resolve` look like ``classical:6``, ``quantum:3``, ``qubit``,
``rebit``, ``ball:5``, ``gbit``, ``quaternion-bit``,
``composite:qubit,qubit`` or ``@path/to/model.json``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ._kinds import AxisRotationGroup, operator_carrier, real_dim
from .convex import face_of
from .core import ModelSpec, StateVector, model_from_dict, tensor, validate_model
from .errors import AnchorNotPure, GPTError, UnsupportedComposite

AXIOMS = ("Distinguishability", "Conservation", "Reversibility", "Composition")

_PASS = dict.fromkeys(AXIOMS, "pass")


@dataclass(frozen=True)
class ZooEntry:
    spec: ModelSpec
    expected: dict = field(default_factory=lambda: dict(_PASS))

    def to_dict(self) -> dict:
        return {"model": self.spec.to_dict(), "expected": {a: self.expected[a] for a in AXIOMS}}


def _expect(**overrides) -> dict:
    out = dict(_PASS)
    out.update(overrides)
    return out


def classical_vertices(n: int) -> np.ndarray:
    """Simplex vertices in 2p-1 coordinates, normalization last."""
    V = -np.ones((n, n))
    V[:, -1] = 1.0
    for j in range(n - 1):
        V[j, j] = 1.0
    return V


def build_classical(n: int) -> ZooEntry:
    if n < 1:
        raise ValueError("classical systems need n >= 1")
    spec = ModelSpec(f"classical:{n}", "polytope", n, n,
                     {"vertices": classical_vertices(n).tolist()}, 0.5)
    return ZooEntry(spec, _expect())


def build_quantum(n: int) -> ZooEntry:
    if n < 2:
        raise ValueError("quantum systems need n >= 2")
    spec = ModelSpec(f"quantum:{n}", "quantum", n * n, n, {"n": n}, 1.0 / n)
    return ZooEntry(spec, _expect())


def build_real_quantum(n: int) -> ZooEntry:
    if n < 2:
        raise ValueError("real quantum systems need n >= 2")
    spec = ModelSpec(f"real-quantum:{n}", "real-quantum", n * (n + 1) // 2, n, {"n": n}, 1.0 / n)
    return ZooEntry(spec, _expect(Composition="fail"))


def build_ball(d: int) -> ZooEntry:
    if d < 1:
        raise ValueError("balls need d >= 1")
    spec = ModelSpec(f"ball:{d}", "ball", d + 1, 2, {"d": d}, 0.5)
    if d == 3:
        comp = "pass"
    elif d == 2:
        comp = "fail"
    else:
        comp = "inconclusive"
    return ZooEntry(spec, _expect(Composition=comp))


def build_gbit() -> ZooEntry:
    V = [[s1, s2, 1.0] for s1 in (1.0, -1.0) for s2 in (1.0, -1.0)]
    spec = ModelSpec("gbit", "polytope", 3, 2, {"vertices": V}, 0.5)
    return ZooEntry(spec, _expect(Conservation="fail"))


def build_quaternion(n: int = 2) -> ZooEntry:
    """Quaternionic system of Hilbert dimension ``n``; for ``n = 2`` its states form the 5-ball."""
    name = "quaternion-bit" if n == 2 else f"quaternion-bit:{n}"
    spec = ModelSpec(name, "quaternion-bit", n * (2 * n - 1), n, {"n": n}, 1.0 / n)
    return ZooEntry(spec, _expect(Composition="fail"))


def with_axis_group(m: ModelSpec, axis: int = 0) -> ModelSpec:
    """A ball model whose transformations are rotations about one axis only."""
    if m.kind != "ball":
        raise ValueError("axis-restricted groups are defined for balls")
    return m.replace(name=f"{m.name}/axis{axis}", group=AxisRotationGroup(m.geometry["d"], axis))


# ---------------------------------------------------------------------------
# composition


def _field_of(m: ModelSpec):
    """``(field, hilbert_dims)`` for kinds with a Hilbert-space realisation."""
    if m.kind == "quaternion-bit":
        return "quaternion", [m.geometry["n"]]
    if m.kind == "composite" and m.geometry["rule"] == "dimension-count-only":
        return m.geometry["field"], list(m.geometry["hilbert_dims"])
    c = operator_carrier(m)
    return None if c is None else (c[0], list(c[1]))


def compose(parts: Sequence[ModelSpec], rule: str = "local-tomographic") -> ModelSpec:
    """Composite of ``parts``; nested to the left for three or more factors."""
    parts = list(parts)
    if not parts:
        raise ValueError("compose needs at least one part")
    name = "composite:" + ",".join(p.name for p in parts)
    factors = [p.to_dict() for p in parts]
    caps = int(np.prod([p.capacity_declared for p in parts]))
    product_dim = int(np.prod([p.dim for p in parts]))
    if rule == "local-tomographic":
        scale = float(np.prod([p.pairing_scale for p in parts]))
        geometry = {"rule": rule, "factors": factors}
        m = ModelSpec(name, "composite", product_dim, caps, geometry, scale)
        m.require_states()  # raises UnsupportedComposite for mixed or unsupported kinds
        return m
    if rule == "dimension-count-only":
        fields = [_field_of(p) for p in parts]
        if any(f is None for f in fields) or len({f[0] for f in fields}) != 1:
            raise UnsupportedComposite(
                f"no common Hilbert-space field for {[p.kind for p in parts]}")
        fld = fields[0][0]
        dims = [n for f in fields for n in f[1]]
        N = int(np.prod(dims))
        native = real_dim(N, fld)
        geometry = {"rule": rule, "factors": factors, "field": fld, "hilbert_dims": dims,
                    "native_dim": native, "product_dim": product_dim}
        return ModelSpec(name, "composite", native, caps, geometry, 1.0 / N)
    raise UnsupportedComposite(f"unknown composition rule {rule!r}")


def natural_composite(m: ModelSpec) -> Optional[ModelSpec]:
    """The composite of two copies of ``m`` the theory itself prescribes, if we can build one."""
    if m.kind == "composite" and m.geometry["rule"] == "dimension-count-only":
        return compose([m, m], "dimension-count-only")
    if m.kind == "polytope" or operator_carrier(m) is not None and operator_carrier(m)[0] == "complex":
        return compose([m, m], "local-tomographic")
    if m.kind == "composite" and m.backend is not None and m.backend.family == "polytope":
        return compose([m, m], "local-tomographic")
    if _field_of(m) is not None:
        return compose([m, m], "dimension-count-only")
    return None


def embed_subsystem(s: StateVector, anchor: StateVector, composite: ModelSpec) -> StateVector:
    """``s`` on the first factor, the pure ``anchor`` on the second."""
    factors = composite.factors
    if len(factors) != 2:
        raise UnsupportedComposite("embedding needs a two-factor composite")
    if face_of(anchor.normalized(), factors[1]).dim_proj != 0:
        raise AnchorNotPure(f"{anchor} is not a pure state of {factors[1].name}")
    return tensor(s, anchor, composite)


# ---------------------------------------------------------------------------
# manifest and references

ALIASES = {
    "qubit": "quantum:2",
    "qutrit": "quantum:3",
    "rebit": "real-quantum:2",
    "bit": "classical:2",
    "die": "classical:6",
}


def _pair(ref: str) -> ZooEntry:
    base = resolve_entry(ref).spec
    spec = compose([base, base], "dimension-count-only").replace(name=f"{ref}-pair")
    return ZooEntry(spec, _expect(Distinguishability="inconclusive", Conservation="inconclusive",
                                  Reversibility="inconclusive", Composition="fail"))


NAMED = {
    "gbit": build_gbit,
    "quaternion-bit": build_quaternion,
    "rebit-pair": lambda: _pair("rebit"),
    "quaternion-bit-pair": lambda: _pair("quaternion-bit"),
}

PARAMETRIC = {
    "classical": build_classical,
    "quantum": build_quantum,
    "real-quantum": build_real_quantum,
    "ball": build_ball,
    "quaternion-bit": build_quaternion,
}

MANIFEST_REFS = (
    [f"classical:{n}" for n in range(1, 7)]
    + [f"quantum:{n}" for n in range(2, 5)]
    + ["real-quantum:2", "real-quantum:3", "ball:2", "ball:3", "ball:4", "ball:5",
       "gbit", "quaternion-bit", "composite:classical:2,classical:3", "composite:qubit,qubit",
       "rebit-pair", "quaternion-bit-pair"]
)


def resolve_entry(ref: str) -> ZooEntry:
    ref = ref.strip()
    if ref.startswith("@"):
        path = Path(ref[1:])
        try:
            data = json.loads(path.read_text())
            spec = model_from_dict(data)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise GPTError(f"cannot load model file {path}: {exc}") from exc
        return ZooEntry(spec, {})
    ref = ALIASES.get(ref, ref)
    if ref in NAMED:
        return NAMED[ref]()
    if ref.startswith("composite:"):
        parts = [resolve_entry(p).spec for p in ref[len("composite:"):].split(",")]
        try:
            spec = compose(parts, "local-tomographic")
        except UnsupportedComposite:
            spec = compose(parts, "dimension-count-only")
            return ZooEntry(spec, _expect(Distinguishability="inconclusive",
                                          Conservation="inconclusive",
                                          Reversibility="inconclusive", Composition="fail"))
        return ZooEntry(spec, _expect())
    head, _, param = ref.partition(":")
    if head in PARAMETRIC and param:
        try:
            n = int(param)
        except ValueError:
            raise GPTError(f"bad parameter in model reference {ref!r}") from None
        return PARAMETRIC[head](n)
    raise GPTError(f"unknown model reference {ref!r}")


def resolve(ref: str) -> ModelSpec:
    return resolve_entry(ref).spec


def manifest() -> list:
    out = []
    for ref in MANIFEST_REFS:
        entry = resolve_entry(ref)
        row = entry.to_dict()
        row["ref"] = ref
        row["valid"] = not validate_model(entry.spec)
        out.append(row)
    return out

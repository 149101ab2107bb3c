"""Domain types and the probability pairing shared by every module.

States and effects are real coordinate vectors in a fiducial representation.
The last coordinate of a state is its normalization (its weight), so a
normalized state always ends in ``1``.  The probability of effect ``e`` on
state ``s`` is the plain dot product scaled by the model's pairing scale::

    pair(e, s) = model.pairing_scale * (e . s)

For an elementary ball model the scale is 1/2, so an effect with coordinates
``(phi, 1)`` gives ``(1 + phi . psi) / 2`` on the state ``(psi, 1)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Optional, Sequence

import numpy as np

from .errors import DimensionError, UnsupportedComposite, WeightError

#: equality tolerance for all vector comparisons
TAU_EQ = 1e-9
#: tolerance on achieved deviation from delta_ij in distinguishability problems
DELTA_DISC = 1e-7
#: eigenvalue threshold for supports and effect-cone membership
TAU_RANK = 1e-10

KINDS = ("polytope", "quantum", "real-quantum", "quaternion-bit", "ball", "composite")
SCHEMA_VERSION = "1.0"


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise DimensionError(f"expected a 1-d coordinate vector, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """A (possibly subnormalized) state in fiducial coordinates."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen(self.coords))

    @property
    def weight(self) -> float:
        return float(self.coords[-1])

    @property
    def dim(self) -> int:
        return self.coords.shape[0]

    def normalized(self) -> "StateVector":
        return StateVector(self.coords / self.weight)

    def allclose(self, other: "StateVector", tol: float = TAU_EQ) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.coords, other.coords, atol=tol, rtol=0))

    def tolist(self):
        return [float(x) for x in self.coords]

    def __repr__(self):
        return f"StateVector({np.array2string(self.coords, precision=4)})"


@dataclass(frozen=True, eq=False)
class EffectVector:
    """A linear functional on states, in the same coordinate layout."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen(self.coords))

    @property
    def dim(self) -> int:
        return self.coords.shape[0]

    def functional(self, model: "ModelSpec") -> np.ndarray:
        """The vector ``f`` with ``pair(e, s) = f . s`` (coords times the pairing scale)."""
        return model.pairing_scale * self.coords

    def __add__(self, other: "EffectVector") -> "EffectVector":
        return EffectVector(self.coords + other.coords)

    def __sub__(self, other: "EffectVector") -> "EffectVector":
        return EffectVector(self.coords - other.coords)

    def __mul__(self, c: float) -> "EffectVector":
        return EffectVector(c * self.coords)

    __rmul__ = __mul__

    def allclose(self, other: "EffectVector", tol: float = TAU_EQ) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.coords, other.coords, atol=tol, rtol=0))

    def tolist(self):
        return [float(x) for x in self.coords]

    def __repr__(self):
        return f"EffectVector({np.array2string(self.coords, precision=4)})"


@dataclass(frozen=True)
class Measurement:
    """A finite list of effects that should sum to the deterministic effect."""

    effects: tuple

    def __post_init__(self):
        effects = tuple(self.effects)
        if not effects:
            raise ValueError("a measurement needs at least one effect")
        object.__setattr__(self, "effects", effects)

    def __len__(self):
        return len(self.effects)

    def __iter__(self):
        return iter(self.effects)

    def __getitem__(self, i):
        return self.effects[i]

    def total(self) -> EffectVector:
        return EffectVector(np.sum([e.coords for e in self.effects], axis=0))

    def is_complete(self, model: "ModelSpec", tol: float = TAU_EQ) -> bool:
        return self.total().allclose(model.unit_effect, tol)


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """Complete description of one system of a probabilistic theory.

    ``dim`` counts every coordinate, the normalization included, so state
    vectors always have length ``dim``.  ``geometry`` is the kind-specific
    payload (vertex list, Hilbert dimension, ball dimension or factor list).
    ``group`` optionally overrides the transformation group derived from
    the kind; see :mod:`gptaxioms._kinds` for the protocol.
    """

    name: str
    kind: str
    dim: int
    capacity_declared: int
    geometry: dict
    pairing_scale: float
    unit_coords: Optional[tuple] = None
    group: Any = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")

    @cached_property
    def backend(self):
        from ._kinds import make_backend

        return make_backend(self)

    @property
    def has_states(self) -> bool:
        """False for dimension-count-only composites, which carry no state space."""
        return self.backend is not None

    def require_states(self):
        if self.backend is None:
            raise UnsupportedComposite(
                f"{self.name} is a dimension-count-only composite without a state space"
            )
        return self.backend

    @cached_property
    def unit_effect(self) -> EffectVector:
        if self.unit_coords is not None:
            return EffectVector(self.unit_coords)
        coords = np.zeros(self.dim)
        coords[-1] = 1.0 / self.pairing_scale
        return EffectVector(coords)

    @property
    def group_access(self):
        if self.group is not None:
            return self.group
        backend = self.backend
        return None if backend is None else backend.group()

    @property
    def factors(self) -> list:
        if self.kind != "composite":
            return []
        return [model_from_dict(f) for f in self.geometry["factors"]]

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "kind": self.kind,
            "dim": self.dim,
            "capacity": self.capacity_declared,
            "geometry": self.geometry,
            "pairing_scale": self.pairing_scale,
        }
        if self.unit_coords is not None:
            out["unit_effect"] = [float(x) for x in self.unit_coords]
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def replace(self, **changes) -> "ModelSpec":
        data = dict(
            name=self.name,
            kind=self.kind,
            dim=self.dim,
            capacity_declared=self.capacity_declared,
            geometry=self.geometry,
            pairing_scale=self.pairing_scale,
            unit_coords=self.unit_coords,
            group=self.group,
        )
        data.update(changes)
        return ModelSpec(**data)

    def __repr__(self):
        return f"ModelSpec({self.name!r}, kind={self.kind!r}, dim={self.dim}, capacity={self.capacity_declared})"


def _number(x):
    # rationals may be written as "p/q" strings in hand-made model files
    if isinstance(x, str):
        return float(Fraction(x))
    return x


def _parse_geometry(geometry: dict) -> dict:
    geometry = dict(geometry)
    if "vertices" in geometry:
        geometry["vertices"] = [[float(_number(x)) for x in v] for v in geometry["vertices"]]
    return geometry


def model_from_dict(data: dict) -> ModelSpec:
    unit = data.get("unit_effect")
    return ModelSpec(
        name=data["name"],
        kind=data["kind"],
        dim=int(data["dim"]),
        capacity_declared=int(data["capacity"]),
        geometry=_parse_geometry(data["geometry"]),
        pairing_scale=float(_number(data["pairing_scale"])),
        unit_coords=None if unit is None else tuple(float(_number(x)) for x in unit),
    )


def model_from_json(text: str) -> ModelSpec:
    return model_from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Faces


@dataclass(eq=False)
class Face:
    """A face of a state space, i.e. the refinement set of some state.

    ``representation`` is kind specific: a frozenset of vertex indices for
    polytopes, an orthonormal basis of the support for quantum kinds, and
    ``None`` / ``"ball"`` / a unit vector for balls.  ``generator`` is a
    state completely mixed in the face (``None`` for the empty face).
    """

    owner: ModelSpec
    generator: Optional[StateVector]
    dim_proj: int
    representation: Any

    @property
    def capacity(self) -> int:
        return self.dim_proj + 1

    @property
    def is_empty(self) -> bool:
        return self.generator is None

    def contains(self, other: "Face") -> bool:
        return self.owner.backend.face_contains(self, other)

    def __le__(self, other: "Face") -> bool:
        return other.contains(self)

    def __ge__(self, other: "Face") -> bool:
        return self.contains(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Face):
            return NotImplemented
        return self.contains(other) and other.contains(self)

    __hash__ = None

    def __repr__(self):
        return f"Face({self.owner.name}, dim_proj={self.dim_proj})"


# ---------------------------------------------------------------------------
# Operations


def _check_dim(vec, m: ModelSpec, what: str):
    if vec.dim != m.dim:
        raise DimensionError(f"{what} has {vec.dim} coordinates but {m.name} has dim {m.dim}")


def pair(e: EffectVector, s: StateVector, m: ModelSpec) -> float:
    """Probability of effect ``e`` on state ``s`` in model ``m``."""
    _check_dim(e, m, "effect")
    _check_dim(s, m, "state")
    return float(m.pairing_scale * np.dot(e.coords, s.coords))


def mix(states: Sequence[StateVector], weights: Sequence[float]) -> StateVector:
    """Convex combination of states."""
    weights = np.asarray(weights, dtype=float)
    if len(states) == 0 or len(states) != len(weights):
        raise WeightError("need one weight per state and at least one state")
    if np.any(weights < -TAU_EQ) or abs(weights.sum() - 1.0) > TAU_EQ:
        raise WeightError(f"weights {weights.tolist()} are not a probability distribution")
    dims = {s.dim for s in states}
    if len(dims) != 1:
        raise DimensionError(f"states of different lengths {sorted(dims)}")
    return StateVector(np.einsum("i,ij->j", weights, np.array([s.coords for s in states])))


def layout_permutation(da: int, db: int) -> np.ndarray:
    """Map Kronecker indices to the (alpha, beta, gamma, norm) layout.

    ``kron(a, b)[perm]`` lists first a's Bloch part times b's weight, then
    a's weight times b's Bloch part, then the correlation block row by row,
    and finally the product of weights.
    """
    idx = np.arange(da * db).reshape(da, db)
    alpha = idx[: da - 1, db - 1]
    beta = idx[da - 1, : db - 1]
    gamma = idx[: da - 1, : db - 1].ravel()
    return np.concatenate([alpha, beta, gamma, [idx[da - 1, db - 1]]])


def kron_layout(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)[layout_permutation(len(a), len(b))]


def _factor_dims(composite: ModelSpec) -> list:
    if composite.kind != "composite":
        raise UnsupportedComposite(f"{composite.name} is not a composite model")
    return [f["dim"] for f in composite.geometry["factors"]]


def product_coords(parts: Sequence[np.ndarray]) -> np.ndarray:
    """Nested layout product ``((p0 (x) p1) (x) p2) ...``."""
    out = np.asarray(parts[0], dtype=float)
    for p in parts[1:]:
        out = kron_layout(out, np.asarray(p, dtype=float))
    return out


def tensor(a: StateVector, b: StateVector, composite: ModelSpec) -> StateVector:
    """Product state of two factors inside a locally tomographic composite."""
    return tensor_many([a, b], composite)


def tensor_many(states: Sequence[StateVector], composite: ModelSpec) -> StateVector:
    dims = _factor_dims(composite)
    if composite.geometry.get("rule") != "local-tomographic":
        raise UnsupportedComposite(f"{composite.name} is not locally tomographic; no product states")
    if [s.dim for s in states] != dims:
        raise DimensionError(f"factor lengths {[s.dim for s in states]} do not match {dims}")
    return StateVector(product_coords([s.coords for s in states]))


def tensor_effects(effects: Sequence[EffectVector], composite: ModelSpec) -> EffectVector:
    dims = _factor_dims(composite)
    if [e.dim for e in effects] != dims:
        raise DimensionError(f"factor lengths {[e.dim for e in effects]} do not match {dims}")
    return EffectVector(product_coords([e.coords for e in effects]))


def marginal(s: StateVector, composite: ModelSpec, which: int) -> StateVector:
    """Reduced state of factor ``which`` (0-based) of a composite."""
    dims = _factor_dims(composite)
    # peel the nested layout from the outside in
    coords = s.coords
    outer = dims[:]
    while len(outer) > 1:
        da = int(np.prod(outer[:-1]))
        db = outer[-1]
        if which == len(outer) - 1:
            return StateVector(np.append(coords[da - 1 : da - 1 + db - 1], coords[-1]))
        coords = np.append(coords[: da - 1], coords[-1])
        outer = outer[:-1]
    return StateVector(coords)


@dataclass(frozen=True)
class Violation:
    """A concrete, replayable counterexample to some claim."""

    kind: str
    message: str
    states: tuple = ()
    effects: tuple = ()
    numbers: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "states": [list(map(float, s)) for s in self.states],
            "effects": [list(map(float, e)) for e in self.effects],
            "numbers": {k: _plain(v) for k, v in self.numbers.items()},
            "message": self.message,
        }


def _plain(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(x) for x in v]
    return v


def _expected_dim(m: ModelSpec) -> Optional[int]:
    g = m.geometry
    if m.kind == "polytope":
        return len(g["vertices"][0]) if g.get("vertices") else None
    if m.kind == "quantum":
        return g["n"] ** 2
    if m.kind == "real-quantum":
        return g["n"] * (g["n"] + 1) // 2
    if m.kind == "quaternion-bit":
        return g["n"] * (2 * g["n"] - 1)
    if m.kind == "ball":
        return g["d"] + 1
    if m.kind == "composite":
        if g["rule"] == "local-tomographic":
            return int(np.prod([f["dim"] for f in g["factors"]]))
        return g.get("native_dim")
    return None


def validate_model(m: ModelSpec, samples: int = 64, seed: int = 0) -> list:
    """Internal-consistency checks; violations are returned, never raised."""
    out = []
    if m.dim < 1:
        out.append(Violation("dim", f"dim {m.dim} < 1", numbers={"dim": m.dim}))
    if m.capacity_declared < 1:
        out.append(Violation("capacity", "capacity < 1", numbers={"capacity": m.capacity_declared}))
    if m.pairing_scale <= 0:
        out.append(Violation("pairing-scale", "pairing scale must be positive",
                             numbers={"pairing_scale": m.pairing_scale}))
        return out
    expected = _expected_dim(m)
    if expected is not None and expected != m.dim:
        out.append(Violation("dim", f"declared dim {m.dim} but geometry implies {expected}",
                             numbers={"declared": m.dim, "geometry": expected}))
        return out
    if m.kind == "polytope":
        V = np.array(m.geometry["vertices"], dtype=float)
        if np.any(np.abs(V) > 1 + TAU_EQ):
            out.append(Violation("vertex-range", "vertex coordinates outside [-1, 1]",
                                 numbers={"max_abs": float(np.abs(V).max())}))
        if np.any(np.abs(V[:, -1] - 1) > TAU_EQ):
            out.append(Violation("vertex-normalization", "vertices must end in 1"))
        rank = int(np.linalg.matrix_rank(V, tol=1e-9))
        if rank != m.dim:
            out.append(Violation("dim", f"vertices span {rank} dimensions, declared {m.dim}",
                                 numbers={"declared": m.dim, "span": rank}))
    if m.kind == "composite":
        caps = [f["capacity"] for f in m.geometry["factors"]]
        if int(np.prod(caps)) != m.capacity_declared:
            out.append(Violation("capacity", "composite capacity differs from the product of factors",
                                 numbers={"declared": m.capacity_declared, "product": int(np.prod(caps))}))
    if m.unit_effect.dim != m.dim:
        out.append(Violation("unit-effect", "unit effect has the wrong length"))
        return out
    backend = m.backend
    if backend is None or out:
        return out
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        s = backend.random_state(rng)
        worst = max(worst, abs(pair(m.unit_effect, s, m) - s.weight))
    if worst > TAU_EQ:
        out.append(Violation("unit-effect", "deterministic effect does not pair to the weight",
                             effects=(m.unit_effect.coords,), numbers={"max_deviation": worst}))
    return out

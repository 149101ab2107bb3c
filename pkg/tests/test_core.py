import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from gptaxioms import (
    DimensionError,
    EffectVector,
    Measurement,
    StateVector,
    UnsupportedComposite,
    WeightError,
    compose,
    marginal,
    mix,
    model_from_dict,
    model_from_json,
    pair,
    resolve,
    tensor,
    tensor_effects,
    tensor_many,
    validate_model,
)
from gptaxioms.core import layout_permutation

PAULI = {
    "I": np.eye(2, dtype=complex),
    "Z": np.diag([1.0, -1.0]).astype(complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
}
ZXY = [PAULI["Z"], PAULI["X"], PAULI["Y"]]

finite = st.floats(-1, 1, allow_nan=False)


def bloch_rho(r):
    return 0.5 * (PAULI["I"] + sum(c * P for c, P in zip(r, ZXY)))


def random_bloch(rng, pure=False):
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return v if pure else v * rng.uniform(0, 1) ** (1 / 3)


# --- pairing ------------------------------------------------------------------


def test_qubit_pairing_matches_trace_rule(rng):
    qubit = resolve("qubit")
    for _ in range(50):
        r = random_bloch(rng)
        a0 = rng.uniform(0.2, 0.8)
        a = rng.normal(size=3)
        a *= rng.uniform(0, min(a0, 1 - a0)) / np.linalg.norm(a)
        E = a0 * PAULI["I"] + sum(c * P for c, P in zip(a, ZXY))
        s = StateVector(np.append(r, 1.0))
        e = EffectVector(np.append(2 * a, 2 * a0))
        assert_allclose(pair(e, s, qubit), np.trace(E @ bloch_rho(r)).real, atol=1e-12)


@pytest.mark.parametrize("ref", ["classical:3", "qubit", "qutrit", "gbit", "ball:5", "rebit"])
def test_unit_effect_pairs_to_weight(ref, rng):
    m = resolve(ref)
    for _ in range(20):
        s = m.backend.random_state(rng)
        assert pair(m.unit_effect, s, m) == pytest.approx(s.weight, abs=1e-12)
        half = StateVector(0.5 * s.coords)
        assert pair(m.unit_effect, half, m) == pytest.approx(0.5, abs=1e-12)


def test_pairing_examples():
    ball = resolve("ball:3")
    # (phi, 1) on (psi, 1) gives (1 + phi.psi) / 2
    assert pair(EffectVector([0, 0, 1, 1]), StateVector([0, 0, 1, 1]), ball) == pytest.approx(1.0)
    assert pair(EffectVector([0, 0, 1, 1]), StateVector([0, 0, -1, 1]), ball) == pytest.approx(0.0)
    assert pair(EffectVector([1, 0, 0, 1]), StateVector([0, 0, 1, 1]), ball) == pytest.approx(0.5)
    bit = resolve("bit")
    assert pair(EffectVector([1, 1]), StateVector([1, 1]), bit) == pytest.approx(1.0)


@given(st.lists(finite, min_size=4, max_size=4), st.lists(finite, min_size=4, max_size=4),
       st.lists(finite, min_size=3, max_size=3), finite, finite)
def test_pairing_is_bilinear(e1, e2, r, a, b):
    m = resolve("qubit")
    s = StateVector(r + [1.0])
    E1, E2 = EffectVector(e1), EffectVector(e2)
    lhs = pair(a * E1 + b * E2, s, m)
    assert lhs == pytest.approx(a * pair(E1, s, m) + b * pair(E2, s, m), abs=1e-12)


@given(st.lists(st.floats(0.01, 1), min_size=2, max_size=5), st.integers(0, 2**32 - 1))
def test_pairing_is_affine_in_mixtures(w, seed):
    m = resolve("qutrit")
    gen = np.random.default_rng(seed)
    w = np.array(w) / np.sum(w)
    states = [m.backend.random_state(gen) for _ in w]
    e = EffectVector(gen.uniform(-1, 1, size=m.dim))
    got = pair(e, mix(states, w), m)
    assert got == pytest.approx(sum(wi * pair(e, s, m) for wi, s in zip(w, states)), abs=1e-10)


def test_pair_rejects_wrong_length():
    with pytest.raises(DimensionError):
        pair(EffectVector([0, 0, 2]), StateVector([0, 0, 0, 1]), resolve("qubit"))


def test_mix_examples():
    s = StateVector([0.2, -0.4, 0.1, 1.0])
    assert mix([s], [1]).allclose(s)
    up, down = StateVector([1, 0, 0, 1]), StateVector([-1, 0, 0, 1])
    assert_allclose(mix([up, down], [0.5, 0.5]).coords, [0, 0, 0, 1], atol=1e-15)
    V = [StateVector(v) for v in resolve("gbit").backend.V]
    assert_allclose(mix(V, [0.25] * 4).coords, [0, 0, 1], atol=1e-15)


def test_mix_rejects_bad_weights():
    s = StateVector([1.0, 1.0])
    with pytest.raises(WeightError):
        mix([s, s], [0.7, 0.7])
    with pytest.raises(WeightError):
        mix([s, s], [1.5, -0.5])
    with pytest.raises(WeightError):
        mix([s], [0.5, 0.5])
    with pytest.raises(DimensionError):
        mix([s, StateVector([0, 0, 1])], [0.5, 0.5])


def test_measurement_completeness():
    m = resolve("qubit")
    up, down = EffectVector([1, 0, 0, 1]), EffectVector([-1, 0, 0, 1])
    assert Measurement([up, down]).is_complete(m)
    assert not Measurement([up]).is_complete(m)
    with pytest.raises(ValueError):
        Measurement([])


def test_vectors_are_immutable():
    s = StateVector([0.0, 1.0])
    with pytest.raises(ValueError):
        s.coords[0] = 3.0
    with pytest.raises(DimensionError):
        StateVector([[1.0, 2.0]])


# --- composites ---------------------------------------------------------------


def test_layout_permutation_small():
    # a = (a1, w), b = (b1, w): kron order is (a1b1, a1w, wb1, ww)
    assert layout_permutation(2, 2).tolist() == [1, 2, 0, 3]


def test_two_qubit_product_matches_kron(rng):
    ab = compose([resolve("qubit"), resolve("qubit")])
    assert ab.dim == 16
    for _ in range(10):
        ra, rb = random_bloch(rng), random_bloch(rng)
        rho = np.kron(bloch_rho(ra), bloch_rho(rb))
        gamma = [np.trace(rho @ np.kron(P, Q)).real for P in ZXY for Q in ZXY]
        want = np.concatenate([ra, rb, gamma, [1.0]])
        got = tensor(StateVector(np.append(ra, 1)), StateVector(np.append(rb, 1)), ab)
        assert_allclose(got.coords, want, atol=1e-12)


def test_product_of_pure_states_has_norm_four(rng):
    ab = compose([resolve("qubit"), resolve("qubit")])
    for _ in range(20):
        a = StateVector(np.append(random_bloch(rng, pure=True), 1))
        b = StateVector(np.append(random_bloch(rng, pure=True), 1))
        c = tensor(a, b, ab).coords
        assert np.dot(c, c) == pytest.approx(4.0)
        assert np.sum(c[:-1] ** 2) == pytest.approx(3.0)


@pytest.mark.parametrize("refs", [("qubit", "qutrit"), ("bit", "gbit")])
def test_product_pairing_factorizes(refs, rng):
    a, b = (resolve(r) for r in refs)
    ab = compose([a, b])
    for _ in range(20):
        sa, sb = a.backend.random_state(rng), b.backend.random_state(rng)
        ea = EffectVector(np.append(rng.uniform(-0.3, 0.3, a.dim - 1), 1.0))
        eb = EffectVector(np.append(rng.uniform(-0.3, 0.3, b.dim - 1), 1.0))
        joint = pair(tensor_effects([ea, eb], ab), tensor(sa, sb, ab), ab)
        assert joint == pytest.approx(pair(ea, sa, a) * pair(eb, sb, b), abs=1e-12)


@pytest.mark.parametrize("refs", [("bit", "gbit", "classical:3"), ("qubit", "qutrit", "qubit")])
def test_marginals_recover_factors(refs, rng):
    parts = [resolve(r) for r in refs]
    abc = compose(parts)
    assert abc.dim == int(np.prod([p.dim for p in parts]))
    states = [p.backend.random_state(rng) for p in parts]
    joint = tensor_many(states, abc)
    for i, s in enumerate(states):
        assert_allclose(marginal(joint, abc, i).coords, s.coords, atol=1e-12)


def test_mixed_family_composite_unsupported():
    with pytest.raises(UnsupportedComposite):
        compose([resolve("qubit"), resolve("gbit")])


def test_count_only_composite_has_no_products():
    pair_model = resolve("quaternion-bit-pair")
    q = resolve("quaternion-bit")
    assert pair_model.dim == 28
    assert not pair_model.has_states
    with pytest.raises(UnsupportedComposite):
        tensor(StateVector(np.append(np.zeros(5), 1)), StateVector(np.append(np.zeros(5), 1)), pair_model)
    with pytest.raises(UnsupportedComposite):
        compose([q, q], "local-tomographic")


# --- serialization and validation ---------------------------------------------


@pytest.mark.parametrize("ref", ["classical:4", "qutrit", "ball:5", "gbit", "composite:qubit,qubit",
                                 "rebit-pair"])
def test_json_round_trip(ref):
    m = resolve(ref)
    back = model_from_json(m.to_json())
    assert back.to_dict() == m.to_dict()
    assert validate_model(back) == []


def test_rational_strings_are_parsed():
    data = {"name": "triangle", "kind": "polytope", "dim": 3, "capacity": 3, "pairing_scale": "1/2",
            "geometry": {"vertices": [[1, -1, 1], [-1, 1, 1], ["-1", "-1", "1"]]}}
    m = model_from_dict(json.loads(json.dumps(data)))
    assert m.pairing_scale == 0.5
    assert validate_model(m) == []
    data["geometry"]["vertices"][0] = ["1/3", "-1/3", 1]
    assert model_from_dict(data).geometry["vertices"][0][:2] == pytest.approx([1 / 3, -1 / 3])


@pytest.mark.parametrize("ref", ["classical:1", "classical:6", "quantum:4", "real-quantum:3", "ball:2",
                                 "quaternion-bit", "composite:classical:2,classical:3"])
def test_zoo_models_validate(ref):
    assert validate_model(resolve(ref)) == []


def test_validate_reports_tampered_models():
    q = resolve("qubit")
    v = validate_model(q.replace(unit_coords=(0.0, 0.0, 0.0, 4.0)))
    assert [x.kind for x in v] == ["unit-effect"]
    assert v[0].numbers["max_deviation"] == pytest.approx(1.0)
    v = validate_model(q.replace(dim=5))
    assert v and v[0].kind == "dim"
    v = validate_model(resolve("gbit").replace(pairing_scale=-1.0))
    assert [x.kind for x in v] == ["pairing-scale"]
    bad = resolve("bit").replace(geometry={"vertices": [[2.0, 1.0], [-1.0, 1.0]]})
    assert "vertex-range" in [x.kind for x in validate_model(bad)]


def test_violation_serializes_plain_types():
    v = validate_model(resolve("qubit").replace(unit_coords=(0.0, 0.0, 0.0, 4.0)))[0]
    d = json.loads(json.dumps(v.to_dict()))
    assert set(d) == {"kind", "states", "effects", "numbers", "message"}
    assert d["effects"] == [[0.0, 0.0, 0.0, 4.0]]


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        model_from_dict({"name": "x", "kind": "octonion", "dim": 3, "capacity": 2,
                         "geometry": {}, "pairing_scale": 0.5})


def test_package_doctests():
    import doctest

    import gptaxioms

    failures, _ = doctest.testmod(gptaxioms)
    assert failures == 0

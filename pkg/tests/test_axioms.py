import json
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from gptaxioms import (
    ModelSpec,
    StateVector,
    check_causality,
    check_composition,
    check_conservation,
    check_distinguishability,
    check_k_local_tomography,
    check_pure_product,
    check_reversibility,
    compose,
    emit_report,
    face_of,
    info_capacity,
    mix,
    perfectly_distinguishable,
    resolve,
    resolve_entry,
    run_checks,
)
from gptaxioms.axioms import (
    AXIOM_ORDER,
    check_composition_of,
    conservation_case,
    k_local_span,
    parse_axioms,
    reports_json,
    trial_rng,
)
from gptaxioms.errors import GPTError
from gptaxioms.zoo import AXIOMS, with_axis_group

KNOWN = ["classical:1", "classical:2", "classical:5", "qubit", "qutrit", "gbit", "rebit", "real-quantum:3",
         "ball:2", "ball:3", "ball:4", "ball:5", "quaternion-bit", "rebit-pair", "quaternion-bit-pair",
         "composite:classical:2,classical:3", "composite:qubit,qubit"]


def polygon(k):
    V = [[np.cos(2 * np.pi * i / k), np.sin(2 * np.pi * i / k), 1.0] for i in range(k)]
    return ModelSpec(f"polygon:{k}", "polytope", 3, 2, {"vertices": V}, 0.5)


@pytest.mark.parametrize("ref", KNOWN)
def test_known_answer_cells(ref):
    entry = resolve_entry(ref)
    got = {r.axiom: r.verdict for r in run_checks(entry.spec, AXIOMS, trials=60, seed=1)}
    assert got == entry.expected


# --- distinguishability ------------------------------------------------------------


@pytest.mark.parametrize("k", [5, 6])
def test_polygons_fail_distinguishability(k):
    m = polygon(k)
    rep = check_distinguishability(m, trials=100)
    assert rep.verdict == "fail"
    # replay: the witness state has no distinguishable vertex inside the reported face
    for w in rep.witnesses[:5]:
        rho = StateVector(w.states[0])
        for v in set(w.numbers["face"]) - set(w.numbers["subface"]):
            assert not perfectly_distinguishable([rho, StateVector(m.backend.V[v])], m).feasible


def test_distinguishability_details_for_polytopes():
    rep = check_distinguishability(resolve("classical:3"), trials=500)
    # proper face pairs of the triangle: 3 edges x 2 + whole x 6 = 12
    assert rep.details == {"face_pairs": 12, "checked": 12}


# --- conservation -------------------------------------------------------------------


def test_gbit_witness_replays():
    g = resolve("gbit")
    rep = check_conservation(g, trials=100)
    w = rep.witnesses[0]
    sigma, rho = (StateVector(s) for s in w.states)
    np.testing.assert_allclose(sorted([sigma.coords[0], rho.coords[0]]), [-1, 1])
    again = conservation_case(g, sigma, rho, w.numbers["p"])
    assert again is not None and again.numbers == w.numbers
    # independent recomputation of the numbers
    assert info_capacity(face_of(sigma, g)).capacity == 2
    assert info_capacity(face_of(mix([sigma, rho], [0.5, 0.5]), g)).capacity == 2
    assert perfectly_distinguishable([sigma, rho], g).feasible


def test_conservation_equality_on_orthogonal_qubit_states():
    q = resolve("qubit")
    assert conservation_case(q, StateVector([0, 0, 1, 1]), StateVector([0, 0, -1, 1]), 0.3) is None


# --- reversibility ------------------------------------------------------------------


def test_axis_group_fails_reversibility():
    m = with_axis_group(resolve("ball:3"), 0)
    rep = check_reversibility(m, trials=30)
    assert rep.verdict == "fail"
    assert {w.kind for w in rep.witnesses} <= {"no-transformation", "transport-mismatch"}


@pytest.mark.parametrize("ref", ["qutrit", "ball:5", "gbit", "classical:4", "rebit"])
def test_transport_replays(ref):
    m = resolve(ref)
    G = m.group_access
    b = m.backend
    for t in range(10):
        rng = trial_rng(0, t, "Reversibility")
        phi, psi = b.random_pure(rng), b.random_pure(rng)
        T = G.transport(phi, psi)
        np.testing.assert_allclose(T @ phi.coords, psi.coords, atol=1e-8)
        np.testing.assert_allclose(T.T @ m.unit_effect.coords, m.unit_effect.coords, atol=1e-8)


# --- composition --------------------------------------------------------------------


def test_composition_numbers():
    rep = check_composition_of(resolve("rebit"))
    assert rep.details == {"dim": [10, 9], "capacity": [4, 4], "local_tomography": [9, 10]}
    rep = check_composition_of(resolve("quaternion-bit"))
    assert [w.numbers for w in rep.witnesses] == [{"composite": 28, "product": 36}]
    rep = check_composition_of(resolve("ball:2"))
    assert rep.verdict == "fail"
    rep = check_composition_of(resolve("ball:4"))
    assert rep.verdict == "inconclusive" and rep.message


def test_composition_of_two_gbits_passes():
    g = resolve("gbit")
    rep = check_composition(g, g, compose([g, g]))
    assert rep.verdict == "pass"
    assert rep.details["capacity"] == [4, 4]


def test_k_local_span_numbers():
    rebit, qubit = resolve("rebit"), resolve("qubit")
    assert k_local_span([rebit] * 2, 1) == (9, 10)
    assert k_local_span([rebit] * 3, 1) == (27, 36)
    assert k_local_span([rebit] * 3, 2) == (36, 36)
    assert k_local_span([rebit] * 3, 3) == (36, 36)
    assert k_local_span([qubit] * 3, 1) == (64, 64)
    assert k_local_span([resolve("real-quantum:3"), rebit], 1) == (18, 21)


def test_k_local_checker_rejects_mismatched_composite():
    rebit = resolve("rebit")
    rep = check_k_local_tomography([rebit] * 3, compose([rebit] * 2, "dimension-count-only"), 1)
    assert rep.verdict == "inconclusive"
    with pytest.raises(ValueError):
        check_k_local_tomography([rebit] * 2, compose([rebit] * 2, "dimension-count-only"), 0)


def test_quaternion_k_local_is_inconclusive():
    qb = resolve("quaternion-bit")
    rep = check_k_local_tomography([qb, qb], resolve("quaternion-bit-pair"), 1)
    assert rep.verdict == "inconclusive"


# --- auxiliaries ----------------------------------------------------------------------


@pytest.mark.parametrize("refs", [("qubit", "qubit"), ("qubit", "qutrit"), ("gbit", "bit")])
def test_pure_product(refs):
    a, b = (resolve(r) for r in refs)
    assert check_pure_product(a, b, compose([a, b]), trials=20).verdict == "pass"


@pytest.mark.parametrize("ref", ["gbit", "qutrit", "ball:5", "composite:qubit,qubit"])
def test_causality_passes(ref):
    assert check_causality(resolve(ref), trials=30).verdict == "pass"


def test_causality_fails_with_wrong_unit():
    q = resolve("qubit").replace(unit_coords=(0.0, 0.0, 0.0, 4.0))
    rep = check_causality(q, trials=5)
    assert rep.verdict == "fail"
    assert "unit-effect" in {w.kind for w in rep.witnesses}


# --- driver, determinism, reports ----------------------------------------------------------


def test_parse_axioms():
    assert parse_axioms("all") == list(AXIOM_ORDER[:4])
    assert parse_axioms(" Conservation, reversibility") == ["Conservation", "Reversibility"]
    with pytest.raises(ValueError):
        parse_axioms("conservation,telepathy")


def test_bad_trials_and_seed():
    g = resolve("gbit")
    with pytest.raises(ValueError):
        check_conservation(g, trials=0)
    with pytest.raises(ValueError):
        check_conservation(g, seed=-1)


def test_same_seed_same_report():
    m = resolve("qutrit")
    a = reports_json(run_checks(m, AXIOMS, trials=40, seed=3))
    b = reports_json(run_checks(m, AXIOMS, trials=40, seed=3))
    assert a == b


def test_trial_streams_are_order_independent():
    # each trial draws from its own (seed, trial, axiom) stream, so threads cannot change results
    keys = [(7, t, "Conservation") for t in range(32)]
    serial = [trial_rng(*k).random(4) for k in keys]
    with ThreadPoolExecutor(4) as pool:
        threaded = list(pool.map(lambda k: trial_rng(*k).random(4), reversed(keys)))
    np.testing.assert_array_equal(np.array(serial), np.array(threaded[::-1]))
    assert not np.allclose(trial_rng(7, 0, "Conservation").random(4), trial_rng(7, 0, "Causality").random(4))


def test_report_schema_and_order(tmp_path):
    reports = run_checks(resolve("gbit"), ["Reversibility", "Conservation"], trials=20)
    reports += run_checks(resolve("bit"), ["Conservation"], trials=20)
    path = tmp_path / "r.json"
    emit_report(reports, path)
    data = json.loads(path.read_text())
    assert [(d["model"], d["axiom"]) for d in data] == [
        ("classical:2", "Conservation"), ("gbit", "Conservation"), ("gbit", "Reversibility")]
    for d in data:
        assert {"model", "axiom", "verdict", "trials", "seed", "witnesses"} <= set(d)
        for w in d["witnesses"]:
            assert set(w) == {"kind", "states", "effects", "numbers", "message"}
    assert path.read_text().endswith("\n")


def test_empty_report(tmp_path):
    path = tmp_path / "empty.json"
    emit_report([], path)
    assert json.loads(path.read_text()) == []


def test_unwritable_report(tmp_path):
    with pytest.raises(GPTError):
        emit_report([], tmp_path / "missing" / "r.json")

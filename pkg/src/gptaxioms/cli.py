"""Command-line front end.

Exit codes: 0 when every check passes, 2 when a check fails or is
inconclusive, 1 for usage errors, unreadable models and numerical failures.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import bloch
from .axioms import (
    check_k_local_tomography,
    emit_report,
    parse_axioms,
    reports_json,
    run_checks,
)
from .capacity import info_capacity
from .convex import perfectly_distinguishable
from .core import SCHEMA_VERSION, StateVector
from .errors import GPTError, Inconclusive, NumericalError, UnsupportedComposite
from .geometry import face_lattice, verify_dimension_law, verify_projective_axioms
from .zoo import compose, manifest, resolve

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gptaxioms", description="Check probabilistic-theory axioms on concrete models.")
    p.add_argument("--version", action="version", version=SCHEMA_VERSION)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ml = sub.add_parser("model", help="model zoo commands")
    ml.add_argument("action", choices=["list"])
    sub.add_parser("model-list", help="print the zoo manifest")

    def common(q, report=True):
        q.add_argument("--trials", type=_positive, default=200)
        q.add_argument("--seed", type=_seed, default=0)
        if report:
            q.add_argument("--report", help="write the JSON report here")

    c = sub.add_parser("check", help="run axiom checkers")
    c.add_argument("--model", action="append", required=True, help="model reference (repeatable)")
    c.add_argument("--axioms", default="all", help="'all' or a comma-separated list")
    common(c)

    cap = sub.add_parser("capacity", help="information capacity of a model")
    cap.add_argument("--model", required=True)
    cap.add_argument("--seed", type=_seed, default=0)

    d = sub.add_parser("distinguish", help="perfect distinguishability of given states")
    d.add_argument("--model", required=True)
    d.add_argument("--states", required=True,
                   help="JSON list of coordinate vectors, or @file.json")

    f = sub.add_parser("facelattice", help="projective-space checks on the face lattice")
    f.add_argument("--model", required=True)
    f.add_argument("--dim-cap", type=int, default=None)
    f.add_argument("--frames", type=int, default=500)
    common(f)

    t = sub.add_parser("derive-two-qubit", help="reproduce the two-qubit argument for d2")
    t.add_argument("--samples", type=_positive, default=1000)
    t.add_argument("--seed", type=_seed, default=0)

    k = sub.add_parser("tomography", help="k-local tomography rank test")
    k.add_argument("--party", action="append", required=True, help="party model (repeatable)")
    k.add_argument("--composite", default=None, help="composite model (default: built from the parties)")
    k.add_argument("--k", type=_positive, required=True)
    k.add_argument("--report")
    return p


def _verdict_code(reports) -> int:
    return EXIT_OK if all(r.verdict == "pass" for r in reports) else EXIT_FAIL


def _write(reports, path):
    if path:
        emit_report(reports, path)
    else:
        sys.stdout.write(reports_json(reports))


def _summary(reports):
    for r in reports:
        extra = f" ({len(r.witnesses)} witnesses)" if r.witnesses else ""
        extra += f" [{r.message}]" if r.message else ""
        print(f"{r.model:40s} {r.axiom:20s} {r.verdict}{extra}", file=sys.stderr)


def _load_states(text: str):
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    data = json.loads(text)
    return [StateVector(v) for v in data]


def _cmd_check(args) -> int:
    axioms = parse_axioms(args.axioms)
    models = [resolve(r) for r in args.model]
    reports = []
    for m in models:
        reports += run_checks(m, axioms, args.trials, args.seed)
    _summary(reports)
    _write(reports, args.report)
    return _verdict_code(reports)


def _cmd_capacity(args) -> int:
    m = resolve(args.model)
    out = {"model": m.name, "declared": m.capacity_declared}
    try:
        res = info_capacity(m, seed=args.seed)
    except Inconclusive as exc:
        out.update(capacity=None, inconclusive=True, lower_bound=exc.best, message=str(exc))
        print(json.dumps(out, indent=2))
        return EXIT_FAIL
    out.update(capacity=res.capacity, method=res.method,
               witness=[s.tolist() for s in res.witness_set], inconclusive=False)
    print(json.dumps(out, indent=2))
    return EXIT_OK if res.capacity == m.capacity_declared else EXIT_FAIL


def _cmd_distinguish(args) -> int:
    m = resolve(args.model)
    states = _load_states(args.states)
    w = perfectly_distinguishable(states, m)
    out = {"model": m.name, "feasible": w.feasible, "deviation": w.deviation, "method": w.method}
    if w.feasible:
        out["effects"] = [e.tolist() for e in w.effects]
    else:
        out["dual_certificate"] = [float(x) for x in w.dual_certificate]
    print(json.dumps(out, indent=2))
    return EXIT_OK if w.feasible else EXIT_FAIL


def _cmd_facelattice(args) -> int:
    m = resolve(args.model)
    lat = face_lattice(m, dim_cap=args.dim_cap, frames=args.frames, seed=args.seed)
    reports = [
        verify_dimension_law(m, args.trials, args.seed, lattice=lat),
        verify_projective_axioms(m, args.trials, args.seed, lattice=lat),
    ]
    _summary(reports)
    _write(reports, args.report)
    return _verdict_code(reports)


def _cmd_derive(args) -> int:
    ok = True
    for name, value, expected in bloch.two_qubit_identities():
        good = abs(value - expected) <= 1e-12
        ok &= good
        print(f"{'ok ' if good else 'FAIL'} {name:48s} {value: .15g}")
    rng = np.random.default_rng(args.seed)
    worst = max(abs(bloch.pure_two_qubit(bloch.haar_vector(rng)).norm_sq - 4) for _ in range(args.samples))
    good = worst <= 1e-9
    ok &= good
    print(f"{'ok ' if good else 'FAIL'} |psi|^2 = 4 on {args.samples} Haar states{'':18s} max error {worst:.3g}")
    for d in (3, 5, 7):
        total = bloch.forced_total(d)
        print(f"     d2 = {d}: constraints force sum |gamma_theta|^2 = {total}"
              f" ({'consistent' if total == 3 else 'contradiction'})")
    d2 = bloch.derive_d2()
    ok &= d2 == 3
    print(f"d2 = {d2}")
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_tomography(args) -> int:
    parties = [resolve(r) for r in args.party]
    if args.composite:
        composite = resolve(args.composite)
    else:
        try:
            composite = compose(parties, "local-tomographic")
        except UnsupportedComposite:
            composite = compose(parties, "dimension-count-only")
    rep = check_k_local_tomography(parties, composite, args.k)
    _summary([rep])
    _write([rep], args.report)
    return _verdict_code([rep])


COMMANDS = {
    "check": _cmd_check,
    "capacity": _cmd_capacity,
    "distinguish": _cmd_distinguish,
    "facelattice": _cmd_facelattice,
    "derive-two-qubit": _cmd_derive,
    "tomography": _cmd_tomography,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command in ("model", "model-list"):
            print(json.dumps(manifest(), indent=2))
            return EXIT_OK
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"gptaxioms: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (GPTError, ValueError, OSError, NumericalError) as exc:
        print(f"gptaxioms: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())

"""Command-line surface: analyze, certify, verify, simulate, uniteq, suite.

Exit codes: 0 success, 2 input error, 3 clean-but-empty search, 4 budget
exhaustion.  Every command is deterministic given its flags and seed, and
--json output is stable under re-run.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .ideals import EngineUnavailableError
from .mixing import (
    BudgetExceededError,
    CertificateError,
    SearchBudgets,
    enumerate_unit_solutions,
    ess_bound_exponent,
    evaluation_shape_search,
    frobenius_certificate,
    rational_dual_certificate,
    rational_dual_order2_search,
    shape_search,
    UnitEquationProblem,
    verify_certificate,
)
from .numfield import NumberField
from .presentation import (
    PresentationError,
    certificate_from_dict,
    certificate_to_dict,
    load_certificate,
    load_system,
)
from .ring import DomainError
from .simulate import (
    CylinderSet,
    WindowError,
    correlation_estimate,
    correlation_exact,
    cylinder_measure,
)
from .systems import (
    CharPModule,
    EvaluationModule,
    RationalDualModule,
    UnsupportedOperationError,
    find_nonmixing_element,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_EMPTY = 3
EXIT_BUDGET = 4


def _emit(args, payload: dict, lines):
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2, default=str))
    else:
        for line in lines:
            print(line)


def _default_threads() -> int:
    return int(os.environ.get("MIXLAB_THREADS", "1"))


# -- analyze -----------------------------------------------------------------

def cmd_analyze(args) -> int:
    loaded = load_system(args.file)
    system = loaded.system
    m = system.module
    payload = {"name": loaded.name, "system_hash": loaded.hash}
    lines = [f"system: {loaded.name or args.file}", f"hash: {loaded.hash}"]
    if isinstance(m, CharPModule):
        p = m.ideal.characteristic
        trivial = m.ideal.constant_in_ideal()
        payload.update(characteristic=p, trivial_quotient=trivial,
                       connected="no (characteristic p: additive torsion)")
        lines.append(f"characteristic: {p}")
        lines.append("quotient: trivial (unit ideal)" if trivial else "quotient: nontrivial")
        if trivial:
            lines.append("warning: trivial quotient")
            element = None
        else:
            box = [(-args.box, args.box)] * m.ideal.d
            element = find_nonmixing_element(system, box)
        payload["nonmixing_element"] = list(element) if element else None
        lines.append(
            f"non-mixing element: {element}" if element
            else f"non-mixing element: none in box |gamma| <= {args.box}"
        )
        lines.append("connectedness: disconnected (characteristic p)")
    elif isinstance(m, EvaluationModule):
        d = len(m.assignment)
        element = find_nonmixing_element(system, [(-args.box, args.box)] * d)
        payload.update(characteristic=0, trivial_quotient=False,
                       nonmixing_element=list(element) if element else None,
                       connected="yes (characteristic 0, contract)")
        lines.append("characteristic: 0 (evaluation presentation)")
        lines.append(
            f"non-mixing element: {element}" if element
            else f"non-mixing element: none in box |gamma| <= {args.box}"
        )
        lines.append("connectedness: connected (input contract)")
    elif isinstance(m, RationalDualModule):
        payload.update(characteristic=0, trivial_quotient=False,
                       nonmixing_element=None, connected="yes")
        lines.append("module: rational dual (Q with multiplication action)")
        lines.append("non-mixing element: none (multiplication on Q is injective)")
    _emit(args, payload, lines)
    return EXIT_OK


# -- certify -----------------------------------------------------------------

def _write_certificate(outdir: Path, name: str, index: int, cert_dict: dict) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"{name or 'system'}-order{cert_dict['order']}-{index}.cert.json"
    path.write_text(json.dumps(cert_dict, sort_keys=True, indent=2) + "\n")
    return path


def cmd_certify(args) -> int:
    if args.order < 2:
        raise PresentationError("--order must be at least 2")
    loaded = load_system(args.file)
    system = loaded.system
    m = system.module
    dilations = tuple(int(x) for x in args.dilations.split(","))
    certs = []
    region = None
    if isinstance(m, CharPModule):
        for g in m.ideal.generators:
            if len(g.support()) == args.order:
                try:
                    certs.append(frobenius_certificate(system, g, kmax=args.kmax))
                except CertificateError:
                    pass
        if certs and not args.force_search:
            # A prime-power family already certifies this order for every
            # dilation; the exhaustive search would only add evidence-grade
            # duplicates.
            region = {"skipped": "proof-grade certificate found"}
        else:
            d = m.ideal.d
            outcome = shape_search(
                system, args.order,
                [(0, args.box)] * d, [(0, args.window)] * d, dilations,
            )
            region = outcome.region
            for c in outcome.certificates:
                if not any(c.shape == c2.shape and c.coefficients == c2.coefficients
                           for c2 in certs):
                    certs.append(c)
    elif isinstance(m, EvaluationModule):
        d = len(m.assignment)
        outcome = evaluation_shape_search(
            system, args.order, [(-args.box, args.box)] * d,
            dilations=tuple(range(1, args.order + 2)),
        )
        region = outcome.region
        certs = outcome.certificates
    elif isinstance(m, RationalDualModule):
        if args.order == 3:
            certs = [rational_dual_certificate(system)]
        elif args.order == 2:
            outcome = rational_dual_order2_search(system)
            region = outcome.region
        else:
            region = {"note": "non-mixing on 3 sets already implies all higher orders"}
    paths = []
    for i, cert in enumerate(certs):
        cert_dict = certificate_to_dict(cert, sys_hash=loaded.hash)
        paths.append(str(_write_certificate(Path(args.out), loaded.name, i, cert_dict)))
    payload = {
        "certificates": paths,
        "count": len(certs),
        "region": region,
        "grades": sorted({c.grade for c in certs}),
    }
    lines = []
    if certs:
        for p_, c in zip(paths, certs):
            lines.append(f"certificate (order {c.order}, {c.grade}): {p_}")
    else:
        lines.append("no certificates found")
        if region:
            lines.append(f"exhausted region: {json.dumps(region, sort_keys=True)}")
    _emit(args, payload, lines)
    return EXIT_OK if certs else EXIT_EMPTY


# -- verify ------------------------------------------------------------------

def cmd_verify(args) -> int:
    loaded = load_system(args.presentation)
    data = load_certificate(args.certificate)
    stored_hash = data.get("system_hash", "")
    if stored_hash and stored_hash != loaded.hash:
        raise PresentationError(
            f"system hash mismatch: certificate was issued for {stored_hash[:12]}..., "
            f"presentation hashes to {loaded.hash[:12]}..."
        )
    cert = certificate_from_dict(data, loaded.system)
    report = verify_certificate(loaded.system, cert)
    payload = {
        "ok": report.ok,
        "first_failure": report.first_failure,
        "lines": report.lines,
    }
    lines = report.lines + [("PASS" if report.ok else
                            f"FAIL at dilation {report.first_failure}")]
    _emit(args, payload, lines)
    return EXIT_OK if report.ok else 1


# -- simulate ----------------------------------------------------------------

def _parse_sets(text: str):
    raw = json.loads(text)
    sets = []
    for block in raw:
        pins = {}
        for key, v in block.items():
            site = tuple(int(x) for x in key.split(","))
            pins[site] = int(v)
        sets.append(CylinderSet.make(pins))
    return sets


def cmd_simulate(args) -> int:
    loaded = load_system(args.file)
    system = loaded.system
    if not isinstance(system.module, CharPModule):
        raise UnsupportedOperationError(
            "simulate requires a characteristic-p presentation"
        )
    d = system.module.ideal.d
    sets = _parse_sets(args.sets)
    shifts = [tuple(int(x) for x in s) for s in json.loads(args.shifts)]
    window = [(0, args.window - 1)] * d
    exact = correlation_exact(system, sets, shifts, window)
    product_measure = Fraction(1)
    measures = []
    for cyl in sets:
        res = cylinder_measure(system, cyl, window)
        measures.append(res)
        product_measure *= res.value
    payload = {
        "exact": str(exact),
        "product_measure": str(product_measure),
        "window": args.window,
        "measures": [str(r.value) for r in measures],
        "stable": all(r.stable for r in measures),
    }
    lines = [
        f"exact correlation:  {exact}",
        f"product measure:    {product_measure}",
    ]
    if not all(r.stable for r in measures):
        lines.append("warning: cylinder measures did not stabilize; enlarge the window")
    if args.samples:
        est = correlation_estimate(
            system, sets, shifts, window, args.samples, args.seed,
            threads=args.threads,
        )
        payload.update(estimate=est.estimate, stderr=est.stderr,
                       samples=est.samples, seed=est.seed)
        lines.append(
            f"monte carlo:        {est.estimate:.6f} +/- {est.stderr:.6f} "
            f"(N={est.samples}, seed={est.seed})"
        )
    _emit(args, payload, lines)
    return EXIT_OK


# -- uniteq ------------------------------------------------------------------

def _parse_rationals(text: str):
    return [Fraction(x) for x in text.split(",")] if text else []


def cmd_uniteq(args) -> int:
    field = NumberField(_parse_rationals(args.modulus))
    coeffs = _parse_rationals(args.coeffs)
    gens = _parse_rationals(args.gens)
    problem = UnitEquationProblem.make(field, coeffs, gens, args.box, budget=args.budget)
    result = enumerate_unit_solutions(problem)
    exponent = result.bound_exponent
    payload = {
        "count": result.count,
        "bound_exponent": str(exponent),
        "bound_ok": result.bound_ok,
        "solutions": [
            {
                "exponents": [list(e) for e in sol.exponents],
                "values": [
                    str(Fraction(v.coeffs[0])) if field.degree == 1
                    else [str(c) for c in v.coeffs]
                    for v in sol.values
                ],
            }
            for sol in result.solutions
        ],
    }
    lines = [f"solutions: {result.count}"]
    for sol in result.solutions:
        if field.degree == 1:
            vals = ", ".join(str(Fraction(v.coeffs[0])) for v in sol.values)
        else:
            vals = "; ".join(str([str(c) for c in v.coeffs]) for v in sol.values)
        lines.append(f"  ({vals})  exponents {[list(e) for e in sol.exponents]}")
    lines.append(f"bound exponent (log form): {exponent}")
    lines.append(f"bound assertion: {'pass' if result.bound_ok else 'FAIL'}")
    _emit(args, payload, lines)
    return EXIT_OK if result.count else EXIT_EMPTY


# -- suite -------------------------------------------------------------------

def cmd_suite(args) -> int:
    from .acceptance import run_all

    results = run_all()
    payload = {"criteria": []}
    ok = True
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} criterion {res.number}: {res.name} ({res.detail})")
        payload["criteria"].append(
            {"number": res.number, "name": res.name,
             "passed": res.passed, "detail": res.detail}
        )
        ok = ok and res.passed
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    return EXIT_OK if ok else 1


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixlab",
        description="workbench for mixing questions on algebraic dynamical systems",
    )
    parser.add_argument("--threads", type=int, default=_default_threads(),
                        help="worker threads for parallel sections")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="quotient, mixing-element and contract checks")
    p.add_argument("file")
    p.add_argument("--box", type=int, default=5)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify", help="search for non-mixing certificates")
    p.add_argument("file")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--box", type=int, default=4)
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--dilations", default="1,2,4,8")
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--force-search", action="store_true",
                   help="run the exhaustive search even after a proof-grade find")
    p.add_argument("--out", default=".")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="replay a serialized certificate")
    p.add_argument("certificate")
    p.add_argument("presentation")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="exact and Monte Carlo cylinder correlations")
    p.add_argument("file")
    p.add_argument("--sets", required=True,
                   help='JSON list of pin maps, e.g. \'[{"0,0": 0}]\'')
    p.add_argument("--shifts", required=True, help="JSON list of shift vectors")
    p.add_argument("--window", type=int, default=7)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("uniteq", help="desk-scale unit-equation enumeration")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--gens", default="")
    p.add_argument("--box", type=int, default=5)
    p.add_argument("--modulus", default="-1,1",
                   help="monic modulus coefficients, low to high (default: Q)")
    p.add_argument("--budget", type=int, default=500_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_uniteq)

    p = sub.add_parser("suite", help="run the acceptance suite")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code not in (0, None) else 0
    # propagate --threads to subcommands that use it
    if not hasattr(args, "threads") or args.threads is None:
        args.threads = _default_threads()
    try:
        return args.func(args)
    except BudgetExceededError as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        print(f"region: {json.dumps(e.region, sort_keys=True)}", file=sys.stderr)
        return EXIT_BUDGET
    except (PresentationError, DomainError, WindowError, CertificateError,
            EngineUnavailableError, UnsupportedOperationError,
            ValueError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

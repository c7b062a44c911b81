"""kellerkit command line.

Exit codes: 0 success / INVERTIBLE, 1 usage or parse error, 2 NOT_KELLER,
3 JC_ALERT, 4 a complex failed verification, 5 corpus deviation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .autgen import random_tame
from .complexes import (RingSpec, complex_to_json, generic_rank_profile,
                        koszul_complex, load_complex, reduce_complex_mod_ideal, verify_complex)
from .groebner import buchberger, elimination_basis
from .inversion import case_classify, invert_map
from .keller import PolyMap, algebraic_independence, keller_check
from .polyring import UVS, VarSet, format_rational, parse_poly
from .presentation import XYUVS, extension_degree, find_good_lambda, is_primitive, minimal_polynomial
from .ringchecks import (Status, decide_invertible, is_normal_presentation,
                         jacobian_ideal, krull_dimension_presentation)

DEFAULT_SEED = 0
EXIT_CODES = {Status.INVERTIBLE: 0, Status.NOT_KELLER: 2, Status.JC_ALERT: 3,
              Status.NOT_INVERTIBLE_NOT_NORMAL: 2}


class UsageError(Exception):
    pass


# -- report sections --------------------------------------------------------

def _keller_json(rep):
    return {
        "jacobian": str(rep.jacobian),
        "is_keller": rep.is_keller,
        "jacobian_constant": None if rep.jacobian_constant is None else format_rational(rep.jacobian_constant),
    }


def _presentation_json(m, pres, seed):
    deg = extension_degree(m, seed)
    return {
        "lambda": format_rational(pres.lam),
        "g": str(pres.g),
        "s_degree": pres.s_degree,
        "extension_degree": deg.extension_degree,
        "primitive": pres.s_degree == deg.extension_degree,
        "sample_points": [list(p) for p in deg.sample_points],
        "agreement": deg.agreement,
    }


def _normality_json(rep):
    return {
        "jacobian_ideal": [str(p) for p in rep.jacobian_ideal_gens],
        "smooth": rep.smooth,
        "singular_locus_dimension": rep.singular_locus_dimension,
        "normal": rep.normal,
    }


def _inverse_json(inv):
    if not inv.found:
        return {"found": False, "P": None, "Q": None}
    m = inv.as_map()
    return {"found": True, "P": str(m.P), "Q": str(m.Q)}


def _complexes_json(pres):
    # Koszul complex on (u, v, s) pushed down to K[u,v,s]/(g)
    ring = RingSpec(UVS)
    reduced = reduce_complex_mod_ideal(koszul_complex(list(UVS.gens()), ring), [pres.g])
    profile = generic_rank_profile(reduced)
    return {
        "koszul_uvs_mod_g": {
            "ranks": list(reduced.ranks),
            "is_complex": verify_complex(reduced),
            "map_ranks": list(profile.map_ranks),
            "generic_defects": list(profile.defects),
        }
    }


def _timed(timings, name, fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    timings[name] = round((time.perf_counter() - t0) * 1000, 3)
    return out


def check_report(m: PolyMap, seed: int = DEFAULT_SEED, timings: dict | None = None) -> dict:
    timings = {} if timings is None else timings
    verdict = _timed(timings, "verdict", decide_invertible, m, seed)
    report = {
        "tool_version": __version__,
        "command": "check",
        "input": {"P": str(m.P), "Q": str(m.Q), "seed": seed},
        "keller": _keller_json(verdict.keller),
        "presentation": None,
        "normality": None,
        "dimension": None,
        "cases": None,
        "inverse": None,
        "complexes": None,
    }
    pres = verdict.presentation
    if pres is not None:
        report["presentation"] = _presentation_json(m, pres, seed)
        report["normality"] = _normality_json(verdict.normality)
        report["dimension"] = {"krull_dimension": verdict.krull_dimension}
        cases = _timed(timings, "cases", case_classify, m, pres)
        report["cases"] = {"case1": cases.case1, "case2": cases.case2}
        report["complexes"] = _timed(timings, "complexes", _complexes_json, pres)
    if verdict.inverse is not None:
        report["inverse"] = {"found": True, "P": str(verdict.inverse.P), "Q": str(verdict.inverse.Q)}
    report["verdict"] = {
        "status": verdict.status.value,
        "justification": list(verdict.justification),
        "notes": list(verdict.notes),
    }
    return report


def verification_bundle(m: PolyMap, verdict) -> dict:
    """Groebner certificates behind a presentation and its normality test."""
    pres = verdict.presentation
    x, y, u, v, s = XYUVS.gens()
    gens = [u - m.P.embed(XYUVS), v - m.Q.embed(XYUVS), s - x - pres.lam * y]
    elim, _ = elimination_basis(gens, ("x", "y"))
    jac = buchberger(jacobian_ideal(pres.g))
    return {
        "tool_version": __version__,
        "input": {"P": str(m.P), "Q": str(m.Q)},
        "lambda": format_rational(pres.lam),
        "elimination_basis": {"vars": list(elim.varset.names), "order": str(elim.order),
                              "generators": [str(p) for p in elim.generators]},
        "jacobian_ideal_basis": {"vars": list(jac.varset.names), "order": str(jac.order),
                                 "generators": [str(p) for p in jac.generators]},
    }


def _corpus_item(args):
    seed, n_moves, max_deg, sample_seed = args
    tame = random_tame(seed, n_moves, max_deg)
    m = tame.forward
    report = check_report(m, sample_seed)
    pres1 = minimal_polynomial(m, 1)
    checks = {
        "keller": report["keller"]["is_keller"],
        "jacobian_constant": report["keller"]["jacobian_constant"] == format_rational(tame.jacobian_constant()),
        "g_linear": pres1.s_degree == 1,
        "primitive_at_1": is_primitive(m, 1, sample_seed),
        "krull_dimension_2": krull_dimension_presentation(pres1) == 2,
        "normal": bool(report["normality"] and report["normality"]["normal"]),
        "invertible": report["verdict"]["status"] == Status.INVERTIBLE.value,
        "inverse_matches_oracle": report["inverse"] is not None
        and [report["inverse"]["P"], report["inverse"]["Q"]] == [str(tame.inverse.P), str(tame.inverse.Q)],
    }
    return seed, report, checks


def _worker_count() -> int:
    workers = os.cpu_count() or 1
    cap = os.environ.get("KELLERKIT_THREADS")
    if cap:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError:
            raise UsageError(f"KELLERKIT_THREADS must be an integer, got {cap!r}") from None
    return workers


def corpus_report(first: int, last: int, n_moves: int = 3, max_deg: int = 6,
                  seed: int = DEFAULT_SEED) -> tuple[dict, bool]:
    jobs = [(s, n_moves, max_deg, seed) for s in range(first, last + 1)]
    workers = min(_worker_count(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_corpus_item, jobs))
    else:
        results = [_corpus_item(j) for j in jobs]
    deviations = [{"seed": s, "failed": [k for k, ok in checks.items() if not ok]}
                  for s, _, checks in results if not all(checks.values())]
    summary = {
        "tool_version": __version__,
        "command": "corpus",
        "input": {"range": [first, last], "n_moves": n_moves, "max_deg": max_deg, "seed": seed},
        "total": len(results),
        "invertible": sum(c["invertible"] for _, _, c in results),
        "g_linear": sum(c["g_linear"] for _, _, c in results),
        "deviations": deviations,
    }
    if len(results) == 1:
        summary["item"] = results[0][1]
    return summary, not deviations


# -- argument handling ------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.replace("−", "-"))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _seed_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            first, last = int(a), int(b)
        else:
            first = last = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed range {text!r}; use A..B or N") from None
    if last < first:
        raise argparse.ArgumentTypeError(f"empty seed range {text!r}")
    return first, last


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"seed for fiber sampling (default {DEFAULT_SEED})")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", help="compact JSON (default)")
    fmt.add_argument("--pretty", dest="pretty", action="store_true", help="indented JSON")
    common.set_defaults(pretty=False)
    common.add_argument("--timings", action="store_true", help="add per-stage timings in milliseconds")

    lam = argparse.ArgumentParser(add_help=False)
    lam.add_argument("--lambda", dest="lam", type=_rational, default=None,
                     help="use x + LAMBDA*y as primitive element (default 1)")
    lam.add_argument("--find-lambda", action="store_true", help="search for a good lambda")

    pq = argparse.ArgumentParser(add_help=False)
    pq.add_argument("P", help="image of x, e.g. 'x'")
    pq.add_argument("Q", help="image of y, e.g. 'y+x^2'")

    parser = _Parser(prog="kellerkit", description="Invertibility of Keller maps of the plane.")
    parser.add_argument("--version", action="version", version=f"kellerkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("check", parents=[common, pq], help="full pipeline and verdict").add_argument(
        "--bundle", metavar="FILE", help="write Groebner certificates to FILE")
    sub.add_parser("present", parents=[common, pq, lam], help="minimal polynomial g")
    sub.add_parser("normality", parents=[common, pq, lam], help="singular locus and normality of K[u,v,s]/(g)")
    sub.add_parser("dim", parents=[common, pq, lam], help="Krull dimension of K[u,v,s]/(g)")
    sub.add_parser("invert", parents=[common, pq], help="explicit inverse by elimination")

    cx = sub.add_parser("complex", help="free complexes over K[u,v,s] and quotients")
    cxs = cx.add_subparsers(dest="complex_command", required=True, parser_class=_Parser)
    k = cxs.add_parser("koszul", parents=[common], help="Koszul complex on 1-3 elements")
    k.add_argument("elements", nargs="+")
    k.add_argument("--vars", default="u,v,s", help="comma-separated ring variables (default u,v,s)")
    r = cxs.add_parser("reduce", parents=[common], help="reduce a complex modulo an ideal")
    r.add_argument("file")
    r.add_argument("--mod", action="append", required=True, metavar="POLY", help="ideal generator (repeatable)")
    cxs.add_parser("verify", parents=[common], help="check that consecutive maps compose to zero").add_argument("file")
    cxs.add_parser("ranks", parents=[common], help="generic ranks and homology defects").add_argument("file")

    c = sub.add_parser("corpus", parents=[common], help="run seeded tame automorphisms through the pipeline")
    c.add_argument("range", type=_seed_range, help="seed range A..B, or a single seed")
    c.add_argument("--n-moves", type=int, default=3)
    c.add_argument("--max-deg", type=int, default=6)
    return parser


def _emit(report: dict, args) -> None:
    if args.pretty:
        text = json.dumps(report, indent=2)
    else:
        text = json.dumps(report, separators=(",", ":"))
    sys.stdout.write(text + "\n")


def _map_from_args(args) -> PolyMap:
    return PolyMap.parse(args.P, args.Q)


def _presentation_from_args(m: PolyMap, args):
    if args.find_lambda:
        if args.lam is not None:
            raise UsageError("--lambda and --find-lambda are mutually exclusive")
        lam = find_good_lambda(m, args.seed)
    else:
        lam = args.lam if args.lam is not None else Fraction(1)
    if not algebraic_independence(m):
        raise UsageError("P and Q are algebraically dependent (zero Jacobian); no presentation exists")
    return minimal_polynomial(m, lam)


def _header(command, m, args):
    return {"tool_version": __version__, "command": command,
            "input": {"P": str(m.P), "Q": str(m.Q), "seed": args.seed}}


def run(args) -> int:
    timings: dict = {}
    cmd = args.command
    if cmd == "check":
        m = _map_from_args(args)
        report = check_report(m, args.seed, timings)
        status = Status(report["verdict"]["status"])
        if args.bundle and report["presentation"] is not None:
            verdict = decide_invertible(m, args.seed)
            with open(args.bundle, "w", encoding="utf-8") as fh:
                json.dump(verification_bundle(m, verdict), fh, indent=2)
                fh.write("\n")
        code = EXIT_CODES[status]
    elif cmd in ("present", "normality", "dim"):
        m = _map_from_args(args)
        pres = _timed(timings, "presentation", _presentation_from_args, m, args)
        report = _header(cmd, m, args)
        report["presentation"] = _presentation_json(m, pres, args.seed)
        if cmd == "normality":
            report["normality"] = _normality_json(_timed(timings, "normality", is_normal_presentation, pres))
        if cmd == "dim":
            norm = is_normal_presentation(pres)
            report["dimension"] = {"krull_dimension": krull_dimension_presentation(pres),
                                   "singular_locus_dimension": norm.singular_locus_dimension}
        code = 0
    elif cmd == "invert":
        m = _map_from_args(args)
        report = _header(cmd, m, args)
        report["keller"] = _keller_json(keller_check(m))
        report["inverse"] = _inverse_json(_timed(timings, "inverse", invert_map, m))
        code = 0
    elif cmd == "complex":
        report, code = _run_complex(args)
    elif cmd == "corpus":
        first, last = args.range
        report, ok = corpus_report(first, last, args.n_moves, args.max_deg, args.seed)
        code = 0 if ok else 5
    else:  # pragma: no cover - argparse rejects unknown commands
        raise UsageError(f"unknown command {cmd}")
    if args.timings:
        report["timings_ms"] = timings
    _emit(report, args)
    return code


def _run_complex(args):
    sub = args.complex_command
    if sub == "koszul":
        varset = VarSet(tuple(v.strip() for v in args.vars.split(",")))
        elems = [parse_poly(e, varset) for e in args.elements]
        if not 1 <= len(elems) <= 3:
            raise UsageError("koszul takes between 1 and 3 elements")
        return complex_to_json(koszul_complex(elems, RingSpec(varset))), 0
    c = load_complex(args.file)
    if sub == "reduce":
        ideal = [parse_poly(t, c.ring.varset) for t in args.mod]
        return complex_to_json(reduce_complex_mod_ideal(c, ideal)), 0
    if sub == "verify":
        ok = verify_complex(c)
        return {"is_complex": ok, "ranks": list(c.ranks)}, 0 if ok else 4
    profile = generic_rank_profile(c)
    return {"ranks": list(c.ranks), "map_ranks": list(profile.map_ranks),
            "generic_defects": list(profile.defects)}, 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except (ValueError, UsageError, OSError) as exc:
        print(f"kellerkit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line interface: ``lielat <command> <lattice> [options]``.

stdout carries exactly one JSON document; diagnostics go to stderr.
Exit status: 0 on a completed computation, 2 on invalid input,
3 when the outcome is inconclusive (Unknown verdict or budget exhausted).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import formats as fmt
from .errors import BudgetError, InternalError, LieLatError, NotAnAutomorphism
from .lattice import (
    derivations,
    is_powerful,
    is_semisimple,
    killing_matrix,
    series_profile,
    simplicity_report,
    validate,
)
from .oracle import classify_mod_pk, enum_subalgebras, exhaustive_stability_check
from .padic import smith_p
from .stability import (
    automorphism_check,
    iso_index_check,
    search_unstable_witness,
    serre_verdict,
    stability_certificate,
)
from .sublattice import Sublattice, gram, index
from .uniform import GroupElement, bch_mul, group_index_check

log = logging.getLogger("lielat")

EXIT_OK, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 2, 3
DEFAULT_BUDGET = 200_000


class Inconclusive(Exception):
    def __init__(self, payload):
        super().__init__("inconclusive")
        self.payload = payload


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    raw = os.environ.get("LIELAT_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise LieLatError(f"LIELAT_BUDGET must be an integer, got {raw!r}") from None


def _sub(L, text) -> Sublattice:
    return Sublattice(L, fmt.parse_matrix(text, L.dim))


def _series_json(L):
    s = series_profile(L)
    return {
        "lower_central_ranks": list(s.lower_central_ranks),
        "derived_ranks": list(s.derived_ranks),
        "nilpotency_class": s.nilpotency_class,
        "solvable": s.solvable,
    }


def _killing_json(L):
    k = killing_matrix(L)
    return {"killing": fmt.matrix_json(k.A), "det_killing": fmt.rat(k.detA), "vp_det_killing": fmt.val(k.vp_detA)}


def _semisimple_json(L):
    c = is_semisimple(L)
    return {"semisimple": c.semisimple, "det_killing": fmt.rat(c.detA), "vp_det_killing": fmt.val(c.vp_detA)}


def _derivations_json(L):
    der = derivations(L)
    return {
        "dim": der.dim,
        "nilpotent": der.nilpotent,
        "chain_length": der.chain_length,
        "lie_nilpotent": der.lie_nilpotent,
        "basis": [fmt.matrix_json(m) for m in der.basis],
    }


def _simplicity_json(L):
    r = simplicity_report(L)
    return {"semisimple": r.semisimple, "centroid_dim": r.centroid_dim,
            "simple": r.simple, "just_infinite": r.just_infinite}


def cmd_validate(L, args):
    return {"valid": validate(L).ok, "lattice": fmt.lattice_to_json(L)}


def cmd_killing(L, args):
    return _killing_json(L)


def cmd_semisimple(L, args):
    return _semisimple_json(L)


def cmd_powerful(L, args):
    return {"powerful": is_powerful(L)}


def cmd_series(L, args):
    return _series_json(L)


def cmd_derivations(L, args):
    return _derivations_json(L)


def cmd_simplicity(L, args):
    return _simplicity_json(L)


def cmd_index(L, args):
    M = _sub(L, args.sub)
    prof = smith_p(M.B, L.p)
    return {"index_exponent": index(M), "smith_exponents": list(prof.exponents),
            "hnf": fmt.matrix_json(M.hnf)}


def cmd_gram(L, args):
    M = _sub(L, args.sub)
    return {"gram": fmt.matrix_json(gram(M))}


def cmd_iso_check(L, args):
    M, N = _sub(L, args.sub), _sub(L, args.image)
    phi = fmt.parse_matrix(args.map, L.dim)
    r = iso_index_check(L, M, N, phi)
    return {
        "index_m": r.index_m,
        "index_n": r.index_n,
        "equal": r.equal,
        "ratio_valuation": r.index_m - r.index_n,
        "semisimple": r.semisimple,
        "gram_identity": r.gram_identity,
        "image_basis": fmt.matrix_json(r.image_basis),
    }


def cmd_serre(L, args):
    s = automorphism_check(L, fmt.parse_matrix(args.map, L.dim))
    if not s.verified:
        raise NotAnAutomorphism("map is not an automorphism of the lattice's algebra")
    v = serre_verdict(L, s)
    return {
        "det_valuation": v.det_valuation,
        "norm_det": fmt.rat(v.norm_det),
        "passes": v.passes,
        "eigen_valuations": [fmt.rat(x) for x in v.eigen_valuations],
    }


def _candidates(L, args):
    return [fmt.parse_matrix(c, L.dim) for c in (args.candidate or [])]


def cmd_stable(L, args):
    v = stability_certificate(L, _budget(args), _candidates(L, args))
    out = fmt.verdict_to_json(v)
    if v.status == "Unknown":
        raise Inconclusive(out)
    return out


def cmd_witness_search(L, args):
    found = search_unstable_witness(L, _budget(args), _candidates(L, args))
    out = {"found": found.witness is not None, "strategy": found.strategy, "examined": found.examined}
    if found.witness is not None:
        out["witness"] = fmt.automap_to_json(found.witness)
    return out


def _enum_json(rep):
    return {
        "p": rep.p,
        "k": rep.k,
        "count": len(rep.items),
        "counts": {str(n): c for n, c in rep.counts.items()},
        "subalgebra_count": sum(rep.subalgebra),
        "sublattices": [
            {"hnf": fmt.matrix_json(M.hnf), "index_exponent": n, "subalgebra": s}
            for M, n, s in zip(rep.items, rep.exponents, rep.subalgebra)
        ],
    }


def cmd_enum(L, args):
    return _enum_json(enum_subalgebras(L, args.k, _budget(args)))


def cmd_classify(L, args):
    rep = enum_subalgebras(L, args.k, _budget(args))
    subs = rep.subalgebras()
    cls = classify_mod_pk(L, subs, args.e, _budget(args))
    return {
        "precision": cls.precision,
        "method": cls.method,
        "subalgebras": [{"hnf": fmt.matrix_json(M.hnf), "index_exponent": index(M)} for M in subs],
        "classes": cls.classes,
        "inconclusive": cls.inconclusive,
    }


def cmd_oracle_check(L, args):
    r = exhaustive_stability_check(L, args.k, args.e, _budget(args))
    return {
        "p": r.p,
        "k": r.k,
        "precision": r.precision,
        "method": r.method,
        "enumerated": r.enumerated,
        "subalgebras": r.subalgebras,
        "classes": r.classes,
        "unresolved": r.unresolved,
        "violation_count": len(r.violations),
        "violations": [
            {
                "M": fmt.sublattice_to_json(v.M),
                "N": fmt.sublattice_to_json(v.N),
                "phi": fmt.matrix_json(v.phi),
                "index_m": v.index_m,
                "index_n": v.index_n,
            }
            for v in r.violations
        ],
    }


def cmd_bch(L, args):
    g = GroupElement.make(fmt.parse_vector(args.g), args.e, L.p)
    h = GroupElement.make(fmt.parse_vector(args.h), args.e, L.p)
    return {"product": fmt.element_to_json(bch_mul(L, g, h))}


def cmd_group_index(L, args):
    M = _sub(L, args.sub)
    r = group_index_check(L, M, args.e, _budget(args))
    return {"group_count": r.group_count, "lattice_exponent": r.lattice_exponent,
            "lattice_index": r.lattice_index, "subgroup_order": r.subgroup_order, "agree": r.agree}


def cmd_report(L, args):
    v = stability_certificate(L, _budget(args), _candidates(L, args))
    out = {
        "lattice": fmt.lattice_to_json(L),
        "killing": _killing_json(L),
        "semisimple": _semisimple_json(L),
        "powerful": is_powerful(L),
        "series": _series_json(L),
        "derivations": {k: x for k, x in _derivations_json(L).items() if k != "basis"},
        "simplicity": _simplicity_json(L),
        "stability": fmt.verdict_to_json(v),
    }
    if v.status == "Unknown":
        raise Inconclusive(out)
    return out


COMMANDS = {
    "validate": cmd_validate,
    "killing": cmd_killing,
    "semisimple": cmd_semisimple,
    "powerful": cmd_powerful,
    "series": cmd_series,
    "derivations": cmd_derivations,
    "simplicity": cmd_simplicity,
    "index": cmd_index,
    "gram": cmd_gram,
    "iso-check": cmd_iso_check,
    "serre": cmd_serre,
    "stable": cmd_stable,
    "witness-search": cmd_witness_search,
    "enum": cmd_enum,
    "classify": cmd_classify,
    "oracle-check": cmd_oracle_check,
    "bch": cmd_bch,
    "group-index": cmd_group_index,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lielat", description="Exact toolkit for Z_p-Lie lattices.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="command")
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("lattice", help="lattice JSON file or builtin:<name>[?dim=n]")
        sp.add_argument("--p", type=int, default=None, help="prime (required for built-ins)")
        sp.add_argument("--budget", type=int, default=None)
        if name in ("index", "gram", "iso-check", "group-index"):
            sp.add_argument("--sub", required=True, help="sublattice: diag(..), JSON rows, or file")
        if name == "iso-check":
            sp.add_argument("--image", required=True, help="target sublattice")
            sp.add_argument("--map", required=True, help="isomorphism in lattice coordinates")
        if name == "serre":
            sp.add_argument("--map", required=True)
        if name in ("stable", "witness-search", "report"):
            sp.add_argument("--candidate", action="append", help="extra witness candidate (repeatable)")
        if name in ("enum", "classify", "oracle-check"):
            sp.add_argument("--k", type=int, default=1, help="maximum index exponent")
        if name in ("classify", "oracle-check"):
            sp.add_argument("--e", type=int, default=1, help="precision exponent")
        if name in ("bch", "group-index"):
            sp.add_argument("--e", type=int, default=2, help="precision exponent")
        if name == "bch":
            sp.add_argument("--g", required=True)
            sp.add_argument("--h", required=True)
    return parser


def _emit(doc) -> None:
    sys.stdout.write(fmt.dumps(doc) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            return EXIT_OK
        _emit({"error": {"code": "usage", "message": "invalid command line"}})
        return EXIT_INVALID
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INVALID
    echo = {"command": args.command, "source": args.lattice}
    try:
        L = fmt.parse_lattice(args.lattice, args.p)
        payload = COMMANDS[args.command](L, args)
    except Inconclusive as exc:
        _emit({**echo, **exc.payload})
        return EXIT_INCONCLUSIVE
    except BudgetError as exc:
        print(f"lielat: {exc}", file=sys.stderr)
        _emit({**echo, "error": {"code": exc.code, "message": str(exc), "partial": exc.partial}})
        return EXIT_INCONCLUSIVE
    except InternalError:
        raise
    except LieLatError as exc:
        print(f"lielat: {exc.code}: {exc}", file=sys.stderr)
        err = {"code": exc.code, "message": str(exc)}
        where = exc.detail.get("where")
        if where is not None:
            err["where"] = list(where)
        _emit({**echo, "error": err})
        return EXIT_INVALID
    _emit({**echo, **payload})
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

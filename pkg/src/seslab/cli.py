"""Command-line front end.

JSON goes to stdout (or ``--out``); a one-line summary goes to stderr.
Exit codes: 0 all checks pass, 1 a claim failed, 2 usage error, 3 budget.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .constructions import construct
from .grp import BudgetExceeded, DEFAULT_BUDGET
from .numth import is_prime, zsigmondy_primes
from .verify import DEFAULT_PARAMS, default_cache_dir, iso_report, report_all, sp_orders, verify_theorem

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
ISO_BUDGET = 10**8


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, help="write JSON here instead of stdout")
    p.add_argument("--json-indent", type=int, default=2, metavar="N")
    p.add_argument("--budget", type=int, help="element budget (node budget for iso)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--cache", type=Path, help="cache directory (default: $SES_LAB_CACHE or ~/.cache/seslab)")
    p.add_argument("--timings", action="store_true", help="include per-stage milliseconds")
    p.add_argument("-v", "--verbose", action="store_true")


def parse_params(text: str) -> list[tuple[int, int]]:
    """Parse ``"2,1;3,2"`` (also ``2:1 3:2``) into [(2, 1), (3, 2)]; empty text gives []."""
    out = []
    for token in text.replace(";", " ").split():
        parts = token.replace(":", ",").split(",")
        if len(parts) != 2 or not all(s.strip().isdigit() for s in parts):
            raise UsageError(f"bad parameter token {token!r}; expected p,a")
        p, a = (int(s) for s in parts)
        if not is_prime(p) or a < 1:
            raise UsageError(f"bad parameter token {token!r}; p must be prime and a >= 1")
        out.append((p, a))
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seslab", description="Semi-extraspecial p-group verification tools.")
    parser.add_argument("--version", action="version", version=f"seslab {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build a group and print its JSON")
    p.add_argument("spec", help='e.g. "su3:3", "heis:2", "sp:6,2", "sl2:7", "gl:2,3", "ut:4,2"')
    _common(p)

    p = sub.add_parser("analyze", help="structure and S.E.S. predicates of a group")
    p.add_argument("spec")
    _common(p)

    p = sub.add_parser("verify-theorem", help="claim suite for su3_sylow(p^a) and sigma_t")
    p.add_argument("p", type=int)
    p.add_argument("a", type=int)
    _common(p)

    p = sub.add_parser("sp-orders", help="p'-order spectrum of Sp_n(p), cached")
    p.add_argument("n", type=int)
    p.add_argument("p", type=int)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--recompute", action="store_true", help="ignore and overwrite the cache entry")
    _common(p)

    p = sub.add_parser("iso", help="isomorphism search between two groups")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    _common(p)

    p = sub.add_parser("zsigmondy", help="Zsigmondy primes of a^m - 1")
    p.add_argument("a", type=int)
    p.add_argument("m", type=int)
    _common(p)

    p = sub.add_parser("report-all", help="every suite over a list of (p, a)")
    p.add_argument("--params", default=None,
                   help='e.g. "2,1;3,2"; default: ' + ";".join(f"{p},{a}" for p, a in DEFAULT_PARAMS))
    _common(p)
    return parser


def _analyze(spec: str, budget: int) -> dict:
    from .grp import is_abelian, nilpotency_class, structure_report
    from .ses import is_camina, is_ses_by_forms, is_ultraspecial, semi_extraspecial_report

    G = construct(spec, budget)
    out = {"artifact_version": __version__, "group_spec": spec, "group": G.to_json(include_elements=False)}
    if G.prime is None:
        out["structure"] = {"order": G.order, "p_group": False}
        return out
    out["structure"] = structure_report(G).to_json()
    out["structure"]["class"] = nilpotency_class(G)
    sr = semi_extraspecial_report(G)
    ses = sr.to_json()
    if not is_abelian(G):
        ses["camina"] = is_camina(G)
        ses["form_based"] = is_ses_by_forms(G)
        ses["ultraspecial"] = bool(sr.flag and is_ultraspecial(G))
    out["ses"] = ses
    return out


def run(args: argparse.Namespace) -> tuple[dict, int]:
    budget = args.budget
    verb = args.verb
    if verb == "construct":
        G = construct(args.spec, budget or DEFAULT_BUDGET)
        return G.to_json(), EXIT_OK
    if verb == "analyze":
        return _analyze(args.spec, budget or DEFAULT_BUDGET), EXIT_OK
    if verb == "verify-theorem":
        rep = verify_theorem(args.p, args.a, budget)
        return rep.to_json(args.timings), EXIT_OK if rep.passed else EXIT_FAIL
    if verb == "sp-orders":
        cache = None if args.no_cache else (args.cache or default_cache_dir())
        out = sp_orders(args.n, args.p, cache_dir=cache, threads=args.threads, budget=budget,
                        force=args.recompute)
        return out, EXIT_OK if out["verdict"]["overall"] == "PASS" else EXIT_FAIL
    if verb == "iso":
        out = iso_report(args.spec_a, args.spec_b, budget=budget or ISO_BUDGET)
        return out, EXIT_BUDGET if out["status"] == "exhausted" else EXIT_OK
    if verb == "zsigmondy":
        if args.a < 2 or args.m < 2:
            raise UsageError("zsigmondy needs a >= 2 and m >= 2")
        zs = zsigmondy_primes(args.a, args.m)
        return {"artifact_version": __version__, "zsigmondy": zs.to_json()}, EXIT_OK
    if verb == "report-all":
        params = DEFAULT_PARAMS if args.params is None else parse_params(args.params)
        out = report_all(params, cache_dir=args.cache or default_cache_dir(), threads=args.threads,
                         iso_budget=budget or ISO_BUDGET, timings=args.timings)
        return out, EXIT_OK if out["verdict"]["overall"] == "PASS" else EXIT_FAIL
    raise UsageError(f"unknown verb {verb}")


def _summary(out: dict) -> str:
    verdict = out.get("verdict")
    if isinstance(verdict, dict):
        return f"verdict: {verdict.get('overall')}"
    if "status" in out:
        return f"status: {out['status']}"
    if "order" in out:
        return f"{out.get('label', '')}: order {out['order']}"
    return "done"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        out, code = run(args)
    except (UsageError, ValueError) as exc:
        print(f"seslab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"seslab: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    text = json.dumps(out, indent=args.json_indent if args.json_indent >= 0 else None) + "\n"
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    print(_summary(out), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every subcommand writes one JSON document (default) or CSV to stdout or
--output.  Library errors map to fixed exit codes (see errors.py); a
failing acceptance criterion in verify-all exits with VERIFY_FAILED.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .chars import DirichletCharacter, char_from_discriminant
from .cyclotomic import format_exact
from .decomp import (ShiftedNewformCombination, decompose, newform_basis, nonnegativity_scan,
                     scan_bound)
from .eisen import QExpansion, parse_newform, q_expansion, sigma
from .errors import EisenError
from .multone import detect_twist, eigenvalue_agreement_density, sign_agreement_density
from .stats import (CSV_HEADER, DIGITS, SignPattern, average_eta, census, first_negative,
                    first_negative_scan, prime_race, sign_density, theta_constant, to_decimal)

THREADS_ENV = "EISENSIGN_THREADS"
USAGE_ERROR = 2
VERIFY_FAILED = 3

SUBCOMMANDS = ("sigma", "expand", "sign-stats", "first-negative", "census", "theta", "eta", "race",
               "agree", "detect-twist", "basis", "decompose", "nonneg", "verify-all")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    output: str | None = None
    format: str = "json"
    threads: int = 1
    digits: int = DIGITS


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", default=None, help="write here instead of stdout")
    common.add_argument("--threads", type=_positive, default=None,
                        help=f"worker threads (default ${THREADS_ENV} or 1)")
    common.add_argument("--digits", type=_positive, default=DIGITS, help="decimal digits in reports")

    p = argparse.ArgumentParser(prog="eisensign", description="Signs of Eisenstein newform coefficients.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("sigma", parents=[common], help="twisted divisor sum sigma(n)")
    s.add_argument("--d1", type=int, required=True)
    s.add_argument("--d2", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=_positive, required=True)

    s = sub.add_parser("expand", parents=[common], help="q-expansion of a newform")
    s.add_argument("--f", required=True, help='descriptor "D1:D2:k" or "chi1;chi2;k"')
    s.add_argument("--bound", type=_positive, required=True)

    s = sub.add_parser("sign-stats", parents=[common], help="share of n <= x with a given sign")
    s.add_argument("--f", required=True)
    s.add_argument("--x", type=_positive, nargs="+", required=True)
    s.add_argument("--sign", type=int, choices=(-1, 1), default=-1)

    s = sub.add_parser("first-negative", parents=[common], help="least prime with a negative eigenvalue")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--f")
    g.add_argument("--scan", type=_positive, help="scan all fundamental 1 < D <= SCAN")

    s = sub.add_parser("census", parents=[common], help="sign-pattern census over discriminant pairs")
    s.add_argument("--pattern", required=True, help='e.g. "3:-1,5:0"')
    s.add_argument("--x", type=_positive, nargs="+", required=True)
    s.add_argument("--include-one", action="store_true", help="admit D = 1 in the pair space")

    s = sub.add_parser("theta", parents=[common], help="partial sums of the constant theta")
    s.add_argument("--terms", type=_positive, required=True)

    s = sub.add_parser("eta", parents=[common], help="average least negative prime over pairs")
    s.add_argument("--x", type=_positive, nargs="+", required=True)
    s.add_argument("--include-one", action="store_true")
    s.add_argument("--scan-primes", type=_positive, default=25)

    s = sub.add_parser("race", parents=[common], help="prime race sum_{p <= y} chi2(p)")
    s.add_argument("--d2", type=int, required=True)
    s.add_argument("--X", type=_positive, required=True)
    s.add_argument("--points", type=_positive, default=200)

    for name in ("agree", "detect-twist"):
        s = sub.add_parser(name, parents=[common], help="compare two newforms")
        s.add_argument("--f", required=True)
        s.add_argument("--g", required=True)
        if name == "agree":
            s.add_argument("--signs", action="store_true", help="compare signs instead of eigenvalues")

    s = sub.add_parser("basis", parents=[common], help="shifted-newform basis of E_k(N, chi)")
    s.add_argument("--N", type=_positive, required=True)
    s.add_argument("--chi", default="disc:1", help='"disc:D" or "mod:N:[...]"')
    s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("decompose", parents=[common], help="decompose a q-expansion")
    s.add_argument("--input", required=True, help="eisen JSON or one exact value per line")
    s.add_argument("--N", type=_positive, required=True)
    s.add_argument("--chi", default="disc:1")
    s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("nonneg", parents=[common], help="search for a(n) < -T")
    s.add_argument("--comb", required=True, help="combination JSON (file path or literal)")
    s.add_argument("--T", default="0")
    s.add_argument("--B", type=_positive, default=None, help="scan bound (default: computed)")
    s.add_argument("--full-scan", action="store_true")

    s = sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    s.add_argument("--scale", choices=("small", "full"), default="small")
    s.add_argument("--only", default=None, help="comma-separated criterion numbers")
    return p


def _character(flag: str, text: str) -> DirichletCharacter:
    try:
        if text.lstrip("-").isdigit():
            return char_from_discriminant(int(text))
        return DirichletCharacter.parse(text)
    except EisenError as exc:
        raise type(exc)(f"{flag}: {exc}") from None


def _newform(flag: str, text: str):
    try:
        return parse_newform(text)
    except EisenError as exc:
        raise type(exc)(f"{flag}: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"{flag}: malformed descriptor {text!r} ({exc})") from None


def parse_args(argv: list[str] | None = None) -> RunConfig:
    """Parse and validate; raises EisenError/UsageError before any computation."""
    ns = build_parser().parse_args(argv)
    params = {k: v for k, v in vars(ns).items()
              if k not in ("subcommand", "format", "output", "threads", "digits")}
    cmd = ns.subcommand
    if cmd == "sigma":
        params["chi1"] = _character("--d1", str(ns.d1))
        params["chi2"] = _character("--d2", str(ns.d2))
        _newform("--d1/--d2/--k", f"{ns.d1}:{ns.d2}:{ns.k}")
    elif cmd in ("expand", "sign-stats", "agree", "detect-twist") or (cmd == "first-negative" and ns.f):
        params["f"] = _newform("--f", ns.f)
        if "g" in params:
            params["g"] = _newform("--g", ns.g)
    elif cmd in ("census",):
        try:
            params["pattern"] = SignPattern.parse(ns.pattern)
        except ValueError as exc:
            raise UsageError(f"--pattern: {exc}") from None
    elif cmd == "race":
        params["chi2"] = _character("--d2", str(ns.d2))
    elif cmd in ("basis", "decompose"):
        params["chi"] = _character("--chi", ns.chi)
        if ns.N % params["chi"].modulus:
            raise UsageError(f"--chi: modulus {params['chi'].modulus} does not divide --N {ns.N}")
    elif cmd == "nonneg":
        try:
            params["T"] = Fraction(ns.T)
        except ValueError:
            raise UsageError(f"--T: not a rational number: {ns.T!r}") from None
    elif cmd == "verify-all" and ns.only:
        try:
            params["only"] = sorted({int(t) for t in ns.only.split(",")})
        except ValueError:
            raise UsageError(f"--only: expected integers, got {ns.only!r}") from None
    threads = ns.threads if ns.threads is not None else _default_threads()
    return RunConfig(cmd, params, ns.output, ns.format, threads, ns.digits)


# -- output --------------------------------------------------------------------------

def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, default=str) + "\n"


def _emit(cfg: RunConfig, obj, header=None, rows=None) -> str:
    if cfg.format == "csv":
        if header is None:
            raise UsageError(f"{cfg.subcommand} has no CSV form")
        return _csv(header, rows)
    return _json(obj)


def _read_source(text: str) -> str:
    path = Path(text)
    if len(text) < 4096 and path.exists():
        return path.read_text()
    return text


# -- dispatch --------------------------------------------------------------------------

def _run(cfg: RunConfig) -> tuple[str, int]:
    P, cmd = cfg.params, cfg.subcommand
    if cmd == "sigma":
        v = sigma(P["chi1"], P["chi2"], P["k"], P["n"])
        obj = {"D1": P["d1"], "D2": P["d2"], "k": P["k"], "n": P["n"], "sigma": format_exact(v)}
        return _emit(cfg, obj, ["D1", "D2", "k", "n", "sigma"],
                     [[P["d1"], P["d2"], P["k"], P["n"], format_exact(v)]]), 0
    if cmd == "expand":
        ex = q_expansion(P["f"], P["bound"])
        return _emit(cfg, ex.to_dict(), ["n", "a"],
                     [[n, format_exact(v)] for n, v in enumerate(ex.values())]), 0
    if cmd == "sign-stats":
        f = P["f"]
        reps = [sign_density(f.chi1, f.chi2, f.k, x, P["sign"], cfg.threads) for x in P["x"]]
        return _emit(cfg, [r.to_dict(cfg.digits) for r in reps], CSV_HEADER,
                     [r.csv_row(x, cfg.digits) for r, x in zip(reps, P["x"])]), 0
    if cmd == "first-negative":
        if P.get("f") is not None:
            f = P["f"]
            p = first_negative(f.chi1, f.chi2, f.k)
            return _emit(cfg, {"f": str(f), "p0": p}, ["f", "p0"], [[str(f), p]]), 0
        r = first_negative_scan(P["scan"])
        obj = {k: v for k, v in r.items() if k not in ("p0", "Ds")}
        rows = [[int(D), int(p)] for D, p in zip(r["Ds"], r["p0"])]
        return _emit(cfg, obj, ["D", "p0"], rows), 0
    if cmd == "census":
        reps = [census(P["pattern"], x, P["include_one"], cfg.threads) for x in P["x"]]
        return _emit(cfg, [r.to_dict(cfg.digits) for r in reps], CSV_HEADER,
                     [r.csv_row(x, cfg.digits) for r, x in zip(reps, P["x"])]), 0
    if cmd == "theta":
        v = theta_constant(P["terms"], cfg.digits)
        return _emit(cfg, {"terms": P["terms"], "theta": str(v)}, ["terms", "theta"],
                     [[P["terms"], str(v)]]), 0
    if cmd == "eta":
        reps = [average_eta(x, P["include_one"], P["scan_primes"], cfg.threads) for x in P["x"]]
        return _emit(cfg, [r.to_dict(cfg.digits) for r in reps],
                     ["x", "pairs", "resolved", "unresolved", "mean_eta"],
                     [[r.x, r.pairs, r.resolved, r.unresolved, str(to_decimal(r.mean, cfg.digits))]
                      for r in reps]), 0
    if cmd == "race":
        r = prime_race(P["chi2"], P["X"], P["points"])
        obj = {"D2": P["d2"], "X": P["X"], "negative_fraction": str(r["negative_fraction"]),
               "predicted_bias": r["predicted_bias"], "series": r["series"]}
        return _emit(cfg, obj, ["y", "sum"], r["series"]), 0
    if cmd == "agree":
        fn = sign_agreement_density if P["signs"] else eigenvalue_agreement_density
        return _emit(cfg, fn(P["f"], P["g"]).to_dict()), 0
    if cmd == "detect-twist":
        th = detect_twist(P["f"], P["g"])
        return _emit(cfg, {"f": str(P["f"]), "g": str(P["g"]), "theta": str(th) if th else None}), 0
    if cmd == "basis":
        b = newform_basis(P["N"], P["chi"], P["k"])
        items = [{"E": E.descriptor, "d": d} for E, d in b]
        return _emit(cfg, {"N": P["N"], "chi": str(P["chi"]), "k": P["k"], "size": len(b),
                           "note": b.note, "basis": items},
                     ["E", "d"], [[i["E"], i["d"]] for i in items]), 0
    if cmd == "decompose":
        text = _read_source(P["input"])
        if text.lstrip().startswith("{"):
            a = QExpansion.from_json(text)
        else:
            a = QExpansion.from_lines(text, P["k"], P["N"], P["chi"])
        comb = decompose(a, P["N"], P["chi"], P["k"])
        return _emit(cfg, comb.to_list(), ["c", "E", "d"],
                     [[format_exact(c), E.descriptor, d] for c, E, d in comb.terms]), 0
    if cmd == "nonneg":
        comb = ShiftedNewformCombination.from_json(_read_source(P["comb"]))
        B = P["B"]
        if B is None:
            B = scan_bound(comb, P["T"]) or 10**6
        hit = nonnegativity_scan(comb, P["T"], B, full_scan=P["full_scan"])
        obj = {"T": str(P["T"]), "B": B, "found": hit is not None,
               "n": hit[0] if hit else None, "a": format_exact(hit[1]) if hit else None}
        return _emit(cfg, obj, ["T", "B", "n", "a"],
                     [[str(P["T"]), B, obj["n"], obj["a"]]]), 0
    if cmd == "verify-all":
        from .verify import run_all

        results = run_all(P["scale"], P.get("only"))
        failed = any(r.passed is False for r in results)
        obj = {"scale": P["scale"], "all_passed": not failed,
               "criteria": [{"number": r.number, "name": r.name, "status": r.status, "detail": r.detail}
                            for r in results]}
        rows = [[r.number, r.name, r.status] for r in results]
        return _emit(cfg, obj, ["criterion", "name", "status"], rows), VERIFY_FAILED if failed else 0
    raise UsageError(f"unknown subcommand {cmd}")


def run(cfg: RunConfig) -> int:
    text, status = _run(cfg)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_args(argv)
        return run(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except EisenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())

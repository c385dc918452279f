"""Command line interface: ``rrsearch <command> ...``.

Exit status is 0 only when every requested verification passed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from fractions import Fraction

from . import bailey, qpoly
from .catalog import (IdentityRecord, KnownIdentityIndex, classical_catalog, dumps_record, load_records,
                      paper_catalog, store_records, verify_identity)
from .engel import engel_expand
from .errors import EngelStall, QSeriesError
from .families import SeriesFamily, expand_family
from .lindep import build_log_lattice, find_relation
from .prodmake import detect_period, prodmake, product_to_series
from .search import SearchConfig, run_maple_search, run_pari_search
from .theta_match import match_any

log = logging.getLogger("rrsearch")


def _global_flags(p: argparse.ArgumentParser, top: bool) -> None:
    # the same flags are accepted before and after the command name
    d = {} if top else {"default": argparse.SUPPRESS}
    p.add_argument("--order", type=int, **({"default": None} if top else d), help="truncation order")
    p.add_argument("--precision", type=int, **({"default": 60} if top else d), help="digits P")
    p.add_argument("--q0", type=Fraction, **({"default": Fraction(1, 10_000)} if top else d),
                   help="evaluation point, e.g. 1/10000")
    p.add_argument("--threads", type=int, **({"default": 1} if top else d))
    p.add_argument("--out", **({"default": None} if top else d), help="output file")
    p.add_argument("-v", "--verbose", action="store_true", **({"default": False} if top else d))


def _sub(subs, name, help_text):
    p = subs.add_parser(name, help=help_text)
    _global_flags(p, top=False)
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rrsearch", description=__doc__.splitlines()[0])
    _global_flags(ap, top=True)
    subs = ap.add_subparsers(dest="command", required=True)

    p = _sub(subs, "verify", "re-verify every record of a catalog file")
    p.add_argument("--catalog", help="record file (default: the shipped catalogs)")
    p.add_argument("--corrected", action="store_true", help="use corrected forms where stored")
    p.set_defaults(func=cmd_verify)

    p = _sub(subs, "search", "run a discovery pipeline")
    p.add_argument("pipeline", choices=("pari", "maple"))
    p.add_argument("--config", help="JSON search configuration")
    p.set_defaults(func=cmd_search)

    p = _sub(subs, "prodmake", "product exponents of a series")
    _series_args(p)
    p.add_argument("--moduli", default="1-36", help="periods to try, e.g. 5,8 or 1-36")
    p.add_argument("--lindep", action="store_true", help="also run the numeric relation search")
    p.set_defaults(func=cmd_prodmake)

    p = _sub(subs, "match", "theta / false theta recognition of a series")
    _series_args(p)
    p.set_defaults(func=cmd_match)

    p = _sub(subs, "engel", "Engel expansion of a series")
    _series_args(p)
    p.add_argument("--steps", type=int, default=5)
    p.set_defaults(func=cmd_engel)

    p = _sub(subs, "bailey", "Bailey pairs and transforms")
    bs = p.add_subparsers(dest="bailey_command", required=True)
    q = _sub(bs, "verify", "check a pair's closed beta against the defining sum")
    q.add_argument("--pair", default="new", choices=sorted(bailey.PAIRS))
    q.add_argument("--nmax", type=int, default=30)
    q.add_argument("--transform", choices=bailey.TRANSFORMS, help="also check a transform")
    q.add_argument("--recurrence", action="store_true", help="also check the first-order recurrence")
    q.set_defaults(func=cmd_bailey_verify)
    q = _sub(bs, "guess", "guess a first-order recurrence for beta")
    q.add_argument("--pair", default="new", choices=sorted(bailey.PAIRS))
    q.add_argument("--nmin", type=int, default=3)
    q.add_argument("--nmax", type=int, default=12)
    q.set_defaults(func=cmd_bailey_guess)

    p = _sub(subs, "poly", "finite polynomial identities")
    ps = p.add_subparsers(dest="poly_command", required=True)
    q = _sub(ps, "check", "exact check for N up to nmax")
    q.add_argument("--identity", choices=("mod4", "mod8"), required=True)
    q.add_argument("--nmin", type=int, default=0)
    q.add_argument("--nmax", type=int, default=25)
    q.set_defaults(func=cmd_poly_check)
    return ap


def _series_args(p):
    p.add_argument("--series", required=True,
                   help="catalog id (mod12, RR1, ...), canonical key, or a family as JSON")
    p.add_argument("--catalog", help="record file to look the series up in")


# --------------------------------------------------------------- helpers


def _records(path):
    if path:
        return load_records(path)
    return paper_catalog() + classical_catalog()


def _family(args) -> SeriesFamily:
    text = args.series.strip()
    if text.startswith("{"):
        return SeriesFamily.from_json(json.loads(text))
    for r in _records(getattr(args, "catalog", None)):
        if text in (r.id, r.key):
            return r.lhs
    raise SystemExit(f"unknown series {text!r}")


def _emit(args, lines) -> None:
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _verify_job(job):
    rec, order, corrected = job
    return verify_identity(rec, order, use_corrections=corrected)


# -------------------------------------------------------------- commands


def cmd_verify(args) -> int:
    recs = _records(args.catalog)
    jobs = [(r, args.order or max(100, r.verified_order), args.corrected) for r in recs]
    t = time.perf_counter()
    if args.threads > 1:
        with ProcessPoolExecutor(args.threads) as ex:
            done = list(ex.map(_verify_job, jobs))
    else:
        done = [_verify_job(j) for j in jobs]
    lines = []
    for (r, order, _), d in zip(jobs, done):
        detail = "" if d.status == "verified" else "  " + ", ".join(
            f"{k} first differs at q^{v}" for k, v in d.failure.items())
        lines.append(f"{d.id:12s} {d.status:9s} order {order}{detail}")
    bad = sum(d.status != "verified" for d in done)
    lines.append(f"{len(done) - bad}/{len(done)} verified in {time.perf_counter() - t:.1f}s")
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        store_records(args.out, done)
    return 0 if bad == 0 else 1


def cmd_search(args) -> int:
    cfg = SearchConfig.load(args.config) if args.config else SearchConfig()
    over = {"threads": args.threads, "P": args.precision, "q0": args.q0}
    if args.order:
        over["order"] = args.order
    cfg = replace(cfg, **over)
    run = run_pari_search if args.pipeline == "pari" else run_maple_search
    t = time.perf_counter()
    recs = run(cfg, KnownIdentityIndex.default())
    for r in recs:
        form = next(iter(r.forms.values()))
        print(f"[{r.label}] {r.lhs.describe()} = {form}")
    print(f"{len(recs)} records in {time.perf_counter() - t:.1f}s", file=sys.stderr)
    if args.out:
        # plain write keeps the search order; the records are distinct by key already
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            for r in recs:
                fh.write(dumps_record(r) + "\n")
    return 0


def _moduli(text: str):
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def cmd_prodmake(args) -> int:
    fam = _family(args)
    order = args.order or 100
    s = expand_family(fam, order)
    e = prodmake(s)
    lines = [f"series  {s.format(12)}",
             "exponents e_n (s = c * prod (1-q^n)^(-e_n)):",
             "  " + " ".join(str(x) for x in e.e[:min(len(e.e), 60)])]
    form = detect_period(e, _moduli(args.moduli))
    ok = True
    if form is None:
        lines.append("no period found in the window")
        ok = False
    else:
        same = s.first_difference(product_to_series(form, order), order) is None
        lines.append(f"periodic form: {form}  (re-expansion {'matches' if same else 'DIFFERS'})")
        ok = same
    if args.lindep:
        for L in (20, 24, 28, 32, 36):
            rel = find_relation(build_log_lattice(s, L, args.q0, args.precision))
            lines.append(f"L = {L}: {'no relation' if rel is None else rel.b}")
    _emit(args, lines)
    return 0 if ok else 1


def cmd_match(args) -> int:
    fam = _family(args)
    s = expand_family(fam, args.order or 100)
    hit = match_any(s)
    _emit(args, [f"series  {s.format(12)}", f"match   {hit if hit is not None else 'none'}"])
    return 0 if hit is not None else 1


def cmd_engel(args) -> int:
    fam = _family(args)
    s = expand_family(fam, args.order or 60)
    try:
        ex = engel_expand(s, args.steps)
        digits, note = ex.digits, " (terminated)" if ex.terminated else ""
        code = 0
    except EngelStall as exc:
        digits, note, code = exc.digits, f" ({exc})", 1
    lines = [f"a_{i} = {d.format(8)}" for i, d in enumerate(digits)]
    lines.append(f"{len(digits)} digits{note}")
    _emit(args, lines)
    return code


def cmd_bailey_verify(args) -> int:
    p = bailey.get_pair(args.pair)
    order = args.order or 60
    lines, ok = [], True
    chk = bailey.verify_pair(p, args.nmax, order)
    lines.append(f"pair {p.name}: beta closed form vs defining sum, n <= {args.nmax}: {chk}")
    ok &= bool(chk)
    if args.recurrence:
        r = bailey.verify_recurrence(p, bailey.NEW_PAIR_RECURRENCE, range(3, args.nmax + 1), order)
        lines.append(f"recurrence {bailey.NEW_PAIR_RECURRENCE}, 3 <= n <= {args.nmax}: {r}")
        ok &= bool(r)
    if args.transform:
        lhs, rhs = bailey.transform(args.transform, p, args.order or 100)
        d = lhs.first_difference(rhs)
        lines.append(f"{args.transform}: lhs = {lhs.format(8)}")
        lines.append(f"{args.transform}: rhs {'agrees' if d is None else f'first differs at q^{d}'}")
        ok &= d is None
    _emit(args, lines)
    return 0 if ok else 1


def cmd_bailey_guess(args) -> int:
    p = bailey.get_pair(args.pair)
    g = bailey.guess_first_order(p, range(args.nmin, args.nmax + 1))
    _emit(args, [f"beta_n / beta_(n-1) = {g}" if g is not None else "no first-order recurrence found"])
    return 0 if g is not None else 1


def cmd_poly_check(args) -> int:
    check = qpoly.check_mod4poly if args.identity == "mod4" else qpoly.check_mod8poly
    lo = args.nmin
    lines, ok = [], True
    for N in range(lo, args.nmax + 1):
        good = check(N)
        ok &= good
        lines.append(f"N = {N:3d}  {'ok' if good else 'FAILED'}")
    _emit(args, lines)
    return 0 if ok else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (QSeriesError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

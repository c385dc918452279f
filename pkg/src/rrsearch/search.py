"""The two discovery pipelines over the parameterized families.

Numeric pipeline: evaluate each family instance at a small rational q0, look
for an integer relation between its logarithm and the logarithms of
``(q^j; q^L)_inf``, and keep a candidate only once prodmake finds the same
periodic product symbolically and its expansion matches to the verification
order.

Symbolic pipeline: multiply each instance by a classical theta function and
keep it when the product is sparse and matches a single theta function; a
sparse unmultiplied instance is tried against false theta series.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .catalog import IdentityRecord, KnownIdentityIndex, product, verify_identity
from .errors import QSeriesError
from .families import MapleGrid, PARI_ARGS, SeriesFamily, expand_family, is_sparse, maple_grid, pari_grid
from .lindep import build_log_lattice, find_relation, required_order
from .prodmake import PeriodicProductForm, detect_period, prodmake, product_to_series
from .products import apply_poch, classical_theta
from .series import QSeries, as_fraction
from .theta_match import match_false_theta, match_theta

log = logging.getLogger(__name__)

THETA_MULTIPLIERS = tuple((name, k) for name in ("f(-q)", "phi(-q)", "psi(-q)") for k in range(1, 5))


@dataclass(frozen=True)
class SearchConfig:
    """Search settings; the defaults are the published ones."""

    families: tuple = ("S", "S'", "S''")
    a_min: int = 0
    a_max: int = 10
    c_values: tuple = (0, 1)
    args: tuple = PARI_ARGS
    instances: tuple = ()  # explicit families, searched instead of the grids
    order: int = 100  # symbolic verification order
    q0: Fraction = Fraction(1, 10_000)
    P: int = 60
    moduli: tuple = (20, 24, 28, 32, 36)
    coeff_bound: int = 10
    sparse_cutoff: int = 55
    sparse_threshold: int = 12
    multipliers: tuple = THETA_MULTIPLIERS
    maple: MapleGrid = MapleGrid()
    max_theta_exp: int = 36
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "q0", as_fraction(self.q0))
        for name in ("families", "c_values", "args", "moduli", "instances"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "multipliers", tuple((str(n), int(k)) for n, k in self.multipliers))
        if isinstance(self.maple, dict):
            object.__setattr__(self, "maple", MapleGrid(**{k: tuple(v) if isinstance(v, list) else v
                                                           for k, v in self.maple.items()}))
        if self.order < 100:
            log.warning("verification order %d is below 100; records will not be marked verified", self.order)
        if not 0 < abs(self.q0) < 1:
            raise ValueError("q0 must lie strictly between -1 and 1")

    def num_order(self) -> int:
        return required_order(self.q0, self.P)

    @classmethod
    def from_json(cls, d: dict) -> "SearchConfig":
        known = {f.name for f in fields(cls)}
        bad = set(d) - known
        if bad:
            raise ValueError(f"unknown config keys: {sorted(bad)}")
        d = dict(d)
        if "instances" in d:
            d["instances"] = tuple(SeriesFamily.from_json(x) for x in d["instances"])
        if "q0" in d:
            d["q0"] = Fraction(str(d["q0"]))
        return cls(**d)

    @classmethod
    def load(cls, path) -> "SearchConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


# ------------------------------------------------------------- enumeration


def pari_instances(cfg: SearchConfig) -> list[SeriesFamily]:
    """Family instances in lexicographic parameter order, one per canonical key."""
    if cfg.instances:
        src: Iterable[SeriesFamily] = cfg.instances
    else:
        src = (fam for f in cfg.families
               for fam in pari_grid(f, cfg.a_max, cfg.args, cfg.a_min, cfg.c_values))
    seen, out = set(), []
    for fam in src:
        k = fam.key()
        if k not in seen:
            seen.add(k)
            out.append(fam)
    return out


def _integral(fam: SeriesFamily) -> bool:
    # (a n^2 + b n)/2 is an integer for every n iff a + b is even
    return (fam.a + fam.b) % 2 == 0 and fam.shift.denominator == 1


def _pmap(fn, items, cfg: SearchConfig):
    if cfg.threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (cfg.threads * 8))
    with ProcessPoolExecutor(max_workers=cfg.threads) as ex:
        return list(ex.map(fn, items, chunksize=chunk))


def _finish(found, index: KnownIdentityIndex | None) -> list[IdentityRecord]:
    recs = [r for r in found if r is not None]
    if index is not None:
        recs = [index.label(r) for r in recs]
    recs.sort(key=lambda r: r.key)
    return recs


# ---------------------------------------------------------- numeric search


def _relation_matches(rel, form: PeriodicProductForm) -> bool:
    # resolved coordinates of the relation must agree with the symbolic exponents
    s = rel.product_exponents()
    if len(s) % form.L:
        return False
    skip = set(i - 1 for i in rel.unresolved if i)
    p = form.restate(len(s))
    return all(s[j] == p.s[j] for j in range(len(s)) if j not in skip)


def _pari_one(job) -> IdentityRecord | None:
    fam, cfg = job
    if not _integral(fam):
        return None
    try:
        s = expand_family(fam, cfg.num_order())
        if s.is_zero() or s.lo != 0:
            return None
        for L in sorted(cfg.moduli):
            lat = build_log_lattice(s, L, cfg.q0, cfg.P)
            rel = find_relation(lat, cfg.coeff_bound)
            if rel is None or rel.b[0] != 1:
                continue
            rec = _symbolic_gate(fam, cfg, rel, lat.constant)
            if rec is not None:
                return rec
    except QSeriesError as exc:
        log.info("skipping %s: %s", fam.key(), exc)
    return None


def _symbolic_gate(fam, cfg, rel, constant) -> IdentityRecord | None:
    full = expand_family(fam, cfg.order)
    if full.lo != 0 or full.coeffs[0] != constant:
        return None
    form = detect_period(prodmake(full), cfg.moduli)
    if form is None or not _relation_matches(rel, form):
        return None
    if full.first_difference(product_to_series(form, cfg.order), cfg.order) is not None:
        return None
    status = "verified" if cfg.order >= 100 else "candidate"
    # coordinates below the working precision are filled in from the verified product
    full_rel = (1,) + tuple(-x for x in form.restate(len(rel.b) - 1).s)
    return IdentityRecord(f"pari:{fam.key()}", fam, {"periodic": form}, "pari-pipeline", status,
                          cfg.order if status == "verified" else 0, relation=full_rel)


def run_pari_search(cfg: SearchConfig, index: KnownIdentityIndex | None = None) -> list[IdentityRecord]:
    """Numeric relation search with the symbolic gate; output sorted by key."""
    fams = pari_instances(cfg)
    found = _pmap(_pari_one, [(f, cfg) for f in fams], cfg)
    return _finish(found, index)


# --------------------------------------------------------- symbolic search


def multiplier_text(name: str, k: int) -> str:
    inner = name[name.index("(") + 1:-1]  # "-q" or "q"
    return f"{name[:name.index('(')]}({inner}^{k})" if k != 1 else name


def _theta_to_factor(term) -> str:
    return f"f({term.a},{term.b})"


def _maple_one(job) -> IdentityRecord | None:
    fam, cfg = job
    if not _integral(fam):
        return None
    try:
        s = expand_family(fam, max(cfg.order, cfg.sparse_cutoff))
        if s.is_zero():
            return None
        for name, k in cfg.multipliers:
            t = (s * classical_theta(name, s.order, k)).truncate(s.order)
            if not is_sparse(t, cfg.sparse_cutoff, cfg.sparse_threshold):
                continue
            hit = match_theta(t, cfg.max_theta_exp)
            if hit is None:
                continue
            term = hit.terms[0]
            form = product(_theta_to_factor(term), (multiplier_text(name, k), -1),
                           coeff=term.coeff, shift=term.shift)
            rec = _checked(fam, {"raw": form}, cfg, s)
            if rec is not None:
                return rec
        if is_sparse(s, cfg.sparse_cutoff, cfg.sparse_threshold):
            hit = match_false_theta(s, cfg.max_theta_exp)
            if hit is not None:
                return _checked(fam, {"theta": hit}, cfg, s)
    except QSeriesError as exc:
        log.info("skipping %s: %s", fam.key(), exc)
    return None


def _checked(fam, forms, cfg, s) -> IdentityRecord | None:
    rec = IdentityRecord(f"maple:{fam.key()}", fam, forms, "maple-pipeline")
    rec = verify_identity(rec, cfg.order, lhs=s)
    if rec.status != "verified":
        return None
    if cfg.order < 100:
        rec = replace(rec, status="candidate", verified_order=0)
    return rec


def maple_instances(cfg: SearchConfig) -> list[SeriesFamily]:
    src = cfg.instances if cfg.instances else maple_grid(cfg.maple)
    seen, out = set(), []
    for fam in src:
        k = fam.key()
        if k not in seen:
            seen.add(k)
            out.append(fam)
    return out


def run_maple_search(cfg: SearchConfig, index: KnownIdentityIndex | None = None) -> list[IdentityRecord]:
    """Sparseness and theta matching over the symbolic-search grid; sorted by key."""
    fams = maple_instances(cfg)
    found = _pmap(_maple_one, [(f, cfg) for f in fams], cfg)
    return _finish(found, index)


# ---------------------------------------------------------- Ramanujan pairs


def _terms(seq, count: int) -> list[int]:
    if callable(seq):
        return [int(seq(n)) for n in range(1, count + 1)]
    return [int(x) for x in list(seq)[:count]]


def check_ramanujan_pair(a_seq: Sequence[int] | Callable[[int], int],
                         b_seq: Sequence[int] | Callable[[int], int], order: int) -> bool:
    """Whether ``prod 1/(1 - q^a_n) = 1 + sum_n q^(b_1+...+b_n) / (q;q)_n`` through ``q^order``.

    Sequences are lists or callables of n >= 1; at most ``order + 1`` terms
    are used, which suffices whenever the entries are positive.
    """
    lhs = QSeries.one(order)
    for a in _terms(a_seq, order + 1):
        if a <= 0:
            raise ValueError("a_n must be positive")
        if a <= order:
            lhs = lhs.div_binomial(-1, a)
    rhs = QSeries.one(order)
    e = 0
    for n, b in enumerate(_terms(b_seq, order + 1), 1):
        e += b
        if e > order:
            if b > 0:
                break
            continue
        t = apply_poch(QSeries.monomial(1, e, order), "q", 1, n, -1)
        rhs = rhs + t
    return lhs.first_difference(rhs, order) is None


def records_to_json(records) -> list[dict]:
    return [r.to_json() for r in records]

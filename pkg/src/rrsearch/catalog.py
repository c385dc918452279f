"""Identity records, their product and theta forms, and the line-delimited store.

A record pairs a series family (the left side) with one or more named right
sides.  Catalog entries carry the theta quotient as printed (``raw``) and the
product it simplifies to (``simplified``); where the printed form is wrong the
correct one is stored next to it as ``corrected_raw`` / ``corrected_simplified``
and verification can be asked to use it instead.

Record file format
------------------
One JSON object per line, keys sorted, no insignificant whitespace::

    id              text, unique label
    key             canonical family key (recomputed on load)
    lhs             series family (a, b, c, tag, factors, start, shift, head)
    forms           {name: form}; a form has "type" in
                    {"product", "periodic", "theta"}
    verified_order  highest order the record is known to verify at (0 if none)
    provenance      paper-catalog | pari-pipeline | maple-pipeline | bailey-transform
    status          verified | candidate | failed
    label           known | new | "" (set from the known-identity index)
    failure         {form name: first differing exponent}
    relation        integer relation b_0..b_L found numerically, or []
    note            free text

Family factors are ``[arg, base, mult, offset, "num"|"den"]`` and keys sort
factors by (base, argument exponent, sign, index form).  A product form is a
list of terms ``{"coeff", "shift", "factors": [[text, power], ...]}`` where
the factor text is one of ``(a1,a2,...;q^k)`` (infinite products),
``f(a,b)``, ``Psi(a,b)`` or a named theta ``f(-q^k)``, ``phi(+-q^k)``,
``psi(+-q^k)``.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from typing import Iterable, Union

from .errors import QSeriesError
from .families import SeriesFamily, expand_family
from .prodmake import PeriodicProductForm
from .products import apply_poch_infinite, classical_theta, false_theta_psi, theta_f
from .series import QSeries, SignedMonomial, as_fraction, _norm
from .theta_match import ThetaExpr

PROVENANCES = ("paper-catalog", "pari-pipeline", "maple-pipeline", "bailey-transform")
STATUSES = ("verified", "candidate", "failed")
CORRECTED = "corrected_"


class RecordFileError(QSeriesError, ValueError):
    """One or more lines of a record file could not be read."""

    def __init__(self, path, problems):
        self.problems = list(problems)
        lines = "; ".join(f"line {n}: {msg}" for n, msg in self.problems)
        super().__init__(f"{path}: {lines}")


# ----------------------------------------------------------------- factors

_THETA2 = re.compile(r"^(f|Psi)\(([^,()]+),([^,()]+)\)$")
_NAMED = re.compile(r"^(f|phi|psi)\(([+-]?)q(?:\^(\d+))?\)$")
_POCH = re.compile(r"^\(([^;()]+);q(?:\^(\d+))?\)$")


@dataclass(frozen=True)
class Factor:
    """One factor of a product term, kept in its text notation."""

    text: str
    power: int = 1

    def __post_init__(self):
        t = self.text.replace(" ", "")
        object.__setattr__(self, "text", t)
        if not (_THETA2.match(t) or _NAMED.match(t) or _POCH.match(t)):
            raise ValueError(f"cannot read factor {self.text!r}")

    def apply(self, s: QSeries) -> QSeries:
        if self.power == 0:
            return s
        m = _POCH.match(self.text)
        if m:
            base = int(m.group(2) or 1)
            for a in m.group(1).split(","):
                s = apply_poch_infinite(s, SignedMonomial.parse(a), base, self.power)
            return s
        t = self._series(s.order - s.lo if s.coeffs else s.order)
        return s * (t ** self.power)

    def _series(self, order) -> QSeries:
        m = _NAMED.match(self.text)
        if m and not _THETA2.match(self.text):
            name, sign, k = m.group(1), m.group(2), int(m.group(3) or 1)
            return classical_theta(f"{name}({sign or ''}q)", order, k)
        kind, a, b = _THETA2.match(self.text).groups()
        build = theta_f if kind == "f" else false_theta_psi
        return build(SignedMonomial.parse(a), SignedMonomial.parse(b), order)

    def __str__(self):
        return self.text if self.power == 1 else f"{self.text}^{self.power}"


@dataclass(frozen=True)
class ProductTerm:
    coeff: Fraction
    shift: int
    factors: tuple

    def expand(self, order: int) -> QSeries:
        s = QSeries.monomial(self.coeff, self.shift, order)
        for f in self.factors:
            s = f.apply(s)
        return s

    def __str__(self):
        body = " ".join(str(f) for f in self.factors) or "1"
        pre = "" if self.coeff == 1 else f"{self.coeff}*"
        if self.shift:
            pre += "q*" if self.shift == 1 else f"q^{self.shift}*"
        return pre + body


@dataclass(frozen=True)
class ProductSum:
    """A finite sum of products of Pochhammer symbols and theta functions."""

    terms: tuple

    def expand(self, order: int) -> QSeries:
        out = QSeries.zero(order)
        for t in self.terms:
            out = out + t.expand(order)
        return out.truncate(order)

    def __str__(self):
        return " + ".join(str(t) for t in self.terms)

    def to_json(self) -> dict:
        return {"type": "product", "terms": [
            {"coeff": str(Fraction(t.coeff)), "shift": t.shift,
             "factors": [[f.text, f.power] for f in t.factors]} for t in self.terms]}

    @classmethod
    def from_json(cls, d: dict) -> "ProductSum":
        return cls(tuple(ProductTerm(_norm(as_fraction(t.get("coeff", "1"))), int(t.get("shift", 0)),
                                     tuple(Factor(x, int(p)) for x, p in t["factors"]))
                         for t in d["terms"]))


def product(*factors, coeff=1, shift=0) -> ProductSum:
    """Single-term product; factors are ``"text"`` or ``("text", power)``."""
    return ProductSum((_term(factors, coeff, shift),))


def product_sum(*terms) -> ProductSum:
    """``terms`` are ``(coeff, shift, [factors...])`` triples."""
    return ProductSum(tuple(_term(fs, c, s) for c, s, fs in terms))


def _term(factors, coeff, shift) -> ProductTerm:
    fs = tuple(Factor(f) if isinstance(f, str) else Factor(*f) for f in factors)
    return ProductTerm(_norm(as_fraction(coeff)), int(shift), fs)


Form = Union[ProductSum, PeriodicProductForm, ThetaExpr]


def form_to_json(form: Form) -> dict:
    if isinstance(form, ProductSum):
        return form.to_json()
    if isinstance(form, PeriodicProductForm):
        return {"type": "periodic", **form.to_json()}
    if isinstance(form, ThetaExpr):
        return {"type": "theta", **form.to_json()}
    raise TypeError(f"not a form: {form!r}")


def form_from_json(d: dict) -> Form:
    kind = d.get("type")
    if kind == "product":
        return ProductSum.from_json(d)
    if kind == "periodic":
        return PeriodicProductForm.from_json(d)
    if kind == "theta":
        return ThetaExpr.from_json(d)
    raise ValueError(f"unknown form type {kind!r}")


def expand_form(form: Form, order: int) -> QSeries:
    if isinstance(form, PeriodicProductForm):
        return form.to_series(order)
    return form.expand(order).truncate(order)


# ----------------------------------------------------------------- records


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    lhs: SeriesFamily
    forms: dict
    provenance: str = "paper-catalog"
    status: str = "candidate"
    verified_order: int = 0
    label: str = ""
    failure: dict = field(default_factory=dict)
    relation: tuple = ()
    note: str = ""

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}")
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}")
        if not self.forms:
            raise ValueError("a record needs at least one right-hand form")
        object.__setattr__(self, "relation", tuple(self.relation))

    @property
    def key(self) -> str:
        return self.lhs.key()

    def active_forms(self, use_corrections: bool = False) -> dict:
        """Forms to check: printed ones, or their corrected versions when asked."""
        out = {}
        for name, f in self.forms.items():
            if name.startswith(CORRECTED):
                continue
            alt = self.forms.get(CORRECTED + name)
            if use_corrections and alt is not None:
                out[CORRECTED + name] = alt
            else:
                out[name] = f
        return out

    def to_json(self) -> dict:
        return {"id": self.id, "key": self.key, "lhs": self.lhs.to_json(),
                "forms": {k: form_to_json(v) for k, v in self.forms.items()},
                "provenance": self.provenance, "status": self.status,
                "verified_order": self.verified_order, "label": self.label,
                "failure": dict(self.failure), "relation": list(self.relation), "note": self.note}

    @classmethod
    def from_json(cls, d: dict) -> "IdentityRecord":
        return cls(d["id"], SeriesFamily.from_json(d["lhs"]),
                   {k: form_from_json(v) for k, v in d["forms"].items()},
                   d.get("provenance", "paper-catalog"), d.get("status", "candidate"),
                   int(d.get("verified_order", 0)), d.get("label", ""),
                   {k: int(v) if Fraction(v).denominator == 1 else str(v)
                    for k, v in d.get("failure", {}).items()},
                   tuple(int(x) for x in d.get("relation", ())), d.get("note", ""))


def _diff_exponent(x):
    x = as_fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def verify_identity(rec: IdentityRecord, order: int = 100, use_corrections: bool = False,
                    lhs: QSeries | None = None) -> IdentityRecord:
    """Re-expand both sides to ``order`` and compare every active form exactly.

    Each form is compared with the series and, for printed forms, with the
    first form too (raw against simplified).  The result is a new record with
    status verified or failed; failures record the first differing exponent.
    """
    s = expand_family(rec.lhs, order) if lhs is None else lhs.truncate(order)
    forms = rec.active_forms(use_corrections)
    failure = {}
    sides = {}
    for name, f in forms.items():
        try:
            sides[name] = expand_form(f, order)
        except QSeriesError as exc:
            failure[name] = f"error: {exc}"
            continue
        d = s.first_difference(sides[name], order)
        if d is not None:
            failure[name] = _diff_exponent(d)
    names = list(sides)
    for a, b in zip(names, names[1:]):
        d = sides[a].first_difference(sides[b], order)
        if d is not None:
            failure.setdefault(f"{a}~{b}", _diff_exponent(d))
    if failure:
        return replace(rec, status="failed", failure=failure)
    return replace(rec, status="verified", failure={}, verified_order=max(order, rec.verified_order)
                   if rec.status == "verified" else order)


# ------------------------------------------------------------------- store


def dumps_record(rec: IdentityRecord) -> str:
    return json.dumps(rec.to_json(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def loads_record(line: str) -> IdentityRecord:
    return IdentityRecord.from_json(json.loads(line))


def load_records(path, strict: bool = True):
    """Read a record file; keys are recomputed from the stored families.

    Malformed lines raise :class:`RecordFileError` naming every bad line.
    With ``strict=False`` the good records and the ``(line, message)``
    problems are returned instead.
    """
    recs, problems = [], []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                recs.append(loads_record(line))
            except (ValueError, KeyError, TypeError) as exc:
                problems.append((n, f"{type(exc).__name__}: {exc}"))
    if strict:
        if problems:
            raise RecordFileError(path, problems)
        return recs
    return recs, problems


def dedup(records: Iterable[IdentityRecord]) -> list[IdentityRecord]:
    """One record per canonical key: the highest verified order wins, first seen on ties."""
    best: dict = {}
    for r in records:
        k = r.key
        if k not in best or r.verified_order > best[k].verified_order:
            best[k] = r
    return list(best.values())


def store_records(path, records: Iterable[IdentityRecord]) -> None:
    """Write a deduplicated record file (replaces the file atomically)."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        for r in dedup(records):
            fh.write(dumps_record(r) + "\n")
    os.replace(tmp, path)


def append_record(path, rec: IdentityRecord) -> None:
    with open(path, "a", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_record(rec) + "\n")


# ------------------------------------------------------------ shipped data


def data_path(name: str):
    return resources.files("rrsearch").joinpath("data").joinpath(name)


def paper_catalog() -> list[IdentityRecord]:
    """The identities of the paper's catalog, with printed and corrected forms."""
    with resources.as_file(data_path("paper_catalog.jsonl")) as p:
        return load_records(p)


def classical_catalog() -> list[IdentityRecord]:
    """Rogers-Ramanujan identities and other prior results used as references."""
    with resources.as_file(data_path("classical.jsonl")) as p:
        return load_records(p)


class KnownIdentityIndex:
    """Canonical family keys of identities already in the literature."""

    def __init__(self, entries: dict | None = None):
        self.entries = dict(entries or {})

    @classmethod
    def from_records(cls, records: Iterable[IdentityRecord]) -> "KnownIdentityIndex":
        return cls({r.key: r.id for r in records})

    @classmethod
    def default(cls) -> "KnownIdentityIndex":
        return cls.from_records(classical_catalog())

    def __contains__(self, key) -> bool:
        if isinstance(key, IdentityRecord):
            key = key.key
        elif isinstance(key, SeriesFamily):
            key = key.key()
        return key in self.entries

    def lookup(self, key: str) -> str | None:
        return self.entries.get(key)

    def label(self, rec: IdentityRecord) -> IdentityRecord:
        known = rec.key in self.entries
        note = rec.note
        if known and not note:
            note = f"rediscovery of {self.entries[rec.key]}"
        return replace(rec, label="known" if known else "new", note=note)

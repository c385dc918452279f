"""Regenerate the shipped record files under src/rrsearch/data.

Run from the repository root: ``python3 tools/build_catalog.py``.  Every
record is verified before it is written; the printed form of an identity is
checked as printed and, where it fails, its corrected form is checked too.
"""

import sys
from fractions import Fraction
from pathlib import Path

from rrsearch.catalog import IdentityRecord, product, product_sum, store_records, verify_identity
from rrsearch.families import HeadTerm, SeriesFamily, den, num
from rrsearch.prodmake import PeriodicProductForm
from rrsearch.theta_match import ThetaExpr, single

DATA = Path(__file__).resolve().parents[1] / "src" / "rrsearch" / "data"
H = Fraction(1, 2)


def fam(a, b, c, *factors, **kw):
    return SeriesFamily(a, b, c, tuple(factors), "catalog", **kw)


def psi_sum(*parts):
    return ThetaExpr(tuple(single("Psi", a, b, shift=t).terms[0] for a, b, t in parts))


PAPER = [
    ("mod2-1", fam(2, -2, 0, num("-q", 2), den("q", 1, 2)), {
        "raw": product("f(1,q^2)", ("psi(-q)", -1)),
        "simplified": product("(-q;q)", "(-1;q^2)")}, ""),
    ("mod2-2", fam(2, 2, 0, num("-q", 2), den("q", 1, 2, 1)), {
        "raw": product("f(1,q^2)", ("psi(-q)", -1), coeff=H),
        "simplified": product("(-q;q)", "(-q^2;q^2)")}, ""),
    ("mod4", fam(2, 2, 0, num("q^2", 2, 1, 1), den("-q^3", 3, 1, 1), den("q", 1)), {
        "raw": product("f(-q^2,-q^2)", ("phi(-q^2)", -1)),
        "simplified": product()}, ""),
    ("mod8", fam(4, -4, 0, num("-q^4", 4), num("q", 2, 2), den("q^4", 4, 2)), {
        "raw": product_sum((1, 0, ["f(-q,-q^7)", ("phi(-q^4)", -1)]),
                           (1, 0, ["f(-q^3,-q^5)", ("phi(-q^4)", -1)])),
        "simplified": product_sum((1, 0, ["(q,q^7;q^8)", ("(q^4;q^8)", -2)]),
                                  (1, 0, ["(q^3,q^5;q^8)", ("(q^4;q^8)", -2)]))}, ""),
    ("mod5", fam(2, 4, 1, num("q", 2), den("-q", 2, 1, 1), den("q^4", 4)), {
        "raw": product("f(1,q^5)", ("psi(-q)", -1), coeff=H),
        "simplified": product("(q^10;q^10)", "(q^20;q^20)", ("(q;q^2)", -1), ("(q^5;q^20)", -1),
                              ("(q^4;q^4)", -1)),
        "corrected_raw": product("f(1,q^5)", ("psi(q)", -1), coeff=H),
        "corrected_simplified": product("(-q^5,-q^15,q^20;q^20)", "(q;q^2)", ("(q^2;q^2)", -1))},
     "printed right side has psi(-q) where the series needs psi(q); the printed product "
     "also disagrees with the printed quotient"),
    ("mod6-ss", fam(2, 0, 0, num("-1", 1), den("q", 2), den("q", 1)), {
        "raw": product("f(-q^3,-q^3)", ("phi(-q)", -1)),
        "simplified": product("(q^3;q^3)", "(q^3;q^6)", ("(q;q)", -1), ("(q;q^2)", -1))}, ""),
    ("mod6-atns", fam(2, 4, 0, num("-q", 2), den("q^4", 4)), {
        "raw": product("f(-q,-q^5)", ("psi(-q)", -1)),
        "simplified": product("(q^6;q^6)", ("(q^4;q^4)", -1), ("(q^3,q^9;q^12)", -1))}, ""),
    ("mod12", SeriesFamily(2, 4, 0, (num("-q", 1, 1, -1), num("-q", 1, 1, 2), den("q", 1, 2, 2)),
                           "catalog", start=1,
                           head=(HeadTerm(Fraction(1), Fraction(0), (num("-q^3", 1, 0, 1), den("q", 1, 0, 2))),)), {
        "raw": product("f(q^3,q^9)", ("f(-q)", -1)),
        "simplified": product("(-q^3,-q^9,q^12;q^12)", ("(q;q)", -1))}, ""),
    ("mod16", SeriesFamily(2, 0, 0, (num("-q^2", 2, 1, -2), num("-q^2", 2, 1, 1), den("-q^2", 2, 1, 0),
                                     den("q", 1, 2)), "catalog", start=2, shift=-2,
                           head=(HeadTerm(Fraction(1), Fraction(0)),
                                 HeadTerm(Fraction(1), Fraction(1), (den("q", 1, 0, 2),)))), {
        "raw": product("f(q^2,q^14)", ("psi(-q)", -1)),
        "simplified": product("(-q^2,-q^14,q^16;q^16)", "(-q;q^2)", ("(q^2;q^2)", -1))},
     "the factor 1 + q^(2n+2) is written (-q^2;q^2)_(n+1) / (-q^2;q^2)_n"),
    ("H19ft", fam(2, 2, 1, num("-q", 2), den("q", 2, 1, 1), den("-q^2", 2)), {
        "theta": single("Psi", "-q^3", "-q")}, ""),
    ("J3ft", fam(1, 3, 1, num("q^3", 3), num("q", 1, 1, 1), den("q", 1, 1, 0), den("q", 1, 2, 2)), {
        "theta": single("Psi", "q^15", "q^3")},
     "the factor 1 - q^(n+1) is written (q;q)_(n+1) / (q;q)_n"),
    ("K6ft", fam(1, 3, 1, num("q", 1, 1, 1), num("-q^2", 2), den("q", 1, 2, 2)), {
        "theta": single("Psi", "-q^8", "-q^24"),
        "corrected_theta": single("Psi", "q^24", "q^8")},
     "printed Psi(-q^8,-q^24) first differs from the series at q^48; Psi(q^24,q^8) matches"),
    ("K4ft", fam(1, 3, 1, num("q", 1), num("-q", 2), den("q", 1, 2, 1)), {
        "theta": psi_sum(("q^22", "q^10", 0), ("q^26", "q^6", 1)),
        "single": single("Psi", "-q^7", "-q")},
     "the two printed false thetas are the even and odd exponent parts of Psi(-q^7,-q)"),
]

CLASSICAL = [
    ("RR1", fam(2, 0, 0, den("q", 1)), {
        "simplified": product(("(q,q^4;q^5)", -1)),
        "periodic": PeriodicProductForm(5, (-1, 0, 0, -1, 0))}, "first Rogers-Ramanujan identity"),
    ("RR2", fam(2, 2, 0, den("q", 1)), {
        "simplified": product(("(q^2,q^3;q^5)", -1)),
        "periodic": PeriodicProductForm(5, (0, -1, -1, 0, 0))}, "second Rogers-Ramanujan identity"),
]


def build(rows, order_for, provenance="paper-catalog"):
    out = []
    for name, lhs, forms, note in rows:
        rec = IdentityRecord(name, lhs, forms, provenance, note=note)
        order = order_for(name)
        printed = verify_identity(rec, order)
        checked = printed if printed.status == "verified" else verify_identity(rec, order, use_corrections=True)
        print(f"{name:10s} printed={printed.status} {printed.failure or ''} final={checked.status}")
        if checked.status != "verified":
            sys.exit(f"{name} does not verify even with corrections: {checked.failure}")
        out.append(checked)
    return out


if __name__ == "__main__":
    store_records(DATA / "paper_catalog.jsonl", build(PAPER, lambda n: 200 if n == "mod4" else 100))
    store_records(DATA / "classical.jsonl", build(CLASSICAL, lambda n: 200))

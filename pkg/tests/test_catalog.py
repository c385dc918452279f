import json

import pytest

from rrsearch.catalog import (Factor, IdentityRecord, KnownIdentityIndex, RecordFileError, classical_catalog,
                              dedup, dumps_record, expand_form, form_from_json, form_to_json, load_records,
                              loads_record, paper_catalog, product, product_sum, store_records,
                              verify_identity)
from rrsearch.families import SeriesFamily, den, expand_family, num
from rrsearch.prodmake import PeriodicProductForm
from rrsearch.products import classical_theta, poch_infinite, theta_f
from rrsearch.series import QSeries

IDS = ["mod2-1", "mod2-2", "mod4", "mod8", "mod5", "mod6-ss", "mod6-atns", "mod12", "mod16", "H19ft", "J3ft",
       "K6ft", "K4ft"]


@pytest.fixture(scope="module")
def cat():
    return {r.id: r for r in paper_catalog()}


def test_catalog_contents(cat):
    assert sorted(cat) == sorted(IDS)
    assert all(r.provenance == "paper-catalog" for r in cat.values())
    assert {r.id for r in classical_catalog()} == {"RR1", "RR2"}


def test_stored_verified_orders(cat):
    for r in list(cat.values()) + classical_catalog():
        assert r.status == "verified" and r.verified_order >= 100


def test_factor_notation():
    assert Factor("f(-q^2,-q^2)").apply(QSeries.one(30)) == theta_f("-q^2", "-q^2", 30)
    assert Factor("phi(-q^2)").apply(QSeries.one(30)) == classical_theta("phi(-q)", 30, 2)
    assert Factor("(q,q^4;q^5)", -1).apply(QSeries.one(30)) == \
        (poch_infinite("q", 5, 30) * poch_infinite("q^4", 5, 30)).invert()
    with pytest.raises(ValueError):
        Factor("g(q)")


def test_form_json_round_trip(cat):
    for r in cat.values():
        for f in r.forms.values():
            assert form_from_json(form_to_json(f)) == f
    p = PeriodicProductForm(5, (-1, 0, 0, -1, 0))
    assert form_from_json(form_to_json(p)) == p


def test_product_sum_expansion():
    f = product_sum((1, 0, ["(q;q)"]), (2, 1, []))
    assert expand_form(f, 10) == poch_infinite("q", 1, 10) + QSeries.monomial(2, 1, 10)
    assert expand_form(product("(q;q)", coeff=3), 10) == poch_infinite("q", 1, 10).scalar_mul(3)


def test_printed_forms(cat):
    for rid in IDS:
        r = cat[rid]
        got = verify_identity(r, 100)
        if rid in ("mod5", "K6ft"):
            assert got.status == "failed"
        else:
            assert got.status == "verified", (rid, got.failure)


def test_printed_failures_are_located(cat):
    assert verify_identity(cat["mod5"], 100).failure == {"raw": 1, "simplified": 1, "raw~simplified": 15}
    assert verify_identity(cat["K6ft"], 100).failure == {"theta": 48}


def test_corrected_forms(cat):
    for rid in IDS:
        assert verify_identity(cat[rid], 100, use_corrections=True).status == "verified", rid


def test_k4ft_dissection(cat):
    r = cat["K4ft"]
    assert expand_form(r.forms["theta"], 150) == expand_form(r.forms["single"], 150)


def test_corrupted_record_fails_at_its_exponent(cat):
    d = cat["mod12"].to_json()
    d["forms"]["simplified"]["terms"][0]["factors"][0][0] = "(-q^3,-q^10,q^12;q^12)"
    bad = verify_identity(IdentityRecord.from_json(d), 100)
    # f(q^3, q^9) has its q^9 term; the corrupted numerator moves it to q^10
    assert bad.status == "failed" and bad.failure["simplified"] == 9


def test_store_round_trip(tmp_path, cat):
    p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    store_records(p1, cat.values())
    store_records(p2, load_records(p1))
    assert p1.read_bytes() == p2.read_bytes()
    for line in p1.read_text(encoding="utf-8").splitlines():
        assert dumps_record(loads_record(line)) == line


def test_shipped_file_is_canonical(tmp_path):
    from importlib import resources
    src = resources.files("rrsearch").joinpath("data").joinpath("paper_catalog.jsonl").read_bytes()
    out = tmp_path / "c.jsonl"
    store_records(out, paper_catalog())
    assert out.read_bytes() == src


def test_dedup_by_alias_key(cat):
    r = cat["mod2-1"]
    alias = IdentityRecord("alias", SeriesFamily(2, -2, 0, (num("-q", 2), den("q", 2), den("q^2", 2))),
                           r.forms, verified_order=150, status="verified")
    assert alias.key == r.key
    out = dedup([r, alias])
    assert len(out) == 1 and out[0].id == "alias"
    assert [x.id for x in dedup([alias, r])] == ["alias"]


def test_malformed_lines(tmp_path, cat):
    good = dumps_record(cat["mod12"])
    p = tmp_path / "bad.jsonl"
    p.write_text("\n".join([good, "{not json", good.replace('"status":"verified"', '"status":"odd"'), good])
                 + "\n", encoding="utf-8")
    with pytest.raises(RecordFileError) as info:
        load_records(p)
    assert [n for n, _ in info.value.problems] == [2, 3]
    recs, problems = load_records(p, strict=False)
    assert len(recs) == 2 and len(problems) == 2


def test_known_index(cat):
    idx = KnownIdentityIndex.default()
    rr = {r.id: r for r in classical_catalog()}
    assert rr["RR1"].key in idx and rr["RR1"].lhs in idx
    found = IdentityRecord("found", rr["RR2"].lhs, rr["RR2"].forms, "pari-pipeline")
    lab = idx.label(found)
    assert lab.label == "known" and "RR2" in lab.note
    assert idx.label(cat["mod12"]).label == "new"
    assert idx.lookup("nope") is None


def test_record_validation(cat):
    with pytest.raises(ValueError):
        IdentityRecord("x", cat["mod12"].lhs, {})
    with pytest.raises(ValueError):
        IdentityRecord("x", cat["mod12"].lhs, cat["mod12"].forms, provenance="elsewhere")

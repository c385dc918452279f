import json

import pytest

from rrsearch.catalog import KnownIdentityIndex, classical_catalog, paper_catalog
from rrsearch.families import SeriesFamily, den
from rrsearch.search import (THETA_MULTIPLIERS, SearchConfig, check_ramanujan_pair, pari_instances,
                             records_to_json, run_maple_search, run_pari_search)

CAT = {r.id: r for r in paper_catalog() + classical_catalog()}
RR1 = SeriesFamily(2, 0, 0, (den("q", 1),), "S")


def test_config_defaults():
    cfg = SearchConfig()
    assert cfg.moduli == (20, 24, 28, 32, 36) and cfg.P == 60 and cfg.coeff_bound == 10
    assert cfg.sparse_cutoff == 55 and cfg.sparse_threshold == 12
    assert len(cfg.multipliers) == 12 and cfg.a_max == 10


def test_config_json(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"a_max": 2, "moduli": [20, 24], "q0": "1/1000",
                             "instances": [RR1.to_json()]}), encoding="utf-8")
    cfg = SearchConfig.load(p)
    assert cfg.a_max == 2 and cfg.moduli == (20, 24) and str(cfg.q0) == "1/1000"
    assert cfg.instances == (RR1,)
    with pytest.raises(ValueError):
        SearchConfig.from_json({"bogus": 1})
    with pytest.raises(ValueError):
        SearchConfig(q0=2)


def test_rr1_only_grid():
    recs = run_pari_search(SearchConfig(instances=(RR1,)), KnownIdentityIndex.default())
    assert len(recs) == 1
    r = recs[0]
    assert r.label == "known" and r.status == "verified" and r.verified_order == 100
    assert len(r.relation) == 21 and r.relation[0] == 1
    assert [j for j in range(1, 21) if r.relation[j]] == [1, 4, 6, 9, 11, 14, 16, 19]
    assert all(r.relation[j] == 1 for j in (1, 4, 6, 9, 11, 14, 16, 19))


def test_empty_grid():
    cfg = SearchConfig(families=(), instances=())
    assert pari_instances(cfg) == []
    assert run_pari_search(cfg) == []


def test_instances_deduplicated():
    other = SeriesFamily(2, 0, 0, (den("q", 1), den("q^2", 2)), "S")
    cfg = SearchConfig(instances=(RR1, RR1, other))
    assert len(pari_instances(cfg)) == 2


def test_maple_examples():
    cfg = SearchConfig(instances=(CAT["mod12"].lhs, CAT["H19ft"].lhs, RR1))
    recs = {r.key: r for r in run_maple_search(cfg)}
    assert str(recs[CAT["mod12"].key].forms["raw"]) == "f(q^3,q^9) f(-q)^-1"
    assert str(recs[CAT["H19ft"].key].forms["theta"]) == "Psi(-q^3, -q)"


def test_non_sparse_instance_gives_nothing():
    fam = SeriesFamily(1, 1, 0, (den("q", 1), den("q", 1)), "S")
    assert run_maple_search(SearchConfig(instances=(fam,))) == []


def test_pipeline_equivalence_on_catalog():
    fams = tuple(r.lhs for r in CAT.values())
    who = {r.key: r.id for r in CAT.values()}
    pari = {who[r.key] for r in run_pari_search(SearchConfig(instances=fams))}
    maple = {who[r.key] for r in run_maple_search(SearchConfig(instances=fams))}
    assert pari - maple == {"mod5"}
    extra = SearchConfig(instances=(CAT["mod5"].lhs,), multipliers=THETA_MULTIPLIERS + (("psi(q)", 1),))
    assert len(run_maple_search(extra)) == 1


def test_emitted_records_reverify():
    fams = tuple(r.lhs for r in CAT.values())
    from rrsearch.catalog import verify_identity
    for r in run_pari_search(SearchConfig(instances=fams)) + run_maple_search(SearchConfig(instances=fams)):
        assert verify_identity(r, 120).status == "verified"


def test_records_json():
    recs = run_pari_search(SearchConfig(instances=(RR1,)))
    assert records_to_json(recs)[0]["provenance"] == "pari-pipeline"


# ---------------------------------------------------------- Ramanujan pairs


def test_ramanujan_pair_rr1():
    parts = [n for n in range(1, 400) if n % 5 in (1, 4)]
    assert check_ramanujan_pair(parts, lambda n: 2 * n - 1, 80)


def test_ramanujan_pair_ones():
    assert not check_ramanujan_pair([1] * 30, [1] * 30, 20)


def test_ramanujan_pair_order_zero():
    assert check_ramanujan_pair([1], [1], 0)

import json
from fractions import Fraction
from importlib import resources

import pytest

from cfspectra import certify
from cfspectra.certify import FAIL, PASS, UNDECIDED
from cfspectra.exact import QuadIrr
from cfspectra.words import cf

CATALOG_TEXT = resources.files("cfspectra").joinpath("data/claims.json").read_text()


def test_catalog_is_well_formed():
    cat = json.loads(CATALOG_TEXT)
    ids = [m["id"] for m in cat]
    assert len(ids) == len(set(ids))
    assert all(m["relation"] in certify.RELATIONS for m in cat)
    assert set(ids) == set(certify.FAMILIES)


def test_no_claim_is_undecided(full_report):
    assert full_report.counts()[UNDECIDED] == 0


def test_statements_come_from_the_catalog(full_report):
    for r in full_report.records:
        assert json.dumps(r.statement)[1:-1] in CATALOG_TEXT


def test_every_claim_produces_rows(full_report):
    seen = {r.id for r in full_report.records}
    assert seen == {m["id"] for m in certify.load_catalog()}


def test_pass_means_positive_margin(full_report):
    for r in full_report.records:
        if r.verdict == PASS and r.relation in (">", "<"):
            assert r.margin.lo > 0, r.id
        if r.verdict == FAIL:
            assert r.margin.lo <= 0 or r.relation == "=", r.id


def test_report_is_deterministic(full_report):
    again = certify.run_catalog("gluing")
    subset = [r for r in full_report.records if r.id.startswith("gluing")]
    assert json.dumps([r.to_json() for r in subset]) == json.dumps(again.to_json())
    assert again.to_text() == certify.run_catalog("gluing").to_text()


def test_parallel_run_matches_sequential():
    seq = certify.run_catalog("sums.tilde")
    par = certify.run_catalog("sums.tilde", workers=2)
    assert seq.to_json() == par.to_json()


def test_filter_selects_by_prefix():
    rep = certify.run_catalog("gluing")
    assert rep.records and all(r.id.startswith("gluing") for r in rep.records)
    assert rep.all_pass
    assert not certify.run_catalog("no-such-claim").records


def test_flipped_relation_is_recorded_as_fail():
    meta = next(m for m in certify.load_catalog() if m["id"] == "gluing.first-instance")
    flipped = dict(meta, relation="<" if meta["relation"] == ">" else ">")
    rep = certify.run_catalog(catalog=[flipped])
    assert rep.records and all(r.verdict == FAIL for r in rep.records)
    assert rep.failing_ids() == ["gluing.first-instance"]


def test_exact_rows():
    meta = {"group": "t", "statement": "t", "relation": ">"}
    rows = [
        certify.exact_row("a", QuadIrr.sqrt(2), 1),
        certify.exact_row("b", QuadIrr.sqrt(2), QuadIrr.sqrt(3)),
        certify.exact_row("c", cf("[0; (1 4)~]"), QuadIrr(-2, 2, 1, 2), "="),
    ]
    out = certify.evaluate_rows("t", meta, rows)
    assert [r.verdict for r in out] == [PASS, FAIL, PASS]
    assert out[0].margin.lo < Fraction(41421357, 10**8) and out[0].margin.hi > Fraction(41421356, 10**8)


def test_range_rows():
    meta = {"group": "t", "statement": "t", "relation": ">"}
    ok = certify.range_row("ok", lambda x: x * x + 1, [(-1, 1)], 0)
    bad = certify.range_row("bad", lambda x: x * x - Fraction(1, 10), [(-1, 1)], 0)
    verdicts = [r.verdict for r in certify.evaluate_rows("t", meta, [ok, bad])]
    assert verdicts == [PASS, FAIL]


def test_range_row_undecided_when_boxes_run_out():
    meta = {"group": "t", "statement": "t", "relation": ">"}
    # positive at every rational point, zero at sqrt(2)
    row = certify.range_row("thin", lambda x: (x * x - 2) * (x * x - 2), [(1, 2)], 0, max_boxes=40)
    (rec,) = certify.evaluate_rows("t", meta, [row])
    assert rec.verdict == UNDECIDED


@pytest.mark.parametrize("prefix", ["endpoints", "filter", "k3"])
def test_small_groups(prefix):
    rep = certify.run_catalog(prefix)
    assert rep.records


def test_endpoint_identities_pass():
    rep = certify.run_catalog("endpoints")
    assert rep.all_pass and len(rep.records) >= 9

from __future__ import annotations

import json

import pytest

from conftest import graph, group
from nilpotent_graph.verify import (
    PredictorDomainError,
    merge_reports,
    predict_kappa_dihedral,
    predict_kappa_psl2,
    predict_sn_disconnected,
    quotient_model,
    verify_family,
    verify_group,
    verify_product,
    verify_quotient_iso,
)


def test_dihedral_predictor():
    assert [predict_kappa_dihedral(n) for n in (3, 5, 6, 12, 24, 15)] == [4, 6, 4, 4, 4, 16]
    for bad in (2, 4, 8, 16):
        with pytest.raises(PredictorDomainError):
            predict_kappa_dihedral(bad)


def test_psl_predictor():
    assert [predict_kappa_psl2(q) for q in (2, 3, 4, 5, 7, 8, 9, 11, 13)] == [4, 5, 21, 21, 37, 73, 47, 79, 93]
    with pytest.raises(PredictorDomainError):
        predict_kappa_psl2(6)


def test_symmetric_predictor():
    assert [predict_sn_disconnected(n) for n in range(3, 11)] == [True, True, True, True, True, True, False, False]
    with pytest.raises(PredictorDomainError):
        predict_sn_disconnected(2)


@pytest.mark.parametrize("spec", ["S:3", "S:4", "D:12", "PSL2:5", "S:3 x C:2"])
def test_verify_group_passes(spec):
    r = verify_group(group(spec), graph(spec))
    assert r.passed, [c.to_dict() for c in r.failures]


def test_report_json_schema():
    r = verify_group(group("S:3"), graph("S:3"))
    d = json.loads(r.to_json())
    assert set(d) == {"subject", "checks", "elapsed_ms"}
    for c in d["checks"]:
        assert set(c) == {"name", "paper_ref", "status", "expected", "actual"}
        assert c["status"] in ("pass", "fail", "skipped")
    merged = merge_reports("x", [r, r])
    assert len(merged.checks) == 2 * len(r.checks)


def test_products_and_quotients():
    assert verify_product(group("S:3"), group("C:2")).passed
    assert verify_product(group("S:3"), group("S:3")).passed
    for spec in ["D:12", "S:3 x C:2", "S:4"]:
        assert verify_quotient_iso(group(spec)).passed
    with pytest.raises(ValueError):
        verify_quotient_iso(group("C:6"))


def test_quotient_model_map_is_bijective():
    m = quotient_model(group("D:12"))
    assert sorted(m["map"].tolist()) == list(range(24))
    assert m["quotient"].order == 6


def test_family_skips_are_not_failures():
    r = verify_family("dihedral", range(3, 10))
    assert r.passed
    assert r.status_of("kappa[D:4]") == "skipped" and r.status_of("kappa[D:9]") == "pass"
    r = verify_family("symmetric", range(7, 8))
    assert r.status_of("disconnected[S:7]") == "skipped"

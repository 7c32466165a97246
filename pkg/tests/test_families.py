import dataclasses

import pytest

from surgkit.services.core import FamilyError
from surgkit.services.exact import Fraction, cf_eval
from surgkit.services.families import (
    STATUS_FAIL, STATUS_INFO, STATUS_PASS, family_pk, proposition_params, specialize_check, specialize_symbolic,
    square_identity, surgery_cf, verify_record,
)


def _statuses(entries):
    return {e.check: e.status for e in entries}


def test_family_pk_table2(catalog):
    rec = family_pk("T2", "A1", {"l": 1}, catalog)
    assert (rec.p, rec.k, rec.k_raw) == (22, 9, 9)
    assert rec.gprime == -1
    assert rec.cf == [2, 2, 7, -1]
    assert rec.ambient.triple == (2, 3, 5)


@pytest.mark.parametrize("table, type_tag, params, expected", [
    ("T4", "H1", {"n": 1, "sigma": -1, "l": 1}, (137, 13)),
    ("T5", "A2", {"s": 1, "sigma": 1, "l": 1}, (28, 11)),
    ("P", "A", {"l": -1}, (17, -5)),
])
def test_family_pk_values(catalog, table, type_tag, params, expected):
    rec = family_pk(table, type_tag, params, catalog)
    assert (rec.p, rec.k_raw) == expected
    assert rec.k == abs(expected[1]) % rec.p


def test_family_pk_rejects_zero_length(catalog):
    with pytest.raises(FamilyError):
        family_pk("T2", "A1", {"l": 0}, catalog)


def test_sporadic_row_ignores_length(catalog):
    rec = family_pk("T2", "K", {}, catalog)
    assert rec.cf == [6, 2, -2, -3, -3]
    assert "l" not in rec.params


def test_verify_record_passes(catalog):
    for table in ("T2", "T3"):
        rec = family_pk(table, "A1", {"l": 1}, catalog)
        entries = verify_record(rec, catalog.row(table, "A1"))
        statuses = _statuses(entries)
        assert STATUS_FAIL not in statuses.values(), entries
        assert statuses["cf_order"] == STATUS_PASS
        assert statuses["dual"] == STATUS_PASS
        assert statuses["b_pattern"] == STATUS_PASS


def test_verify_record_detects_wrong_k(catalog):
    rec = family_pk("T2", "A1", {"l": 1}, catalog)
    tampered = dataclasses.replace(rec, k=3, k_raw=3)
    statuses = _statuses(verify_record(tampered, catalog.row("T2", "A1")))
    assert statuses["gcd"] == STATUS_PASS
    assert statuses["dual"] == STATUS_FAIL


def test_verify_record_reference_lens(catalog):
    rec = family_pk("P", "A", {"l": -1}, catalog)
    statuses = _statuses(verify_record(rec, catalog.row("P", "A")))
    assert statuses["reference"] == STATUS_PASS
    assert statuses["proposition"] == STATUS_PASS


@pytest.mark.parametrize("l", [-3, -1, 1, 2, 5])
def test_surgery_cf_a(l):
    assert surgery_cf("A", {"l": l, "beta": 3, "a": 5}) == [2, l + 1, 7, -l]
    assert surgery_cf("A", {"l": l, "beta": 3, "a": 7}) == [2, l + 1, 9, -l]


def test_surgery_cf_slot_forms():
    assert surgery_cf("C1D1", {"l": 2, "gamma": [5, 2], "m": 2, "b": 4}) == [2, 5, 2, -3, 4, -2]
    assert surgery_cf("A", {"l": 1, "beta": "3", "a": 5}) == surgery_cf("A", {"l": 1, "beta": "[3]", "a": 5})
    assert surgery_cf("K", {"alpha": 5}) == [6, 2, -2, -3, -3]
    assert cf_eval(surgery_cf("K", {"alpha": 5})) == Fraction.of(191, 34)
    assert surgery_cf("GS", {"l": 1, "alpha": Fraction.of(1, 1), "m": 1, "c": 3}) == [1, 2, 2, -1, 3, -1]


def test_surgery_cf_rejects():
    with pytest.raises(FamilyError):
        surgery_cf("Z", {"l": 1})
    with pytest.raises(FamilyError):
        surgery_cf("A", {"l": 0, "beta": 3, "a": 5})
    with pytest.raises(FamilyError):
        surgery_cf("A", {"l": 1, "a": 5})
    with pytest.raises(FamilyError):
        surgery_cf("A", {"l": 1, "beta": 3, "a": True})


def test_proposition_params(catalog):
    kind, slots = proposition_params(catalog.row("P", "C1D1"), {"l": 2})
    assert kind == "C1D1"
    assert slots == {"gamma": [5, 2], "m": 2, "b": 4, "l": 2}


@pytest.mark.parametrize("type_tag, l", [("A1", 1), ("J", 1), ("A1", -1), ("H1", 3)])
def test_square_identity(catalog, type_tag, l):
    assert square_identity(type_tag, l, catalog)


def test_specializations_hold_symbolically(catalog):
    for spec in catalog.specializations:
        entries = specialize_symbolic(spec, catalog)
        assert entries
        assert all(e.status == STATUS_PASS for e in entries), [e for e in entries if e.status != STATUS_PASS]


def test_specialize_check_pointwise(catalog):
    spec = catalog.specializations[0]
    entries = specialize_check(spec, [{"l": l} for l in (-2, -1, 1, 2)], catalog)
    assert entries
    assert all(e.status != STATUS_FAIL for e in entries)


@pytest.mark.parametrize("table, params", [
    ("T3", {"l": -1}),
    ("T4", {"l": -1, "n": 1, "sigma": -1}),
    ("T4", {"l": -1, "n": 2, "sigma": 1}),
    ("T5", {"l": -1, "s": 1, "sigma": 1}),
    ("T5", {"l": -1, "s": 2, "sigma": -1}),
    ("T6", {"l": -1, "n": 2, "s": 1, "sigma": 1}),
])
def test_j_rows_at_minus_one(catalog, table, params):
    # 命题槽位 -ℓ-1 在 ℓ = -1 时为 0
    rec = family_pk(table, "J", params, catalog)
    entries = {e.check: e for e in verify_record(rec, catalog.row(table, "J"))}
    assert entries["proposition"].status == STATUS_PASS, entries["proposition"].witness
    assert entries["proposition"].witness["identical"]
    assert entries["cf_order"].status == STATUS_PASS
    assert entries["dual"].status == STATUS_PASS


def test_surgery_cf_zero_internal_length():
    slots = {"alpha": [6, -1], "beta": [2, -1], "l": 0}
    with pytest.raises(FamilyError):
        surgery_cf("J", slots)
    assert surgery_cf("J", slots, allow_zero_l=True) == [-1, 6, 1, 3, 3, 0, 2, -1]


def _specialization(catalog, source, target):
    return next(s for s in catalog.specializations if (s.source, s.target) == (source, target))


def test_specialize_check_statuses(catalog):
    spec = _specialization(catalog, "T4", "T2")
    entries = specialize_check(spec, [{"l": 0}], catalog)
    banded = [e for e in entries if not e.row.endswith(".K")]
    assert banded
    assert all(e.status == STATUS_INFO for e in banded)

    # 缺参数不是条件排除，记失败
    spec = _specialization(catalog, "T6", "T5")
    entries = specialize_check(spec, [{"l": 1}], catalog)
    assert entries
    assert all(e.status == STATUS_FAIL for e in entries)
    assert all("error" in e.witness for e in entries)


@pytest.mark.parametrize("table, type_tag, params", [
    ("T3", "H1", {"l": 1}),
    ("T3", "A2", {"l": 2}),
    ("T3", "B", {"l": -2}),
    ("T3", "E1", {"l": 1}),
    ("T4", "J", {"l": 2, "n": 2, "sigma": -1}),
    ("T5", "A2", {"l": 1, "s": 3, "sigma": 1}),
    ("T5", "I1", {"l": -2, "s": 2, "sigma": 1}),
    ("P", "C1D1", {"l": 1}),
])
def test_b_pattern_with_padding(catalog, table, type_tag, params):
    # 前缀或重复后缀只在 b 两端补 0
    rec = family_pk(table, type_tag, params, catalog)
    entries = {e.check: e for e in verify_record(rec, catalog.row(table, type_tag))}
    assert entries["b_pattern"].status == STATUS_PASS, entries["b_pattern"].witness
    assert entries["b_pattern"].witness["matched"]


def test_b_pattern_mismatch_fails(catalog):
    row = dataclasses.replace(catalog.row("T3", "H1"), b_pattern=(0, 1, 1, 1))
    rec = family_pk("T3", "H1", {"l": 1}, catalog)
    entry = next(e for e in verify_record(rec, row) if e.check == "b_pattern")
    assert entry.status == STATUS_FAIL
    assert entry.witness["expected"] == [[0, 1, 1, 1]]


def test_b_pattern_row_without_fingerprint(catalog):
    rec = family_pk("T5", "B2", {"l": 1, "s": 1, "sigma": 1}, catalog)
    entry = next(e for e in verify_record(rec, catalog.row("T5", "B2")) if e.check == "b_pattern")
    assert entry.status == STATUS_INFO
    assert "skipped" in entry.witness

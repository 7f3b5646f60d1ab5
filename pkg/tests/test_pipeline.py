import json

import pytest

from quandle16p import pipeline
from quandle16p.quandle import affine, direct_product
from quandle16p.quiso import fingerprint


@pytest.fixture(scope="module")
def report3():
    return pipeline.table1(3)


def test_table1_p3_counts(report3):
    assert report3.counts == {"si": 1, "dd": 9, "sr_not_dd": 0}
    assert report3.ok
    assert report3.checks["counts_match_reference"]
    assert report3.exhaustive


def test_report_json_shape(report3, tmp_path):
    data = json.loads(report3.to_json())
    assert data["p"] == 3
    assert set(data["counts"]) == {"si", "dd", "sr_not_dd"}
    assert len(data["families"]) == sum(data["counts"].values())
    assert all({"fingerprint", "table_file"} <= set(f) for f in data["families"])
    assert {"tier", "exhaustive"} <= set(data["coverage"])
    assert "non_chain_branch" in data["coverage"]
    assert data["timings_ms"]["total"] > 0


def test_counts_match_list_lengths(report3):
    for fam, members in report3.families.items():
        assert report3.counts[fam] == len(members)
        for m in members:
            assert m.quandle.latin and m.quandle.n == 48


def test_tables_are_written(tmp_path):
    rep = pipeline.table1(3, tables_dir=tmp_path)
    files = sorted(p.name for p in tmp_path.iterdir())
    assert len(files) == 10
    assert "si_3_000.tbl" in files and "dd_3_008.tbl" in files
    assert all(m.table_file for ms in rep.families.values() for m in ms)


def test_sr_family_empty_unless_one_mod_three():
    assert pipeline.sr_family(3) == []
    assert pipeline.sr_family(5) == []
    assert pipeline.sr_family(11) == []


@pytest.mark.parametrize("p,count", [(3, 9), (5, 27)])
def test_dd_assembly_small(p, count):
    assert len(pipeline.dd_assembly(p)) == count


def test_member_certificate_rejects_wrong_size():
    q = direct_product(affine(2, modulus=3), affine(2, modulus=5))
    with pytest.raises(pipeline.CertificateError) as err:
        pipeline._check_member("dd", 4, q, 3, fingerprint(q))
    assert err.value.family == "dd" and err.value.index == 4
    assert "size" in err.value.reason


def test_bad_prime_rejected():
    with pytest.raises(ValueError):
        pipeline.table1(9)


@pytest.mark.slow
@pytest.mark.parametrize("p,expected", sorted(pipeline.EXPECTED_COUNTS.items()))
def test_table1_rows(p, expected):
    rep = pipeline.table1(p)
    assert tuple(rep.counts[f] for f in pipeline.FAMILIES) == expected
    assert rep.ok
    if p > pipeline.FULL_CHECK_MAX_P:
        assert rep.dedupe["random_confirmations"] == pipeline.RANDOM_CONFIRMATIONS

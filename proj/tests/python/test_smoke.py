import json

import pytest

import ldg


def test_square_mesh_counts():
    m = ldg.square_mesh(2)
    assert (m.num_vertices, m.num_triangles, m.num_edges) == (9, 8, 16)
    assert m.euler_characteristic == 1
    fine = m.refine()
    assert fine.num_triangles == 32
    assert fine.h == pytest.approx(m.h / 2)


def test_annulus_mesh_is_a_ring():
    m = ldg.annulus_mesh(0.5, 1.0, 16, 2)
    assert m.euler_characteristic == 0
    assert m.num_boundary_edges == 32


def test_eoc_halving():
    h = [0.4, 0.2, 0.1]
    errs = [16.0, 4.0, 1.0]
    assert ldg.eoc(errs, h) == pytest.approx([2.0, 2.0])


def test_config_roundtrip_and_errors():
    text = ldg.default_config("annulus")
    cfg = json.loads(text)
    assert cfg["n-seg"] == 32 and cfg["levels"] == 5
    assert ldg.normalize_config(text) == text
    with pytest.raises(ldg.ConfigError, match="levels"):
        ldg.normalize_config('{"levels": 0}')
    with pytest.raises(ValueError):
        ldg.normalize_config('{"bogus": 1}')


def test_small_polynomial_study(tmp_path):
    res = ldg.run(k=1, levels=3, n=2, out=str(tmp_path), vtk=False)
    assert res["failures"] == []
    (table,) = res["tables"]
    rows = table["records"]
    assert len(rows) == 3
    errs = [r["err_dg"] for r in rows]
    assert errs[0] > errs[1] > errs[2]
    assert rows[0]["order_dg"] == pytest.approx(1.0, abs=0.3)
    assert rows[-1]["order_dg"] is None
    csvs = [f for f in res["files"] if f.endswith(".csv")]
    assert len(csvs) == 1
    with open(csvs[0]) as fh:
        assert len(fh.read().splitlines()) == 4

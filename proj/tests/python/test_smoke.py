import pytest

import mmsets


MOTZKIN = [(0, 0), (2, 4), (4, 2)]
HURWITZ = [(0, 0), (4, 0), (0, 4)]


def test_mms_and_classification():
    r = mmsets.mms(MOTZKIN)
    assert r["classification"] == "M"
    assert r["mms_points"] == [[0, 0], [1, 2], [2, 1], [2, 4], [3, 3], [4, 2]]
    assert r["h_ratio"] == "0/1"
    assert mmsets.mms(HURWITZ, algorithm="fixed-point")["conv_count"] == 15


def test_geometry_helpers():
    assert mmsets.is_even((2, 4))
    assert not mmsets.is_even((1, 2))
    assert mmsets.midpoint_set(MOTZKIN) == [[1, 2], [2, 1], [3, 3]]
    assert len(mmsets.lattice_points(MOTZKIN)) == 10
    assert mmsets.contains(MOTZKIN, (2, 2))
    assert not mmsets.contains(MOTZKIN, (2, 0))


def test_canonical_keys():
    assert mmsets.generator_matrix([(0, 0), (2, 0), (4, 6)]) == [[2, 4], [0, 6]]
    assert mmsets.hnf([[2, 4], [4, 2]]) == [[2, 4], [0, 6]]
    assert mmsets.canonical_key(MOTZKIN) == mmsets.canonical_key([(0, 0), (2, 0), (4, 6)])
    assert not mmsets.equivalent([(0, 0), (2, 0), (0, 2)], [(0, 0), (2, 0), (0, 4)])


def test_enumeration_and_sampling():
    assert mmsets.vertex_list(2, 4) == [[0, 2], [0, 4], [2, 0], [2, 2], [4, 0]]
    assert mmsets.count_simplices(2, 4) == 8
    assert len(mmsets.enumerate(2, 4)) == 8
    assert sum(len(mmsets.enumerate(2, 4, p)) for p in range(5)) == 8
    assert mmsets.sample(3, 8, 1, 10) == mmsets.sample(3, 8, 1, 10)


def test_sos_decisions():
    assert not mmsets.circuit_is_sos(MOTZKIN, (2, 2))
    assert mmsets.circuit_is_sos(HURWITZ, (1, 1))
    assert mmsets.sonc_simplex_is_sos(HURWITZ, [((1, 1), "NEG"), ((2, 1), "NEG")])
    assert mmsets.sos_bound_is_exact(MOTZKIN, [((2, 2), "POS")])
    with pytest.raises(ValueError):
        mmsets.sonc_simplex_is_sos(MOTZKIN, [((2, 2), "POS")])
    with pytest.raises(ValueError):
        mmsets.circuit_is_sos(MOTZKIN, (1, 2))


def test_pipeline_and_conjecture(tmp_path):
    res = mmsets.run_pipeline(3, 10, workers=2)
    assert res["simplicial"]["total_count"] == 21636
    assert res["lattices"]["total_count"] == 782
    assert abs(res["lattices"]["decrease_factor"] - 27.667519) < 1e-5
    out = mmsets.run_pipeline(2, 6, out_dir=str(tmp_path / "run"))
    assert (tmp_path / "run" / "store.jsonl").exists()
    assert out["simplicial"]["m_count"] == 1
    rep = mmsets.check_conjecture(8)
    assert rep["passed"] and rep["counterexamples"] == []


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        mmsets.mms([(0, 0), (1, 1), (4, 2)])
    with pytest.raises(ValueError):
        mmsets.vertex_list(2, 3)

import numpy as np
import pytest

from rieszlat import kernels as K
from rieszlat import transforms as T
from rieszlat.quadrature import QuadConfig

HK = K.KernelKind("hilbert_dis", 1, 1)
PH = K.KernelKind("prob_hilbert", 1, 1)


def test_sequence_basics():
    f = T.Sequence({(1,): 2.0, (3,): 0.0}, 1)
    assert f[(1,)] == 2.0 and f[(3,)] == 0.0 and (3,) not in f.support
    g = f.shift(2)
    assert g[(3,)] == 2.0
    s = f + f.scale(0.5)
    assert s[(1,)] == 3.0


def test_delta_and_lp():
    f = T.delta(0, 2)
    assert f[(0, 0)] == 1.0
    assert T.lp_norm(f, 2) == 1.0
    g = T.Sequence({(0, 0): 3.0, (1, 1): 4.0}, 2)
    assert T.lp_norm(g, 2) == 5.0


def test_apply_kernel_matches_reference():
    rng = np.random.default_rng(0)
    f = T.Sequence({(int(j),): float(rng.standard_normal())
                    for j in range(-3, 4)}, 1)
    g = T.apply_kernel(f, HK, radius=80)
    ref = T.hdis_apply_reference(f, radius=80)
    # agreement holds where the truncated kernel window covers all of supp(f)
    diff = max(abs(g[(n,)] - ref[(n,)]) for n in range(-40, 41))
    assert diff < 1e-14
    assert g.tail_bound >= 0.0


def test_cot_bound():
    assert T.cot_bound(2) == pytest.approx(1.0)
    assert T.cot_bound(4) == pytest.approx(np.tan(3 * np.pi / 8))
    assert T.cot_bound(4 / 3) == pytest.approx(T.cot_bound(4))
    with pytest.raises(ValueError):
        T.cot_bound(1.0)


def test_norm_ratio_hilbert_p2():
    rng = np.random.default_rng(1)
    f = T.Sequence({(int(j),): float(rng.standard_normal())
                    for j in range(-4, 5)}, 1)
    r = T.norm_ratio(f, HK, 2, radius=150)
    assert r <= 1.0 + 1e-10


def test_power_iteration_lower_bound():
    lb, witness = T.norm_lower_bound_search(HK, 2, box=128, budget=100)
    assert 0.9 < lb <= 1.0 + 1e-10
    assert T.norm_ratio(witness, HK, 2) <= 1.0 + 1e-8


def test_general_p_search_returns_bound():
    lb, witness = T.norm_lower_bound_search(HK, 3, budget=40, seed=2)
    assert lb > 0.0
    assert T.norm_ratio(witness, HK, 3) == pytest.approx(lb, rel=1e-10)


def test_csv_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("DISCT_CACHE", str(tmp_path))
    saved = T._MEM_CACHE.pop(1, None)
    try:
        v1 = T.kernel_value(PH, 1, QuadConfig(1e-6, 1e-8))
        assert (tmp_path / "kernels_d1.csv").exists()
        T._MEM_CACHE.pop(1)
        v2 = T.kernel_value(PH, 1)  # served from disk
        assert v1 == v2
        val, err = T.kernel_entry(PH, 1)
        assert val == v1 and err >= 0.0
        header = (tmp_path / "kernels_d1.csv").read_text().splitlines()[0]
        assert header == "d,kind,k,n1,value,abs_err"
    finally:
        T._MEM_CACHE.pop(1, None)
        if saved is not None:
            T._MEM_CACHE[1] = saved


def test_kernel_value_closed_forms():
    assert T.kernel_value(HK, 5) == pytest.approx(1 / (5 * np.pi))
    cz = K.KernelKind("cz_riesz", 2, 1)
    assert T.kernel_value(cz, (1, 0)) == pytest.approx(1 / (2 * np.pi))


def test_littlewood_paley_delta():
    r = T.littlewood_paley_check(T.delta(0, 1), T.delta(1, 1), 2,
                                 QuadConfig(1e-4, 1e-5))
    assert r["ok"]
    assert 0.0 < r["lhs"] < r["rhs"]

import pytest

from surgkit.services.core import LensError
from surgkit.services.exact import gcd_ext
from surgkit.services.lens import (
    LensSpace, dual_check, dual_sign, homeo, lens_normalize, lens_orbit, mod_inverse,
    normalize_dual_class, surgery_param,
)


def test_surgery_param_22_9():
    param = surgery_param(22, 9)
    assert param.kset == [5, 9, 13, 17]
    assert param.kmin == 5
    assert param.k_squared == 15
    assert param.frakc == -48
    assert param.to_json()["kset"] == [5, 9, 13, 17]


def test_surgery_param_small():
    assert surgery_param(5, 2).kset == [2, 3]


def test_surgery_param_frakc_integral():
    # gcd(p,k) = 1 时 (k-1)(k+1-p) 总是偶数
    for p in range(2, 40):
        for k in range(1, p):
            if gcd_ext(p, k)[0] == 1:
                assert 2 * surgery_param(p, k).frakc == (k - 1) * (k + 1 - p)
    assert surgery_param(23, 4).frakc == -27


@pytest.mark.parametrize("p, k", [(4, 2), (1, 1), (9, 6)])
def test_surgery_param_rejects(p, k):
    with pytest.raises(LensError):
        surgery_param(p, k)


def test_mod_inverse():
    assert mod_inverse(9, 22) == 5
    assert mod_inverse(-1, 7) == 6
    with pytest.raises(LensError):
        mod_inverse(2, 4)


def test_lens_normalize():
    assert lens_normalize(5, 9) == LensSpace(5, 4, False)
    assert lens_normalize(-5, -4) == LensSpace(5, 4, True)
    assert lens_normalize(17, -8) == LensSpace(17, 9, False)
    with pytest.raises(LensError):
        lens_normalize(0, 1)
    with pytest.raises(LensError):
        lens_normalize(6, 4)


def test_homeo_orientation():
    assert homeo(LensSpace(7, 2), LensSpace(7, 4))
    assert not homeo(LensSpace(5, 1), LensSpace(5, 4))
    assert homeo(LensSpace(5, 1), LensSpace(5, 4), oriented=False)
    assert homeo(LensSpace(17, 9), LensSpace(17, 15), oriented=False)
    assert not homeo(LensSpace(7, 1), LensSpace(5, 1), oriented=False)


def _assert_orbits(limit):
    for p in range(2, limit):
        units = [q for q in range(1, p) if gcd_ext(p, q)[0] == 1]
        for q1 in units:
            inverse = next(x for x in units if (x * q1) % p == 1)
            oriented = {q1, inverse}
            unoriented = oriented | {p - q1, p - inverse}
            assert set(lens_orbit(p, q1)) == oriented
            for q2 in units:
                assert homeo(LensSpace(p, q1), LensSpace(p, q2)) == (q2 in oriented)
                assert homeo(LensSpace(p, q1), LensSpace(p, q2), oriented=False) == (q2 in unoriented)


def test_homeo_matches_brute_force_orbits():
    _assert_orbits(60)


@pytest.mark.slow
def test_homeo_orbits_up_to_300():
    _assert_orbits(301)


def test_dual_check_trefoil():
    assert dual_check(5, 4, 2)
    assert dual_sign(5, 4, 2) == 1
    assert dual_sign(5, 1, 2) == -1
    assert not dual_check(5, 1, 2)
    assert dual_check(5, 1, 2, oriented=False)


def test_dual_sign_table_rows():
    # Σ(2,3,5) 的 A1 在 ℓ=1: L(22,15)，k=9
    assert dual_sign(22, 15, 9) == 1
    # Σ(2,3,7) 的 A1 在 ℓ=1: L(28,19)，k=11，q ≡ -k^2
    assert dual_sign(28, 19, 11) == -1
    assert dual_sign(22, 15, 3) == 0


def test_normalize_dual_class():
    assert normalize_dual_class(8, -3) == 3
    assert normalize_dual_class(22, 31) == 9
    with pytest.raises(LensError):
        normalize_dual_class(5, 10)

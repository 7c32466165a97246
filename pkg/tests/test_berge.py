import pytest
import sympy as sym

from surgkit.services.berge import berge_classify, berge_instances, quadratic_dual_identity
from surgkit.services.core import LensError


def test_classify_examples():
    assert "IX" in berge_classify(32, 13)
    assert "I" in berge_classify(7, 1)
    assert "X" in berge_classify(37, 14)


@pytest.mark.parametrize("l", range(1, 11))
def test_quadratic_rows(l):
    assert "VII/VIII" in berge_classify(5 * l * l + 5 * l + 1, 5 * l + 2)
    assert "IX" in berge_classify(22 * l * l + 9 * l + 1, 11 * l + 2)
    assert "X" in berge_classify(22 * l * l + 13 * l + 2, 11 * l + 3)


def test_classify_rejects_out_of_range():
    with pytest.raises(LensError):
        berge_classify(5, 5)
    with pytest.raises(LensError):
        berge_classify(5, 0)


def test_instances_classify_as_generated():
    instances = berge_instances(2, 8)
    assert instances
    assert {tag for tag, _, _ in instances} >= {"I", "III", "IV", "V", "VII/VIII"}
    for tag, p, k in instances:
        assert tag in berge_classify(p, k), (tag, p, k)


def test_dual_identity():
    l = sym.Symbol("l")
    assert quadratic_dual_identity(5 * l**2 + 5 * l + 1, 5 * l + 2, l) == (1, -1, 5)
    assert quadratic_dual_identity(22 * l**2 + 9 * l + 1, 11 * l + 2, l) is None

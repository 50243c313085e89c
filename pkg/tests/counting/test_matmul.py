from fractions import Fraction

from numpy import array, int64
from numpy.random import default_rng
from pytest import mark, raises

from leafcomm.core import ValidationError
from leafcomm.counting import BACKENDS, matmul, register_backend


@mark.parametrize("backend", BACKENDS)
def test_matmul_01(backend: str):
    rng = default_rng(3)
    a = rng.integers(-5, 5, size=(300, 7)).astype(int64)
    b = rng.integers(-5, 5, size=(7, 4)).astype(int64)
    assert (matmul(a, b, backend) == a @ b).all()


@mark.parametrize("backend", BACKENDS)
def test_matmul_02_exact(backend: str):
    big = 1 << 40
    a = array([[big, big], [1, -big]], dtype=int64)
    b = array([[big], [big]], dtype=int64)
    result = matmul(a, b, backend)
    assert result[0, 0] == 2 * big * big
    assert result[1, 0] == big - big * big

    halves = array([[Fraction(1, 2), Fraction(1, 3)]], dtype=object)
    assert matmul(halves, array([[6], [6]], dtype=object), backend)[0, 0] == 5


def test_matmul_03_invalid():
    with raises(ValidationError):
        matmul([[1, 2]], [[1, 2]])
    with raises(ValidationError):
        matmul([1, 2], [[1], [2]])
    with raises(ValidationError):
        matmul([[1]], [[1]], "strassen")


def test_register_backend_01():
    register_backend("transposed", lambda a, b: (b.T @ a.T).T)
    assert matmul([[1, 2]], [[3], [4]], "transposed").tolist() == [[11]]

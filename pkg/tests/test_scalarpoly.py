'''
Tests polynomials, quadratic extensions, the Vandermonde solver and the limits at ``h = 0``.
'''

import pytest
import sympy

from simplehiggs.exceptions import DuplicateNode, FactorizationUnavailable, OddPart, PoleAtLimit, SingularSystem
from simplehiggs.scalar import get_field
from simplehiggs.scalarpoly import (
    Z,
    Poly,
    QuadExt,
    limit_h0,
    limit_poly,
    limit_vanishing,
    linear_solve,
    poly_from_expr,
    poly_roots,
    vandermonde_inverse_apply,
)
from simplehiggs.types import ProjectiveValue

QQ = get_field()


def _p(*coeffs, bound=None):
    return Poly(coeffs, QQ, bound)


class TestPoly:
    '''
    Tests the polynomial arithmetic.
    '''
    def test_trailing_zeros(self):
        f = _p(1, 2, 0, 0, bound=4)
        assert f.degree == 1
        assert f.bound == 4
        assert f.to_json() == ['1', '2', '0', '0', '0']

    def test_bound_exceeded(self):
        with pytest.raises(ValueError) as excinfo:
            _p(1, 2, 3, bound=1)
        assert 'exceeds the bound' in str(excinfo.value)

    def test_zero(self):
        assert _p().is_zero()
        assert _p(0, 0).degree == -1

    def test_add_sub(self):
        f, g = _p(1, 2, bound=2), _p(0, -2, 5)
        assert f + g == _p(1, 0, 5)
        assert (f + g).bound == 2
        assert f - f == _p()
        assert 3 + f == _p(4, 2)
        assert 1 - f == _p(0, -2)

    def test_mul(self):
        f = _p(-1, 1)
        g = f * f
        assert g == _p(1, -2, 1)
        assert g.bound == 2
        assert (f * 3) == _p(-3, 3)

    def test_eval(self):
        f = _p(1, 0, 1)
        assert f(QQ.convert(2)) == QQ.convert(5)
        assert f(3) == QQ.convert(10)

    def test_divmod(self):
        quo, rem = divmod(_p(-1, 0, 1), _p(-1, 1))
        assert quo == _p(1, 1)
        assert rem.is_zero()
        with pytest.raises(ValueError):
            _p(1, 0, 1).exact_div(_p(-1, 1))

    def test_derivative_shift(self):
        f = _p(1, 2, 3)
        assert f.derivative() == _p(2, 6)
        assert f.derivative(2) == _p(6)
        assert f.shift(1) == _p(6, 8, 3)

    def test_reversed(self):
        assert _p(1, 2, bound=3).reversed() == _p(0, 0, 2, 1)

    def test_from_roots(self):
        assert Poly.from_roots([2, 3], QQ) == _p(6, -5, 1)

    def test_sympy(self):
        assert sympy.expand(_p(1, 0, 3).to_sympy() - (3 * Z ** 2 + 1)) == 0
        assert poly_from_expr((Z ** 2 - 1) / (Z - 1), QQ) == _p(1, 1)
        with pytest.raises(ValueError):
            poly_from_expr(1 / Z, QQ)

    def test_over(self):
        deform = get_field('deformation')
        f = _p(1, 2).over(deform)
        assert f.field == deform
        assert f.coeff(1) == deform.convert(2)


class TestQuadExt:
    '''
    Tests elements ``a + b * sqrt(r2)``.
    '''
    def _e(self, a, b, r2=2):
        return QuadExt(QQ.convert(a), QQ.convert(b), QQ.convert(r2), QQ)

    def test_mul(self):
        x = self._e(1, 1)
        assert x * x == self._e(3, 2)
        assert x * x.conjugate() == self._e(-1, 0)

    def test_inverse(self):
        x = self._e(1, 1)
        assert x * x.inverse() == self._e(1, 0)
        assert 1 / x == self._e(-1, 1)

    def test_not_invertible(self):
        with pytest.raises(ZeroDivisionError):
            QuadExt(QQ.convert(2), QQ.one, QQ.convert(4), QQ).inverse()

    def test_parity(self):
        assert self._e(3, 0).is_even()
        assert self._e(0, 3).is_odd()
        assert (self._e(0, 1) * self._e(0, 3)).is_even()

    def test_mixed_extensions(self):
        with pytest.raises(ValueError):
            self._e(1, 1, 2) + self._e(1, 1, 3)

    def test_witness(self):
        assert abs(self._e(1, 1).witness() - (1 + 2 ** 0.5)) < 1e-12

    def test_poly_eval(self):
        root = self._e(0, 1)
        assert _p(-2, 0, 1)(root) == self._e(0, 0)


class TestRoots:
    '''
    Tests ``poly_roots``.
    '''
    def test_rational(self):
        assert sorted(poly_roots(_p(6, -5, 1))) == [QQ.convert(2), QQ.convert(3)]

    def test_infinity(self):
        roots = poly_roots(_p(-2, 1, bound=2))
        assert roots == [QQ.convert(2), ProjectiveValue.INFINITY]

    def test_quadratic_extension(self):
        roots = poly_roots(_p(-2, 0, 1))
        assert all(isinstance(r, QuadExt) for r in roots)
        assert roots[0] + roots[1] == QQ.zero

    def test_factored(self):
        f = Poly.from_roots([1, 2, 3, 4], QQ)
        assert sorted(poly_roots(f)) == [QQ.convert(x) for x in (1, 2, 3, 4)]

    def test_irreducible(self):
        f = _p(-2, 0, 0, 1)
        with pytest.raises(FactorizationUnavailable):
            poly_roots(f)
        roots = poly_roots(f, allow_float=True)
        assert len(roots) == 3
        assert any(abs(r - 2 ** (1 / 3)) < 1e-9 for r in roots)

    def test_zero(self):
        with pytest.raises(ValueError):
            poly_roots(_p())


class TestLinearAlgebra:
    '''
    Tests the Vandermonde solver and ``linear_solve``.
    '''
    def test_vandermonde(self):
        nodes = [QQ.convert(x) for x in (0, 1, 2, 3)]
        f = _p(5, -1, '1/2', 2)
        coeffs = vandermonde_inverse_apply(nodes, [f(x) for x in nodes], QQ)
        assert Poly(coeffs, QQ) == f

    def test_vandermonde_duplicate(self):
        with pytest.raises(DuplicateNode) as excinfo:
            vandermonde_inverse_apply([1, 2, 2], [0, 0, 0], QQ)
        assert 'nodes 3 and 2 coincide' in str(excinfo.value)

    def test_vandermonde_lengths(self):
        with pytest.raises(ValueError):
            vandermonde_inverse_apply([1, 2], [0], QQ)

    def test_solve(self):
        rows = [[QQ.convert(x) for x in row] for row in ([2, 1], [1, 3])]
        rhs = [QQ.convert(3), QQ.convert(5)]
        assert linear_solve(rows, rhs, QQ) == [QQ.convert('4/5'), QQ.convert('7/5')]

    def test_singular(self):
        rows = [[QQ.convert(x) for x in row] for row in ([1, 2], [2, 4])]
        with pytest.raises(SingularSystem) as excinfo:
            linear_solve(rows, [QQ.one, QQ.one], QQ)
        assert excinfo.value.defect == 1

    def test_float(self):
        field = get_field('float')
        rows = [[field.convert(x) for x in row] for row in ([2, 1], [1, 3])]
        x = linear_solve(rows, [field.convert(3), field.convert(5)], field)
        assert field.equal(x[0], field.convert(0.8))


class TestLimits:
    '''
    Tests the limits at ``h = 0``.
    '''
    def test_regular(self):
        field = get_field('deformation')
        h = field.h
        assert limit_h0((2 + h) / (3 - h), field) == QQ.convert('2/3')
        assert limit_h0(h * h / (h + h * h), field) == QQ.zero

    def test_cancelling(self):
        field = get_field('deformation')
        h = field.h
        assert limit_h0((h * 5 + h * h) / (h * 2), field) == QQ.convert('5/2')

    def test_pole(self):
        field = get_field('deformation')
        with pytest.raises(PoleAtLimit) as excinfo:
            limit_h0(1 / field.h, field)
        assert 'pole of order 1' in str(excinfo.value)

    def test_odd(self):
        field = get_field('deformation')
        h = field.h
        with pytest.raises(OddPart):
            limit_h0(QuadExt(field.one, field.one, h, field))
        assert limit_vanishing(QuadExt(field.one, field.one, h, field)) == QQ.one
        assert limit_vanishing(QuadExt(field.zero, 1 / h, h * h * h, field)) == QQ.zero
        with pytest.raises(OddPart):
            limit_vanishing(QuadExt(field.zero, field.one, field.one, field))

    def test_poly(self):
        field = get_field('deformation')
        h = field.h
        f = Poly([1 + h, h / (1 + h), field.one], field)
        assert limit_poly(f) == _p(1, 0, 1)

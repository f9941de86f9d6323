
'''
Exact backends: rationals and rational functions in the deformation variable.
'''

import logging
from typing import Any, Dict, List, Optional, Tuple

import sympy
from sympy import QQ

from .exceptions import ParseError
from .scalar import H, ScalarField
from .types import Backend, Scalar

log = logging.getLogger('simplehiggs.scalar_exact')


class RationalField(ScalarField):
    '''
    Exact rational numbers. For documentation, please see the interface :class:`~simplehiggs.scalar.ScalarField`.
    It is recommended to use :func:`~simplehiggs.scalar.get_field` to obtain an instance using ``exact`` as backend.

    Elements serialize as strings ``"p/q"`` (or ``"p"`` for integers).
    '''
    def __init__(self) -> None:
        super().__init__(QQ)

    @property
    def backend(self) -> Backend:
        return Backend.EXACT

    def sqrt(self, a: Scalar) -> Optional[Scalar]:
        return self.domain.exsqrt(a)

    def to_json(self, a: Scalar) -> str:
        if a.denominator == 1:
            return str(a.numerator)
        return f'{a.numerator}/{a.denominator}'

    def from_json(self, data: Any) -> Scalar:
        if isinstance(data, bool) or not isinstance(data, (str, int)):
            raise ParseError(f'expected a rational as string, got {data!r}')
        return self.convert(data)


class DeformationField(ScalarField):
    '''
    Exact rational functions in ``h`` with rational coefficients, stored in reduced form. It is used to carry out
    limits ``q2 -> q1`` by substituting ``q2 = q1 + h`` and cancelling.

    Elements serialize as ``{"num": [...], "den": [...]}`` with ascending coefficient lists.
    '''
    def __init__(self) -> None:
        super().__init__(QQ.frac_field(H))

    @property
    def backend(self) -> Backend:
        return Backend.DEFORMATION

    @property
    def h(self) -> Scalar:
        '''
        The deformation variable as an element.
        '''
        return self.from_sympy(H)

    @staticmethod
    def _ascending(poly: Any) -> List[Any]:
        '''
        Ascending coefficient list of a univariate ring element.
        '''
        terms = dict(poly.terms())
        if not terms:
            return []
        top = max(m[0] for m in terms)
        return [terms.get((i,), QQ.zero) for i in range(top + 1)]

    def h_order(self, a: Scalar) -> Tuple[int, int]:
        '''
        Returns the lowest powers of ``h`` in numerator and denominator. The numerator order of zero is reported as
        a very large number.
        '''
        num = [m[0] for m in a.numer.monoms()]
        den = [m[0] for m in a.denom.monoms()]
        return (min(num) if num else 1 << 30), min(den)

    def lowest_ratio(self, a: Scalar) -> Scalar:
        '''
        Ratio of the lowest coefficients of numerator and denominator, a rational.
        '''
        num = dict(a.numer.terms())
        den = dict(a.denom.terms())
        return num[min(num)] / den[min(den)]

    def substitute(self, a: Scalar, value: Scalar) -> Scalar:
        '''
        Evaluates at ``h = value`` for a rational ``value``.

        :raises ZeroDivisionError: If the denominator vanishes there.
        '''
        nval = sympy.Poly(a.numer.as_expr(), H).eval(QQ.to_sympy(value))
        dval = sympy.Poly(a.denom.as_expr(), H).eval(QQ.to_sympy(value))
        if dval == 0:
            raise ZeroDivisionError('denominator vanishes')
        return QQ.from_sympy(nval / dval)

    def sqrt(self, a: Scalar) -> Optional[Scalar]:
        if not a:
            return a
        parts = []
        for poly in (a.numer, a.denom):
            coeff, factors = sympy.factor_list(poly.as_expr(), H)
            croot = QQ.exsqrt(QQ.from_sympy(coeff))
            if croot is None:
                return None
            expr = QQ.to_sympy(croot)
            for factor, mult in factors:
                if mult % 2:
                    return None
                expr = expr * factor ** (mult // 2)
            parts.append(expr)
        return self.from_sympy(parts[0] / parts[1])

    def to_json(self, a: Scalar) -> Dict[str, List[str]]:
        return {
            'num': [RationalField().to_json(c) for c in self._ascending(a.numer)] or ['0'],
            'den': [RationalField().to_json(c) for c in self._ascending(a.denom)],
        }

    def from_json(self, data: Any) -> Scalar:
        if isinstance(data, (str, int)) and not isinstance(data, bool):
            return self.convert(data)
        if not isinstance(data, dict) or 'num' not in data or 'den' not in data:
            raise ParseError(f'expected {{"num": [...], "den": [...]}}, got {data!r}')
        num = sum((sympy.Rational(c) * H ** i for i, c in enumerate(data['num'])), sympy.Integer(0))
        den = sum((sympy.Rational(c) * H ** i for i, c in enumerate(data['den'])), sympy.Integer(0))
        if den == 0:
            raise ParseError('denominator is zero')
        return self.from_sympy(num / den)

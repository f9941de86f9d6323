
'''
Univariate polynomials, quadratic extensions and the linear algebra used throughout the library.
'''

import logging
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy.polys.densearith import dup_add, dup_div, dup_mul, dup_mul_ground, dup_neg, dup_sub
from sympy.polys.densebasic import dup_strip
from sympy.polys.densetools import dup_diff, dup_eval, dup_shift
from sympy.polys.matrices import DomainMatrix

from .exceptions import DuplicateNode, FactorizationUnavailable, OddPart, PoleAtLimit, SingularSystem
from .scalar import H, ScalarField, get_field
from .scalar_exact import DeformationField, RationalField
from .types import Backend, ProjectiveValue, Scalar

log = logging.getLogger('simplehiggs.scalarpoly')

#: Polynomial variable of the finite chart
Z = sympy.Symbol('z')
#: Variable of the chart at infinity
W = sympy.Symbol('w')


class Poly:
    '''
    Polynomial in ``z`` with a formal degree bound. Coefficients are stored in ascending order, trailing zeros are
    dropped but the bound is kept, so that ``f = z`` with bound 2 still knows about its root at infinity.

    :param coeffs: Ascending coefficients, anything :meth:`ScalarField.convert` accepts.
    :param field: The coefficient field.
    :param bound: Formal degree bound, defaults to the actual degree.
    '''
    __slots__ = ('_coeffs', '_bound', '_field')

    def __init__(self, coeffs: Iterable[Any], field: ScalarField, bound: Optional[int] = None) -> None:
        conv = [field.convert(c) for c in coeffs]
        while conv and not conv[-1]:
            conv.pop()
        if bound is None:
            bound = max(len(conv) - 1, 0)
        if len(conv) - 1 > bound:
            raise ValueError(f'degree {len(conv) - 1} exceeds the bound {bound}')
        self._coeffs = tuple(conv)
        self._bound = bound
        self._field = field

    @classmethod
    def _from_dup(cls, desc: List[Scalar], field: ScalarField, bound: int) -> 'Poly':
        return cls(reversed(dup_strip(desc)), field, bound)

    def __repr__(self) -> str:
        return f'<Poly({[str(c) for c in self._coeffs]}, bound={self._bound})>'

    @property
    def coeffs(self) -> Tuple[Scalar, ...]:
        return self._coeffs

    @property
    def bound(self) -> int:
        return self._bound

    @property
    def field(self) -> ScalarField:
        return self._field

    @property
    def degree(self) -> int:
        '''
        Actual degree, ``-1`` for the zero polynomial.
        '''
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def coeff(self, i: int) -> Scalar:
        if 0 <= i < len(self._coeffs):
            return self._coeffs[i]
        return self._field.zero

    def top(self) -> Scalar:
        '''
        Coefficient at the formal bound.
        '''
        return self.coeff(self._bound)

    def _dup(self) -> List[Scalar]:
        return list(reversed(self._coeffs))

    def _other(self, other: Union['Poly', Any]) -> 'Poly':
        if isinstance(other, Poly):
            return other
        return Poly([other], self._field, 0)

    def __add__(self, other: Any) -> 'Poly':
        other = self._other(other)
        return Poly._from_dup(dup_add(self._dup(), other._dup(), self._field.domain), self._field,
                              max(self._bound, other.bound))

    __radd__ = __add__

    def __sub__(self, other: Any) -> 'Poly':
        other = self._other(other)
        return Poly._from_dup(dup_sub(self._dup(), other._dup(), self._field.domain), self._field,
                              max(self._bound, other.bound))

    def __rsub__(self, other: Any) -> 'Poly':
        return self._other(other) - self

    def __neg__(self) -> 'Poly':
        return Poly._from_dup(dup_neg(self._dup(), self._field.domain), self._field, self._bound)

    def __mul__(self, other: Any) -> 'Poly':
        if not isinstance(other, Poly):
            return self.scale(other)
        return Poly._from_dup(dup_mul(self._dup(), other._dup(), self._field.domain), self._field,
                              self._bound + other.bound)

    __rmul__ = __mul__

    def scale(self, c: Any) -> 'Poly':
        return Poly._from_dup(dup_mul_ground(self._dup(), self._field.convert(c), self._field.domain), self._field,
                              self._bound)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        size = max(len(self._coeffs), len(other.coeffs))
        return all(self._field.equal(self.coeff(i), other.coeff(i)) for i in range(size))

    def __hash__(self) -> int:
        return hash(tuple(str(c) for c in self._coeffs))

    def __call__(self, x: Any) -> Any:
        return poly_eval(self, x)

    def __divmod__(self, other: 'Poly') -> Tuple['Poly', 'Poly']:
        if other.is_zero():
            raise ZeroDivisionError('polynomial division by zero')
        quo, rem = dup_div(self._dup(), other._dup(), self._field.domain)
        return (Poly._from_dup(quo, self._field, max(self._bound - other.degree, 0)),
                Poly._from_dup(rem, self._field, max(other.degree - 1, 0)))

    def exact_div(self, other: 'Poly') -> 'Poly':
        '''
        Quotient of a division that is known to leave no remainder.

        :raises ValueError: If the remainder is nonzero.
        '''
        quo, rem = divmod(self, other)
        if not rem.is_zero():
            raise ValueError(f'{other} does not divide {self}')
        return quo

    def derivative(self, m: int = 1) -> 'Poly':
        return Poly._from_dup(dup_diff(self._dup(), m, self._field.domain), self._field, max(self._bound - m, 0))

    def shift(self, a: Any) -> 'Poly':
        '''
        Taylor shift ``f(z + a)``, the coefficients are those of the expansion around ``a``.
        '''
        return Poly._from_dup(dup_shift(self._dup(), self._field.convert(a), self._field.domain), self._field,
                              self._bound)

    def reversed(self, bound: Optional[int] = None) -> 'Poly':
        '''
        The polynomial ``w ** bound * f(1 / w)``, the expression of ``f`` in the chart at infinity.
        '''
        bound = self._bound if bound is None else bound
        return Poly([self.coeff(bound - i) for i in range(bound + 1)], self._field, bound)

    def with_bound(self, bound: int) -> 'Poly':
        return Poly(self._coeffs, self._field, bound)

    def over(self, field: ScalarField) -> 'Poly':
        '''
        The same polynomial with coefficients moved into ``field``.
        '''
        return Poly([field.lift(c, self._field) for c in self._coeffs], field, self._bound)

    def map(self, func: Any, field: Optional[ScalarField] = None) -> 'Poly':
        '''
        Applies ``func`` to every coefficient.
        '''
        return Poly([func(c) for c in self._coeffs], field or self._field, self._bound)

    def to_sympy(self, var: sympy.Symbol = Z) -> sympy.Expr:
        return sum((self._field.to_sympy(c) * var ** i for i, c in enumerate(self._coeffs)), sympy.Integer(0))

    def to_json(self) -> List[Any]:
        return [self._field.to_json(self.coeff(i)) for i in range(self._bound + 1)]

    @classmethod
    def from_json(cls, data: Sequence[Any], field: ScalarField, bound: Optional[int] = None) -> 'Poly':
        return cls([field.from_json(c) for c in data], field, bound if bound is not None else max(len(data) - 1, 0))

    @classmethod
    def from_roots(cls, roots: Iterable[Any], field: ScalarField) -> 'Poly':
        '''
        Monic polynomial with the given finite roots.
        '''
        result = cls([1], field, 0)
        for r in roots:
            result = result * cls([-field.convert(r), 1], field, 1)
        return result


def poly_from_expr(expr: sympy.Expr, field: ScalarField, bound: Optional[int] = None,
                   var: sympy.Symbol = Z) -> 'Poly':
    '''
    Converts a sympy expression that is polynomial in ``var`` (with coefficients in ``field``) into a :class:`Poly`.

    :raises ValueError: If the expression has a pole in ``var``.
    '''
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
    if den.has(var):
        raise ValueError(f'expression is not polynomial in {var}: {expr}')
    if num == 0:
        return Poly([], field, bound if bound is not None else 0)
    desc = sympy.Poly(num, var).all_coeffs()
    coeffs = [field.from_sympy(sympy.cancel(c / den)) for c in reversed(desc)]
    return Poly(coeffs, field, bound)


class QuadExt:
    '''
    Element ``a + b * r`` of a quadratic extension with ``r ** 2 = r2``. An element is even when ``b = 0`` and odd
    when ``a = 0``.
    '''
    __slots__ = ('a', 'b', 'r2', 'field')

    def __init__(self, a: Scalar, b: Scalar, r2: Scalar, field: ScalarField) -> None:
        self.a = a
        self.b = b
        self.r2 = r2
        self.field = field

    def __repr__(self) -> str:
        return f'<QuadExt({self.a} + ({self.b})*sqrt({self.r2}))>'

    def _lift(self, other: Any) -> 'QuadExt':
        if isinstance(other, QuadExt):
            if other.r2 != self.r2:
                raise ValueError('elements of different quadratic extensions')
            return other
        return QuadExt(self.field.convert(other), self.field.zero, self.r2, self.field)

    def __add__(self, other: Any) -> 'QuadExt':
        other = self._lift(other)
        return QuadExt(self.a + other.a, self.b + other.b, self.r2, self.field)

    __radd__ = __add__

    def __neg__(self) -> 'QuadExt':
        return QuadExt(-self.a, -self.b, self.r2, self.field)

    def __sub__(self, other: Any) -> 'QuadExt':
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> 'QuadExt':
        return self._lift(other) - self

    def __mul__(self, other: Any) -> 'QuadExt':
        other = self._lift(other)
        return QuadExt(self.a * other.a + self.b * other.b * self.r2, self.a * other.b + self.b * other.a,
                       self.r2, self.field)

    __rmul__ = __mul__

    def norm(self) -> Scalar:
        return self.a * self.a - self.b * self.b * self.r2

    def inverse(self) -> 'QuadExt':
        norm = self.norm()
        if self.field.is_zero(norm):
            raise ZeroDivisionError('element of the quadratic extension is not invertible')
        return QuadExt(self.a / norm, -self.b / norm, self.r2, self.field)

    def __truediv__(self, other: Any) -> 'QuadExt':
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other: Any) -> 'QuadExt':
        return self._lift(other) * self.inverse()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadExt):
            return (self.field.equal(self.a, other.a) and self.field.equal(self.b, other.b)
                    and self.field.equal(self.r2, other.r2))
        return self.is_even() and self.field.equal(self.a, self.field.convert(other))

    def __hash__(self) -> int:
        return hash((str(self.a), str(self.b), str(self.r2)))

    def is_even(self) -> bool:
        return self.field.is_zero(self.b)

    def is_odd(self) -> bool:
        return self.field.is_zero(self.a)

    def conjugate(self) -> 'QuadExt':
        return QuadExt(self.a, -self.b, self.r2, self.field)

    def witness(self) -> complex:
        '''
        Float value, taking the principal square root of ``r2`` at the current evaluation.
        '''
        import cmath
        return self.field.to_complex(self.a) + self.field.to_complex(self.b) * cmath.sqrt(
            self.field.to_complex(self.r2))

    def to_json(self) -> Any:
        return {'a': self.field.to_json(self.a), 'b': self.field.to_json(self.b), 'r2': self.field.to_json(self.r2)}


def poly_eval(f: Poly, x: Any) -> Any:
    '''
    Horner evaluation. ``x`` may be an element of the coefficient field or a :class:`QuadExt` over it.
    '''
    if isinstance(x, QuadExt):
        acc = QuadExt(f.field.zero, f.field.zero, x.r2, x.field)
        for c in reversed(f.coeffs):
            acc = acc * x + c
        return acc
    if f.is_zero():
        return f.field.zero
    return dup_eval(list(reversed(f.coeffs)), f.field.convert(x), f.field.domain)


def is_approximate(root: Any) -> bool:
    '''
    Whether a root returned by :func:`poly_roots` is a float witness.
    '''
    return isinstance(root, complex)


def _float_roots(desc: Sequence[complex], tolerance: float) -> List[complex]:
    '''
    Roots of a polynomial given by descending complex coefficients, each polished by Newton steps and checked
    against its residual.
    '''
    coeffs = np.array(desc, dtype=complex)
    deriv = np.polyder(coeffs)
    scale = float(np.max(np.abs(coeffs)))
    result = []
    for root in np.roots(coeffs):
        for _ in range(3):
            slope = np.polyval(deriv, root)
            if slope == 0:
                break
            root = root - np.polyval(coeffs, root) / slope
        residual = abs(np.polyval(coeffs, root))
        if residual > tolerance * max(scale, 1.0):
            raise FactorizationUnavailable(f'float root {root} has residual {residual} above tolerance')
        result.append(complex(root))
    return result


def _quadratic_roots(c0: Scalar, c1: Scalar, c2: Scalar, field: ScalarField) -> List[Any]:
    disc = c1 * c1 - 4 * c2 * c0
    root = field.sqrt(disc)
    if root is not None:
        return [(-c1 - root) / (2 * c2), (-c1 + root) / (2 * c2)]
    log.debug('discriminant %s is not a square, using a quadratic extension', disc)
    base = -c1 / (2 * c2)
    half = field.one / (2 * c2)
    return [QuadExt(base, -half, disc, field), QuadExt(base, half, disc, field)]


def poly_roots(f: Poly, *, allow_float: bool = False) -> List[Any]:
    '''
    Roots of ``f`` with multiplicity.

    Roots at infinity are reported as :attr:`ProjectiveValue.INFINITY`, one per missing degree below the formal
    bound. Degree two uses the closed form, in a :class:`QuadExt` if the discriminant is not a square. Higher
    degrees are factored; factors of degree three or more are solved numerically when ``allow_float`` is set (or
    the field is the float backend) and returned as python ``complex`` witnesses.

    :param f: Nonzero polynomial.
    :param allow_float: Whether float roots are acceptable for irreducible factors of high degree.
    :raises ValueError: If ``f`` is the zero polynomial.
    :raises FactorizationUnavailable: If a root can't be expressed and no float fallback is permitted.
    '''
    if f.is_zero():
        raise ValueError('the zero polynomial has no roots')
    field = f.field
    roots: List[Any] = [ProjectiveValue.INFINITY] * (f.bound - f.degree)
    if f.degree == 0:
        return roots
    if f.degree == 1:
        return [-f.coeff(0) / f.coeff(1)] + roots
    if f.degree == 2:
        return _quadratic_roots(f.coeff(0), f.coeff(1), f.coeff(2), field) + roots

    if not field.is_exact:
        tolerance = getattr(field, 'tolerance', 1e-9)
        return [field.convert(r) for r in _float_roots([field.to_complex(c) for c in reversed(f.coeffs)],
                                                       tolerance)] + roots

    gens = (Z, H) if field.backend == Backend.DEFORMATION else (Z,)
    num, _ = sympy.fraction(sympy.together(f.to_sympy(Z)))
    _, factors = sympy.factor_list(num, *gens)
    finite: List[Any] = []
    for factor, mult in factors:
        part = sympy.Poly(factor, Z)
        if part.degree() <= 0:
            continue
        desc = part.all_coeffs()
        if part.degree() == 1:
            values = [field.from_sympy(sympy.cancel(-desc[1] / desc[0]))]
        elif part.degree() == 2:
            values = _quadratic_roots(*(field.from_sympy(c) for c in reversed(desc)), field)
        elif allow_float and field.backend == Backend.EXACT:
            log.warning('factor %s is irreducible of degree %d, falling back to float roots', factor, part.degree())
            values = _float_roots([complex(sympy.N(c)) for c in desc], 1e-9)
        else:
            raise FactorizationUnavailable(f'factor {factor} has no roots expressible in {field}')
        finite.extend(values * mult)
    return finite + roots


def vandermonde_inverse_apply(nodes: Sequence[Scalar], values: Sequence[Scalar], field: ScalarField) -> List[Scalar]:
    '''
    Coefficients ``a_0 .. a_{m-1}`` of the polynomial of degree below ``m`` through ``(nodes[i], values[i])``.

    The inverse of the Vandermonde matrix is applied as a product of a lower triangular matrix ``L`` (divided
    differences) and an upper triangular matrix ``U`` (Newton to monomial basis), with

    * ``l_ij = prod_{k <= i, k != j} 1 / (q_j - q_k)`` for ``j <= i``
    * ``u_ii = 1``, ``u_i1 = 0`` for ``i > 1`` and ``u_ij = u_{i-1,j-1} - u_{i,j-1} * q_{j-1}``

    :raises DuplicateNode: If two nodes coincide.
    :raises ValueError: If the lengths differ.
    '''
    if len(nodes) != len(values):
        raise ValueError('nodes and values must have the same length')
    q = [field.convert(x) for x in nodes]
    y = [field.convert(x) for x in values]
    m = len(q)
    for i in range(m):
        for j in range(i):
            if field.equal(q[i], q[j]):
                raise DuplicateNode(f'nodes {i + 1} and {j + 1} coincide')

    newton = []
    for i in range(m):
        acc = field.zero
        for j in range(i + 1):
            weight = field.one
            for k in range(i + 1):
                if k != j:
                    weight = weight / (q[j] - q[k])
            acc = acc + weight * y[j]
        newton.append(acc)

    # u[i][j], 0-based, column j holds the monomial coefficients of prod_{k<j} (z - q_k)
    u = [[field.zero] * m for _ in range(m)]
    u[0][0] = field.one
    for j in range(1, m):
        for i in range(m):
            above = u[i - 1][j - 1] if i > 0 else field.zero
            u[i][j] = above - u[i][j - 1] * q[j - 1]
    return [sum((u[i][j] * newton[j] for j in range(m)), field.zero) for i in range(m)]


def linear_solve(matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar], field: ScalarField) -> List[Scalar]:
    '''
    Solves the square system ``matrix * x = rhs``. Exact backends use sympy's domain matrices, the float backend
    uses numpy with a rank test at the field tolerance.

    :raises ValueError: If the matrix is not square or the sizes differ.
    :raises SingularSystem: If the matrix is singular, carrying the rank defect.
    '''
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise ValueError('system must be square')
    if n == 0:
        return []
    if not field.is_exact:
        a = np.array([[field.to_complex(x) for x in row] for row in matrix], dtype=complex)
        b = np.array([field.to_complex(x) for x in rhs], dtype=complex)
        rank = int(np.linalg.matrix_rank(a, tol=getattr(field, 'tolerance', 1e-9)))
        if rank < n:
            raise SingularSystem(f'system of size {n} has rank {rank}', defect=n - rank)
        return [field.convert(complex(x)) for x in np.linalg.solve(a, b)]

    dom = field.domain
    mat = DomainMatrix([[field.convert(x) for x in row] for row in matrix], (n, n), dom)
    rank = mat.rank()
    if rank < n:
        raise SingularSystem(f'system of size {n} has rank {rank}', defect=n - rank)
    vec = DomainMatrix([[field.convert(x)] for x in rhs], (n, 1), dom)
    return [row[0] for row in mat.lu_solve(vec).to_list()]


_RATIONALS = RationalField()


def limit_h0(x: Any, field: Optional[ScalarField] = None) -> Scalar:
    '''
    Exact limit at ``h = 0`` after cancelling common powers of ``h``.

    :param x: Element of the deformation field, a rational (returned unchanged) or an even :class:`QuadExt`.
    :param field: Field of ``x``, defaults to the deformation field.
    :returns: A rational.
    :raises PoleAtLimit: If the reduced denominator vanishes at ``h = 0``.
    :raises OddPart: If a :class:`QuadExt` with nonzero odd part is passed.
    '''
    field = field or get_field(Backend.DEFORMATION)
    if isinstance(x, QuadExt):
        if not x.is_even():
            raise OddPart(f'element {x} has a nonzero odd part')
        return limit_h0(x.a, x.field)
    if not isinstance(field, DeformationField):
        return x
    if not x:
        return _RATIONALS.zero
    num, den = field.h_order(x)
    if num > den:
        return _RATIONALS.zero
    if num < den:
        raise PoleAtLimit(f'{field.to_sympy(x)} has a pole of order {den - num} at h = 0')
    return field.lowest_ratio(x)


def limit_vanishing(x: QuadExt) -> Scalar:
    '''
    Limit of a quadratic extension element whose odd part tends to zero, that is ``b ** 2 * r2 -> 0``.

    :raises OddPart: If the odd part does not tend to zero.
    '''
    if x.is_even():
        return limit_h0(x.a, x.field)
    odd_square = x.b * x.b * x.r2
    try:
        vanishes = (x.field.is_zero(limit_h0(odd_square, x.field)) if isinstance(x.field, DeformationField)
                    else x.field.is_zero(odd_square))
    except PoleAtLimit:
        vanishes = False
    if not vanishes:
        raise OddPart(f'odd part of {x} does not vanish at h = 0')
    if x.is_odd():
        return _RATIONALS.zero
    return limit_h0(x.a, x.field)


def limit_poly(f: Poly) -> Poly:
    '''
    Coefficientwise :func:`limit_h0` of a polynomial over the deformation field.
    '''
    return Poly([limit_h0(c, f.field) for c in f.coeffs], _RATIONALS, f.bound)

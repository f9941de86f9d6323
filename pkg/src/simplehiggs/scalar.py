
'''
Scalar field frontend API
'''

import logging
from fractions import Fraction
from typing import Any, Optional, Union

import sympy

from .exceptions import ParseError
from .types import Backend, Scalar

log = logging.getLogger('simplehiggs.scalar')

#: The formal deformation variable
H = sympy.Symbol('h')

#: Default comparison tolerance of the float backend
DEFAULT_TOLERANCE = 1e-9


class ScalarField:
    '''
    Scalar field interface class. Every computation of the library is carried out over one of its implementations:

    * Exact rationals (:class:`~simplehiggs.scalar_exact.RationalField`)
    * Exact rational functions in ``h`` (:class:`~simplehiggs.scalar_exact.DeformationField`)
    * Complex floating point (:class:`~simplehiggs.scalar_float.FloatField`)

    You can select the backend by either creating an instance of one of them or using
    :func:`~simplehiggs.scalar.get_field`.

    Elements are the elements of the underlying sympy domain, arithmetic is done with the ordinary python operators.
    The field object converts, compares and serializes them.

    :param domain: The sympy domain the elements belong to.
    '''
    def __init__(self, domain: Any) -> None:
        self._domain = domain

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__}(domain="{self._domain}")>'

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ScalarField) and type(self) is type(other) and self._domain == other.domain

    def __hash__(self) -> int:
        return hash((type(self).__name__, str(self._domain)))

    @property
    def domain(self) -> Any:
        '''
        Returns the sympy domain.
        '''
        return self._domain

    @property
    def backend(self) -> Backend:
        '''
        Returns the backend identifier.
        '''
        raise NotImplementedError(f'{self} has not implemented this function')

    @property
    def is_exact(self) -> bool:
        '''
        Whether equality is decided exactly.
        '''
        return True

    @property
    def zero(self) -> Scalar:
        return self._domain.zero

    @property
    def one(self) -> Scalar:
        return self._domain.one

    def convert(self, value: Union[int, str, Fraction, Scalar]) -> Scalar:
        '''
        Converts a python number, a string such as ``"3/4"``, a sympy expression or an element of another field into
        an element of this field.

        :param value: The value to convert.
        :returns: The converted element.
        :raises ParseError: If a string can't be parsed.
        '''
        if isinstance(value, str):
            return self.from_sympy(self._parse(value))
        if isinstance(value, Fraction):
            return self.from_sympy(sympy.Rational(value.numerator, value.denominator))
        if isinstance(value, sympy.Basic):
            return self.from_sympy(value)
        try:
            return self._domain.convert(value)
        except (sympy.CoercionFailed, TypeError):
            return self.from_sympy(sympy.sympify(str(value)))

    def _parse(self, text: str) -> sympy.Expr:
        try:
            return sympy.sympify(text.strip(), locals={'h': H}, rational=True)
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise ParseError(f'could not parse scalar "{text}"') from exc

    def is_zero(self, a: Scalar) -> bool:
        return not a

    def equal(self, a: Scalar, b: Scalar) -> bool:
        '''
        Compares two elements, exactly for the exact backends.
        '''
        return self.is_zero(a - b)

    def to_sympy(self, a: Scalar) -> sympy.Expr:
        return self._domain.to_sympy(a)

    def from_sympy(self, expr: sympy.Expr) -> Scalar:
        '''
        Converts a sympy expression, the expression must lie in the field.

        :raises ParseError: If the expression does not belong to the field.
        '''
        try:
            return self._domain.from_sympy(sympy.sympify(expr))
        except (sympy.CoercionFailed, sympy.PolificationFailed, TypeError, ValueError) as exc:
            raise ParseError(f'value "{expr}" does not belong to {self}') from exc

    def lift(self, a: Scalar, source: 'ScalarField') -> Scalar:
        '''
        Moves an element of ``source`` into this field.
        '''
        if source == self:
            return a
        return self.from_sympy(source.to_sympy(a))

    def sqrt(self, a: Scalar) -> Optional[Scalar]:
        '''
        Returns a square root of ``a`` if one exists in the field, otherwise None.
        '''
        raise NotImplementedError(f'{self} has not implemented this function')

    def to_json(self, a: Scalar) -> Any:
        '''
        Serializes an element.
        '''
        raise NotImplementedError(f'{self} has not implemented this function')

    def from_json(self, data: Any) -> Scalar:
        '''
        Parses an element from its JSON representation.

        :raises ParseError: If the data has the wrong shape.
        '''
        raise NotImplementedError(f'{self} has not implemented this function')

    def to_complex(self, a: Scalar) -> complex:
        '''
        Float witness of an element.
        '''
        return complex(sympy.N(self.to_sympy(a)))


def get_field(backend: Union[Backend, str] = Backend.EXACT, *, tolerance: float = DEFAULT_TOLERANCE) -> ScalarField:
    '''
    Returns an instance of the desired scalar field. Default is ``exact``.

    Using this function is an alternative to instantiating one of the implementations yourself.

    Example:

    >>> from simplehiggs.scalar import get_field
    >>> type(get_field('exact'))
    <class 'simplehiggs.scalar_exact.RationalField'>
    >>> type(get_field('float'))
    <class 'simplehiggs.scalar_float.FloatField'>

    :param backend: Backend to use.
    :param tolerance: Comparison tolerance, only used by the float backend.
    :return: A field instance.
    :raises NotImplementedError: If an unknown backend was requested.
    '''
    if isinstance(backend, str) and not isinstance(backend, Backend):
        try:
            backend = Backend.from_string(backend)
        except ValueError as exc:
            raise NotImplementedError(f'The backend "{backend}" has not been implemented.') from exc
    if backend == Backend.EXACT:
        from .scalar_exact import RationalField
        return RationalField()
    if backend == Backend.DEFORMATION:
        from .scalar_exact import DeformationField
        return DeformationField()
    if backend == Backend.FLOAT:
        from .scalar_float import FloatField
        return FloatField(tolerance=tolerance)
    raise NotImplementedError(f'The backend "{backend}" has not been implemented.')

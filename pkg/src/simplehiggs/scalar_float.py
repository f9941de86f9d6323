
'''
Float backend.
'''

import cmath
import logging
from typing import Any, Dict, Optional

from sympy import CC

from .exceptions import ParseError
from .scalar import DEFAULT_TOLERANCE, ScalarField
from .types import Backend, Scalar

log = logging.getLogger('simplehiggs.scalar_float')


class FloatField(ScalarField):
    '''
    Complex floating point numbers with a comparison tolerance. For documentation, please see the interface
    :class:`~simplehiggs.scalar.ScalarField`. It is recommended to use :func:`~simplehiggs.scalar.get_field` to obtain
    an instance using ``float`` as backend.

    The tolerance is only used for equality tests, it is relative for values larger than one.

    :param tolerance: Comparison tolerance.
    '''
    def __init__(self, *, tolerance: float = DEFAULT_TOLERANCE) -> None:
        super().__init__(CC)
        if tolerance <= 0:
            raise ValueError('tolerance must be positive')
        self.tolerance = tolerance

    def __repr__(self) -> str:
        return f'<FloatField(tolerance="{self.tolerance}")>'

    @property
    def backend(self) -> Backend:
        return Backend.FLOAT

    @property
    def is_exact(self) -> bool:
        return False

    def convert(self, value: Any) -> Scalar:
        if isinstance(value, complex):
            return self.domain.convert(value)
        return super().convert(value)

    def is_zero(self, a: Scalar) -> bool:
        return abs(complex(a)) <= self.tolerance

    def equal(self, a: Scalar, b: Scalar) -> bool:
        x, y = complex(a), complex(b)
        return abs(x - y) <= self.tolerance * max(1.0, abs(x), abs(y))

    def sqrt(self, a: Scalar) -> Optional[Scalar]:
        return self.domain.convert(cmath.sqrt(complex(a)))

    def to_complex(self, a: Scalar) -> complex:
        return complex(a)

    def to_json(self, a: Scalar) -> Dict[str, float]:
        value = complex(a)
        return {'re': value.real, 'im': value.imag}

    def from_json(self, data: Any) -> Scalar:
        if isinstance(data, dict):
            try:
                return self.domain.convert(complex(float(data['re']), float(data.get('im', 0.0))))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f'expected {{"re": x, "im": y}}, got {data!r}') from exc
        if isinstance(data, (int, float)) and not isinstance(data, bool):
            return self.domain.convert(complex(data))
        if isinstance(data, str):
            return self.convert(data)
        raise ParseError(f'expected a float scalar, got {data!r}')

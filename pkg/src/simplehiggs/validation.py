
'''
Functions for validating data.
'''

import itertools
import logging
from typing import TYPE_CHECKING, List, Sequence, Tuple

from .exceptions import NonGeneric, ParamOutsideX, ValidationError
from .scalar import ScalarField
from .types import JumpParams, Scalar

if TYPE_CHECKING:
    from .modelcore import SpectralData

log = logging.getLogger('simplehiggs.validation')

#: Smallest number of poles the library handles
N_MIN: int = 4
#: Largest number of poles for which the signed sums are enumerated
N_MAX_GENERICITY: int = 20
#: Textual marker for the pole at infinity
INFINITY_MARK: str = 'inf'


def validate_poles(poles: Sequence[object], field: ScalarField) -> Tuple[Scalar, ...]:
    '''
    Validates a pole divisor ``t_1 .. t_n`` and returns the finite poles ``t_1 .. t_{n-1}`` as field elements.

    The convention is ``(t_1, t_2, t_n) = (0, 1, inf)``, the remaining poles are finite and pairwise distinct.

    Example:

    >>> from simplehiggs.scalar import get_field
    >>> len(validate_poles(['0', '1', '2', '3', 'inf'], get_field()))
    4
    >>> validate_poles(['0', '1', '1', '3', 'inf'], get_field())
    simplehiggs.exceptions.ValidationError: poles 2 and 3 coincide

    :param poles: The poles, the last one has to be ``"inf"``.
    :param field: Field the finite poles are converted into.
    :raises ValidationError: Indicates validation failed
    '''
    if len(poles) < N_MIN:
        raise ValidationError(f'at least {N_MIN} poles required, got {len(poles)}')
    if str(poles[-1]).strip().lower() not in (INFINITY_MARK, '∞'):
        raise ValidationError('the last pole has to be at infinity')
    finite = []
    for idx, pole in enumerate(poles[:-1], start=1):
        if isinstance(pole, str) and pole.strip().lower() in (INFINITY_MARK, '∞'):
            raise ValidationError(f'pole {idx} is at infinity, only the last one may be')
        finite.append(field.convert(pole))
    if not field.is_zero(finite[0]) or not field.equal(finite[1], field.one):
        raise ValidationError('the poles have to start with 0 and 1')
    for i, j in itertools.combinations(range(len(finite)), 2):
        if field.equal(finite[i], finite[j]):
            raise ValidationError(f'poles {i + 1} and {j + 1} coincide')
    return tuple(finite)


def validate_nu(nu: Sequence[Scalar], n: int) -> None:
    '''
    Validates the shape of the eigenvalue tuple.

    :raises ValidationError: Indicates validation failed
    '''
    if len(nu) != n:
        raise ValidationError(f'expected {n} eigenvalues, got {len(nu)}')


def is_integer(field: ScalarField, value: Scalar) -> bool:
    '''
    Whether a scalar is an integer, exactly for the exact backends and within the tolerance for floats.
    '''
    if not field.is_exact:
        number = field.to_complex(value)
        return abs(number - round(number.real)) <= getattr(field, 'tolerance', 1e-9)
    return bool(field.to_sympy(value).is_Integer)


def check_genericity(nu: Sequence[Scalar], field: ScalarField) -> List[str]:
    '''
    Checks the conditions on the residue eigenvalues and returns the names of those that fail:

    * ``nonzero``: the product ``nu_1 * .. * nu_n`` is nonzero
    * ``generic``: no signed sum ``sum(eps_i * nu_i)`` is an integer

    :param nu: The eigenvalues.
    :param field: Field the eigenvalues live in.
    :returns: The failed conditions, empty if all hold.
    :raises ValidationError: If there are too many eigenvalues to enumerate the signs.
    '''
    failed = []
    if any(field.is_zero(x) for x in nu):
        failed.append('nonzero')
    if len(nu) > N_MAX_GENERICITY:
        raise ValidationError(f'genericity is only checked up to {N_MAX_GENERICITY} poles')
    for signs in itertools.product((1, -1), repeat=len(nu)):
        total = sum((x if s > 0 else -x for s, x in zip(signs, nu)), field.zero)
        if is_integer(field, total):
            log.debug('signed sum with signs %s is the integer %s', signs, total)
            failed.append('generic')
            break
    return failed


def validate_spectral(spectral: 'SpectralData') -> List[str]:
    '''
    Genericity of constructed spectral data, see :func:`check_genericity`. The poles and the number of eigenvalues are
    already checked when :class:`~simplehiggs.modelcore.SpectralData` is created. For connections the eigenvalues
    ``nu_n`` and ``1 - nu_n`` at infinity differ from ``+-nu_n`` by integers, so the signed sums cover both flavors.
    '''
    return check_genericity(spectral.nu, spectral.field)


def validate_gl(xi: Sequence[Tuple[Scalar, Scalar]], degree: int, field: ScalarField) -> None:
    '''
    Validates ``gl_2`` residue data on a bundle of degree ``d``: the Fuchs relation ``sum(xi_i^+ + xi_i^-) = -d``,
    and that no signed selection ``sum(xi_i^{eps_i})`` is an integer.

    :raises ValidationError: If the Fuchs relation is violated.
    :raises NonGeneric: If a selection of eigenvalues sums to an integer.
    '''
    if len(xi) < N_MIN:
        raise ValidationError(f'at least {N_MIN} eigenvalue pairs required, got {len(xi)}')
    total = sum((a + b for a, b in xi), field.zero)
    if not field.equal(total, field.convert(-degree)):
        raise ValidationError(f'Fuchs relation violated: eigenvalues sum to {field.to_sympy(total)}, not {-degree}')
    if len(xi) > N_MAX_GENERICITY:
        raise ValidationError(f'genericity is only checked up to {N_MAX_GENERICITY} poles')
    for choice in itertools.product((0, 1), repeat=len(xi)):
        selected = sum((pair[c] for c, pair in zip(choice, xi)), field.zero)
        if is_integer(field, selected):
            raise NonGeneric(f'the eigenvalue selection {choice} sums to an integer')


def validate_jump_params(jp: JumpParams, field: ScalarField, *, allow_collided: bool = True) -> None:
    '''
    Checks membership in the parameter space of the jumping family: either ``p_1 != 0`` and ``q_1 != q_2``, or
    ``q_2 - q_1 = p_2 - p_1 = 0`` (the collided locus, only if ``allow_collided`` is set). In both cases
    ``p_2 - p_1 = lam * (q_2 - q_1)`` has to hold.

    Deformed parameters (``jp.deform``) are checked for ``p_1 != 0`` only, their second point is symbolic.

    :raises ParamOutsideX: Indicates validation failed
    '''
    if jp.deform:
        if field.is_zero(jp.p1):
            raise ParamOutsideX('p1 has to be nonzero')
        return
    dq = jp.q2 - jp.q1
    dp = jp.p2 - jp.p1
    if not field.equal(dp, jp.lam * dq):
        raise ParamOutsideX('p2 - p1 = lambda * (q2 - q1) does not hold')
    if field.is_zero(dq):
        if not allow_collided:
            raise ParamOutsideX('q1 and q2 have to differ')
        if not field.is_zero(dp):
            raise ParamOutsideX('p2 has to equal p1 when q2 equals q1')
        return
    if field.is_zero(jp.p1):
        raise ParamOutsideX('p1 has to be nonzero')

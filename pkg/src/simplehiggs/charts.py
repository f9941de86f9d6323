'''
Chart coordinates on the blow-ups that serve as targets of the apparent singularity map: Hilbert chart parameters
of two pairs, the spectral curve through such a point, and the chain of blow-up coordinates along which the
jumping family of connections degenerates.
'''

import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .connjump import ConnJumpFamily, closed_form_F, roots_of
from .exceptions import DomainError, MissingBlowup, OddPart, ValidationError
from .modelcore import FieldMatrix, SpectralData, evaluation_row
from .scalar import ScalarField, get_field
from .scalarpoly import Poly, QuadExt, limit_h0, limit_vanishing, linear_solve
from .types import (
    ApparentPair, Backend, ChainLimits, ChainPoint, ConnJumpParams, Flavor, HilbPoint5, JumpParams, ProbeReport,
    ProjectiveValue, QuadraticLimit, Scalar,
)

log = logging.getLogger('simplehiggs.charts')

#: Points ``(lam, p1)`` the coefficients of the quadratic limits are solved from, and the control point
LIMIT_SAMPLES = ((0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (2, 1))
LIMIT_CONTROL = (2, 3)
#: Values of ``lam`` and of ``p1`` the Jacobian is evaluated at
PROBE_GRID = (0, 1, 2)


def _ratio(num: Scalar, den: Scalar, field: ScalarField) -> Any:
    if field.is_zero(den):
        return ProjectiveValue.INDETERMINATE if field.is_zero(num) else ProjectiveValue.INFINITY
    return num / den


def hilb_coords(pairs: Sequence[ApparentPair], field: Optional[ScalarField] = None) -> HilbPoint5:
    '''
    Hilbert chart parameters of two pairs: ``lam_plus = (p2 - p1) / (q2 - q1)`` and
    ``lam_minus = (p1 + p2) / (q2 - q1)``. If both pairs carry blow-up coordinates over the same pole, the
    exceptional versions ``(v2 - v1) / (q2 - q1)`` (equal signs) or ``(v1 + v2) / (q2 - q1)`` (opposite signs) are
    computed as well. Zero denominators give :class:`~simplehiggs.types.ProjectiveValue` tags.

    Example:

    >>> point = hilb_coords([ApparentPair(4, 7), ApparentPair(5, 9)])
    >>> str(point.lam_plus), str(point.lam_minus)
    ('2', '16')

    :raises ValidationError: If not exactly two pairs are given.
    '''
    if len(pairs) != 2:
        raise ValidationError(f'Hilbert chart parameters need two pairs, got {len(pairs)}')
    field = field or get_field()
    first, second = pairs
    q1, p1, q2, p2 = (field.convert(x) for x in (first.q, first.p, second.q, second.p))
    dq = q2 - q1
    lam_plus = _ratio(p2 - p1, dq, field)
    lam_minus = _ratio(p1 + p2, dq, field)
    lam_plus_i = lam_minus_i = pole = None
    if first.blowup is not None and second.blowup is not None and first.blowup.index == second.blowup.index:
        pole = first.blowup.index
        v1, v2 = field.convert(first.blowup.v), field.convert(second.blowup.v)
        if first.blowup.eps == second.blowup.eps:
            lam_plus_i = _ratio(v2 - v1, dq, field)
        else:
            lam_minus_i = _ratio(v1 + v2, dq, field)
    normalized = (first._replace(q=q1, p=p1), second._replace(q=q2, p=p2))
    return HilbPoint5(normalized, lam_plus, lam_minus, lam_plus_i, lam_minus_i, pole)


def _finite(value: Any, name: str) -> None:
    if value is None or isinstance(value, ProjectiveValue):
        raise ValidationError(f'{name} has to be a finite value, got {value!r}')


def _pole_of(spectral: SpectralData, pair: ApparentPair) -> Optional[int]:
    field = spectral.field
    for i, t in enumerate(spectral.finite, start=1):
        if field.equal(field.convert(pair.q), t):
            return i
    return None


def _data_rows(point: HilbPoint5, spectral: SpectralData, size: int) -> List[Tuple[List[Scalar], Scalar]]:
    field = spectral.field
    first, second = point.pairs
    q1, p1, q2, p2 = (field.convert(x) for x in (first.q, first.p, second.q, second.p))
    poles = [_pole_of(spectral, pair) for pair in point.pairs]
    for pair, index in zip(point.pairs, poles):
        if index is not None and (pair.blowup is None or pair.blowup.index != index):
            raise MissingBlowup(f'pair {pair} sits on t_{index} without a blow-up coordinate')

    def tangent(pair: ApparentPair, index: int) -> Tuple[List[Scalar], Scalar]:
        base = pair.blowup.eps * spectral.nu_hat(index)
        return evaluation_row(field, spectral.t(index), size, 1), 2 * base * field.convert(pair.blowup.v)

    if not field.equal(q1, q2):
        rows = []
        for pair, index, q, p in zip(point.pairs, poles, (q1, q2), (p1, p2)):
            rows.append(tangent(pair, index) if index is not None else (evaluation_row(field, q, size), p * p))
        return rows
    if poles[0] is not None:
        _finite(point.lam_minus_i, 'lam_minus_i')
        index, blowup = poles[0], first.blowup
        base = blowup.eps * spectral.nu_hat(index)
        v = field.convert(blowup.v)
        second_derivative = -4 * base * field.convert(point.lam_minus_i) + 2 * v * v
        return [tangent(first, index), (evaluation_row(field, spectral.t(index), size, 2), second_derivative)]
    value = (evaluation_row(field, q1, size), p1 * p1)
    if field.equal(p1, p2) and not field.is_zero(p1):
        _finite(point.lam_plus, 'lam_plus')
        return [value, (evaluation_row(field, q1, size, 1), 2 * p1 * field.convert(point.lam_plus))]
    _finite(point.lam_minus, 'lam_minus')
    return [value, (evaluation_row(field, q1, size, 1), -2 * p1 * field.convert(point.lam_minus))]


def solve_b4b5(point: HilbPoint5, spectral: SpectralData) -> Poly:
    '''
    The spectral curve ``p ** 2 = g(z)`` with ``deg g <= 6`` of the field of splitting type 1 determined by a point of
    a Hilbert chart. ``g`` passes through ``(t_i, +-nu_hat_i)``, has top coefficient fixed by the pole at infinity, and
    the remaining two coefficients come from the point:

    * distinct abscissae: ``g(q_j) = p_j ** 2``, a pair on a pole contributes ``g'(t_i) = 2 eps nu_hat_i v``
    * ``(q, p), (q, p)``: ``g(q) = p ** 2`` and ``g'(q) = 2 p lam_plus``
    * ``(q, p), (q, -p)``: ``g(q) = p ** 2`` and ``g'(q) = -2 p lam_minus``
    * both on ``t_i``: ``g'(t_i) = 2 eps nu_hat_i v`` and ``g''(t_i) = -4 eps nu_hat_i lam_minus_i + 2 v ** 2``

    The field ``[[0, g], [1, 0]]`` of splitting type 1 then satisfies every residue condition.

    :raises ValidationError: If ``n != 5``, the flavor is not Higgs or a needed chart parameter is not finite.
    :raises MissingBlowup: If a pair sits on a pole without blow-up coordinate.
    :raises SingularSystem: If the conditions do not determine ``g``.
    '''
    if spectral.n != 5:
        raise ValidationError('the curve through a Hilbert chart point is defined for n = 5')
    if spectral.flavor != Flavor.HIGGS:
        raise ValidationError('the curve through a Hilbert chart point needs Higgs spectral data')
    field = spectral.field
    size = 7
    rows: List[List[Scalar]] = []
    rhs: List[Scalar] = []
    for i in range(1, 5):
        rows.append(evaluation_row(field, spectral.t(i), size))
        rhs.append(spectral.nu_hat(i) ** 2)
    sigma, mu = spectral.infinity_shift(1)
    rows.append([field.zero] * (size - 1) + [field.one])
    rhs.append(mu * mu - sigma * sigma)
    for row, value in _data_rows(point, spectral, size):
        rows.append(row)
        rhs.append(value)
    curve = Poly(linear_solve(rows, rhs, field), field, size - 1)
    log.debug('curve through %s: %s', point.pairs, curve)
    return curve


def curve_field(curve: Poly, spectral: SpectralData) -> FieldMatrix:
    '''
    The field ``[[0, g], [1, 0]]`` of splitting type 1 with spectral curve ``p ** 2 = g(z)``.
    '''
    return FieldMatrix(spectral, 1, [spectral.field.zero], curve, [spectral.field.one])


def _require(value: QuadExt, even: bool, name: str) -> QuadExt:
    if even and not value.is_even():
        raise OddPart(f'{name} should lie in the base field, got {value}')
    if not even and not value.is_odd():
        raise OddPart(f'{name} should be a multiple of the square root, got {value}')
    return value


def _chain(f11: Poly, f21: Poly, spectral: SpectralData) -> ChainPoint:
    q1p, q2p = roots_of(f21)
    field = f21.field
    if field.is_zero(q1p.r2):
        raise DomainError('F21 has a double root, the chain needs q1\' != q2\'')
    try:
        pbar1, pbar2 = f11(q1p).inverse(), f11(q2p).inverse()
    except ZeroDivisionError as exc:
        raise DomainError('a dual parameter of the family vanishes') from exc
    gap = q2p - q1p
    center = q1p.a
    weight = spectral.weight()
    value = weight(center)
    if field.is_zero(value):
        raise DomainError('the center of the apparent singularities sits on a pole')
    u2_base = -weight.derivative()(center) / (4 * value * value)

    s = _require((pbar2 - pbar1) / gap, True, 's')
    t1 = _require((s - field.one / value) / gap, False, 't1')
    t2 = _require((pbar2 + pbar1) / gap, False, 't2')
    u1 = _require(t1 / gap, True, 'u1')
    u2 = _require(t2 / gap, True, 'u2')
    v = _require((u2 - u2_base) / gap, False, 'v')
    w = _require(v / gap, True, 'w')
    return ChainPoint(s, t1, t2, u1, u2, v, w, (pbar1, pbar2))


def chain(family: ConnJumpFamily) -> ChainPoint:
    '''
    The blow-up coordinates of the deformed family near the curve at infinity, with ``R = q2' - q1'``,
    ``q = (q1' + q2') / 2`` and ``pbar_j = 1 / p_j'``:

    * ``s = (pbar_2 - pbar_1) / R``
    * ``t1 = (s - 1 / W(q)) / R`` and ``t2 = (pbar_2 + pbar_1) / R``
    * ``u1 = t1 / R`` and ``u2 = t2 / R``
    * ``v = (u2 + W'(q) / (4 W(q) ** 2)) / R`` and ``w = v / R``

    ``s``, ``u1``, ``u2`` and ``w`` are rational in ``h``, ``t1``, ``t2`` and ``v`` are rational multiples of the
    square root.

    :raises DegenerateQuadratic: If ``F21`` is not quadratic.
    :raises OddPart: If an element has the wrong parity.
    '''
    return _chain(family.f11, family.f21, family.spectral)


def chain_limits(point: ChainPoint) -> ChainLimits:
    '''
    Exact limits at ``h = 0`` of a chain.

    :raises PoleAtLimit: If an element is not regular at ``h = 0``.
    :raises OddPart: If an odd element does not tend to zero.
    '''
    return ChainLimits(
        s=limit_h0(point.s),
        t1=limit_vanishing(point.t1),
        t2=limit_vanishing(point.t2),
        u1=limit_h0(point.u1),
        u2=limit_h0(point.u2),
        v=limit_vanishing(point.v),
        w=limit_h0(point.w),
    )


def limits_at(q1: Any, p1: Any, lam: Any, spectral: SpectralData, e0: Any = 0, e1: Any = 0) -> ChainLimits:
    '''
    Chain limits of the family deformed along ``q2 = q1 + h``, ``p2 = p1 + lam * h``. The chain only involves
    ``F11`` and ``F21`` and therefore neither the signs nor ``nu_1 .. nu_4``.
    '''
    params = ConnJumpParams(JumpParams(q1, p1, q1, p1, lam, deform=True), e0, e1)
    f11, f21 = closed_form_F(params, spectral)
    lifted = spectral.over(get_field(Backend.DEFORMATION))
    return chain_limits(_chain(f11, f21, lifted))


def _monomials(lam: Any, p1: Any) -> List[Any]:
    return [1, p1, p1 * p1, lam, lam * p1, lam * lam]


def decompose(q1: Any, spectral: SpectralData, e0: Any = 0, e1: Any = 0) -> Dict[str, Any]:
    '''
    The limits of ``u1`` and ``w``, which are polynomials of degree two in ``(lam, p1)``, split into their
    coefficients, next to the limits that do not depend on ``(lam, p1)``. The coefficients are solved for from
    :data:`LIMIT_SAMPLES` and checked at :data:`LIMIT_CONTROL`.

    :returns: ``{'s': .., 't1': .., 't2': .., 'u2': .., 'v': .., 'u1': QuadraticLimit, 'w': QuadraticLimit}``
    :raises DomainError: If the control evaluation contradicts the fitted polynomial.
    '''
    field = get_field()
    samples = [limits_at(q1, p, lam, spectral, e0, e1) for lam, p in LIMIT_SAMPLES]
    rows = [_monomials(lam, p) for lam, p in LIMIT_SAMPLES]
    parts = {}
    for name in ('u1', 'w'):
        coeffs = linear_solve(rows, [getattr(x, name) for x in samples], field)
        parts[name] = QuadraticLimit(*coeffs)
    lam, p = LIMIT_CONTROL
    control = limits_at(q1, p, lam, spectral, e0, e1)
    for name, part in parts.items():
        if part.at(lam, p) != getattr(control, name):
            raise DomainError(f'lim {name} is not of degree two in (lambda, p1) at q1 = {q1}')
    result: Dict[str, Any] = {name: getattr(samples[0], name) for name in ('s', 't1', 't2', 'u2', 'v')}
    result.update(parts)
    return result


def m1_coordinate_probe(q1: Any, spectral: SpectralData, e0: Any = 0, e1: Any = 0) -> ProbeReport:
    '''
    Jacobian of ``(lim u1, lim w)`` with respect to ``(lam, p1)`` at a fixed ``q1``, evaluated on
    :data:`PROBE_GRID`. The determinant has degree at most two in each of ``lam`` and ``p1``, so it is identically
    zero exactly when it vanishes on the whole grid.
    '''
    parts = decompose(q1, spectral, e0, e1)
    u1, w = parts['u1'], parts['w']
    evaluated = []
    for lam in PROBE_GRID:
        for p in PROBE_GRID:
            jacobian = (u1.gradient(lam, p), w.gradient(lam, p))
            determinant = jacobian[0][0] * jacobian[1][1] - jacobian[0][1] * jacobian[1][0]
            evaluated.append(((lam, p), jacobian, determinant))
    singular = tuple(point for point, _, determinant in evaluated if determinant == 0)
    regular = [entry for entry in evaluated if entry[2] != 0]
    point, jacobian, determinant = regular[0] if regular else evaluated[0]
    report = ProbeReport(q1, point, jacobian, determinant, singular, bool(regular))
    log.debug('jacobian at q1=%s: %s', q1, report)
    return report


def limits_to_json(limits: ChainLimits) -> Dict[str, str]:
    field = get_field()
    return {f'lim_{name}': field.to_json(value) for name, value in limits._asdict().items()}


#: JSON suffixes of the :class:`~simplehiggs.types.QuadraticLimit` coefficients
LIMIT_KEYS = {
    'const': 'const', 'p1_coeff': 'p1', 'p1_sq_coeff': 'p1_sq', 'lam_coeff': 'lambda', 'lam_p1_coeff': 'lambda_p1',
    'lam_sq_coeff': 'lambda_sq',
}


def decomposition_to_json(parts: Dict[str, Any]) -> Dict[str, str]:
    '''
    Flat record with one ``<name>_<monomial>`` entry per coefficient of the quadratic limits, see
    :data:`LIMIT_KEYS`.
    '''
    field = get_field()
    result = {}
    for name, value in parts.items():
        if isinstance(value, QuadraticLimit):
            for attr, suffix in LIMIT_KEYS.items():
                result[f'{name}_{suffix}'] = field.to_json(getattr(value, attr))
        else:
            result[name] = field.to_json(value)
    return result

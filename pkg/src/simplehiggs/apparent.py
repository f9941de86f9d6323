
'''
Apparent singularities, their dual parameters and the reconstruction of fields from them.
'''

import logging
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .exceptions import (
    Indeterminate, MissingBlowup, NonSemisimple, NoPivot, ParseError, PoleAtLimit, PoleCollision, SingularSystem,
    ValidationError,
)
from .modelcore import FieldMatrix, SpectralData, solve_f12
from .scalar import ScalarField, get_field
from .scalarpoly import Poly, QuadExt, is_approximate, limit_poly, linear_solve, poly_roots, vandermonde_inverse_apply
from .types import ApparentPair, Backend, Blowup, Chart, HilbChart, HilbCluster, ProjectiveValue, Scalar

log = logging.getLogger('simplehiggs.apparent')


def _pole_index(spectral: SpectralData, q: Any) -> Optional[int]:
    '''
    1-based index of the finite pole equal to ``q``, or None.
    '''
    if isinstance(q, (QuadExt, complex)):
        return None
    for i, t in enumerate(spectral.finite, start=1):
        if spectral.field.equal(q, t):
            return i
    return None


def _sign(field: ScalarField, value: Scalar, base: Scalar) -> int:
    if field.equal(value, base):
        return 1
    if field.equal(value, -base):
        return -1
    raise ValidationError(f'dual value {field.to_sympy(value)} is not +-{field.to_sympy(base)}, the field is invalid')


def _linear(q: Scalar, field: ScalarField) -> Poly:
    return Poly([-q, field.one], field, 1)


def _complex_eval(f: Poly, x: complex) -> complex:
    return sum(f.field.to_complex(c) * x ** i for i, c in enumerate(f.coeffs))


def _finite_pair(field_matrix: FieldMatrix, q: Any) -> ApparentPair:
    spectral = field_matrix.spectral
    field = spectral.field
    p = field_matrix.f11(q)
    i = _pole_index(spectral, q)
    if i is None:
        return ApparentPair(q, p)
    nh = spectral.nu_hat(i)
    eps = _sign(field, p, nh)
    rest = field_matrix.f21.exact_div(_linear(q, field))(q)
    if field.is_zero(rest):
        log.debug('apparent singularity of higher multiplicity on t_%d, no blow-up coordinate', i)
        return ApparentPair(q, p)
    v = field_matrix.f11.derivative()(q) + field_matrix.f12(q) * rest / (2 * eps * nh)
    return ApparentPair(q, p, blowup=Blowup(i, eps, v))


def _infinity_pair(field_matrix: FieldMatrix, simple: bool) -> ApparentPair:
    spectral = field_matrix.spectral
    field = spectral.field
    b11, b12, b21 = field_matrix.bounds()
    u = field_matrix.f11.coeff(b11)
    pair = ApparentPair(field.zero, u, Chart.INFINITE)
    sigma, mu = spectral.infinity_shift(field_matrix.k)
    if not simple or field.is_zero(mu):
        return pair
    eps = _sign(field, u + sigma, mu)
    lead = field_matrix.f21.coeff(b21 - 1)
    v = field_matrix.f11.coeff(b11 - 1) + field_matrix.f12.coeff(b12) * lead / (2 * eps * mu)
    return pair._replace(blowup=Blowup(spectral.n, eps, v))


def _sigma_pairs(field_matrix: FieldMatrix, q: Scalar) -> List[ApparentPair]:
    field = field_matrix.field
    f11, f12, f21 = field_matrix.f11, field_matrix.f12, field_matrix.f21
    value = (f11 * f11 + f12 * f21)(q)
    if field.is_zero(value):
        if not all(field.is_zero(f(q)) for f in (f11, f12, f21)):
            raise NonSemisimple(f'the field is nilpotent but nonzero at {field.to_sympy(q)}', quadratic=value)
        return [ApparentPair(q, field.zero), ApparentPair(q, field.zero)]
    root = field.sqrt(value)
    if root is None:
        log.debug('dual values at %s live in a quadratic extension', q)
        return [ApparentPair(q, QuadExt(field.zero, field.one, value, field)),
                ApparentPair(q, QuadExt(field.zero, -field.one, value, field))]
    return [ApparentPair(q, root), ApparentPair(q, -root)]


def extract(field_matrix: FieldMatrix, sigma_zeros: Sequence[Any] = (), *,
            allow_float: bool = False) -> List[ApparentPair]:
    '''
    Apparent singularities and dual parameters of a field in normal form.

    The roots of ``f21`` give pairs ``(q, f11(q))``. A root at infinity is reported in the chart ``[s:1]`` with
    ``s = 0`` and ``u`` the top coefficient of ``f11``. A root on a finite pole (or at infinity) carries the blow-up
    coordinate recovered from ``f12``. For ``k > 0`` every zero ``q`` of the cyclic vector contributes ``(q, p)``
    and ``(q, -p)`` with ``p ** 2 = f11(q) ** 2 + f12(q) * f21(q)``; if ``p`` is not in the field it is returned as
    a :class:`~simplehiggs.scalarpoly.QuadExt`.

    Example:

    >>> [(str(p.q), str(p.p)) for p in extract(field_matrix)]
    [('4', '7'), ('5', '9')]

    :param field_matrix: The field.
    :param sigma_zeros: The ``k`` zeros of the cyclic vector.
    :param allow_float: Whether roots that can't be expressed exactly may be returned as float witnesses, such
        pairs are flagged ``approximate``.
    :raises ValidationError: If the number of zeros does not match ``k``.
    :raises NoPivot: If ``f21`` vanishes identically.
    :raises FactorizationUnavailable: If a root can't be expressed and no float fallback is permitted.
    :raises NonSemisimple: If the field is nilpotent and nonzero at a zero of the cyclic vector.
    '''
    spectral = field_matrix.spectral
    field = spectral.field
    k = field_matrix.k
    if len(sigma_zeros) != k:
        raise ValidationError(f'splitting type {k} needs {k} zeros of the cyclic vector, got {len(sigma_zeros)}')
    if field_matrix.f21.is_zero():
        raise NoPivot('f21 vanishes identically')
    pairs: List[ApparentPair] = []
    for q in sigma_zeros:
        pairs.extend(_sigma_pairs(field_matrix, field.convert(q)))
    roots = poly_roots(field_matrix.f21, allow_float=allow_float)
    at_infinity = sum(1 for r in roots if r is ProjectiveValue.INFINITY)
    for root in roots:
        if root is ProjectiveValue.INFINITY:
            pairs.append(_infinity_pair(field_matrix, at_infinity == 1))
        elif is_approximate(root):
            pairs.append(ApparentPair(root, _complex_eval(field_matrix.f11, root), approximate=True))
        else:
            pairs.append(_finite_pair(field_matrix, root))
    log.debug('extracted %d apparent singularities', len(pairs))
    return pairs


def _witness(value: Any, field: ScalarField) -> Tuple[float, float, str]:
    if isinstance(value, complex):
        return value.real, value.imag, ''
    if field.backend == Backend.DEFORMATION:
        return 0.0, 0.0, str(value.to_json() if isinstance(value, QuadExt) else field.to_json(value))
    number = value.witness() if isinstance(value, QuadExt) else field.to_complex(value)
    return number.real, number.imag, ''


def canonical_pairs(pairs: Sequence[ApparentPair], n: int, field: Optional[ScalarField] = None) -> List[ApparentPair]:
    '''
    Rewrites pairs in the chart ``[s:1]`` with ``s != 0`` as ``(1 / s, u * s ** (2 - n))`` in the finite chart and
    sorts, so that two multisets of pairs can be compared with ``==``.
    '''
    field = field or get_field()
    result = []
    for pair in pairs:
        if pair.chart == Chart.INFINITE and not field.is_zero(pair.q):
            q = field.one / pair.q
            result.append(pair._replace(q=q, p=pair.p * q ** (n - 2), chart=Chart.FINITE))
        else:
            result.append(pair)

    def key(pair: ApparentPair) -> Tuple[Any, ...]:
        return (pair.chart != Chart.FINITE,) + _witness(pair.q, field) + _witness(pair.p, field)
    return sorted(result, key=key)


def blowup_coord(spectral: SpectralData, q: Any, p: Any, i: int, eps: int) -> Any:
    '''
    The blow-up coordinate ``v = (p - eps * nu_hat_i) / (q - t_i)`` of a pair near the pole ``t_i``. For the pole at
    infinity ``(q, p)`` are the coordinates ``(s, u)`` of the chart ``[s:1]`` and the base is ``eps * mu - sigma``,
    see :meth:`~simplehiggs.modelcore.SpectralData.infinity_shift`.

    :returns: The coordinate, or :attr:`ProjectiveValue.INFINITY` if ``q = t_i`` but ``p`` is off the base.
    :raises Indeterminate: If the pair sits exactly on the base point.
    '''
    field = spectral.field
    q, p = field.convert(q), field.convert(p)
    if i == spectral.n:
        sigma, mu = spectral.infinity_shift(0)
        base, at = eps * mu - sigma, field.zero
    else:
        base, at = eps * spectral.nu_hat(i), spectral.t(i)
    dq, dp = q - at, p - base
    if field.is_zero(dq):
        if field.is_zero(dp):
            raise Indeterminate(f'the pair sits on the base point over pole {i}, v is 0/0')
        return ProjectiveValue.INFINITY
    return dp / dq


def _prepare(pairs: Sequence[ApparentPair], spectral: SpectralData,
             blown: bool) -> Tuple[List[Tuple[Scalar, Scalar, Optional[Blowup]]], Optional[Blowup]]:
    '''
    Splits pairs into finite ones ``(q, p, blowup)`` and the blow-up data of a pair at infinity, substituting the
    dual parameter of blown pairs.
    '''
    field = spectral.field
    n = spectral.n
    if len(pairs) != n - 3:
        raise ValidationError(f'{n - 3} apparent singularities required, got {len(pairs)}')
    finite: List[Tuple[Scalar, Scalar, Optional[Blowup]]] = []
    infinite: List[ApparentPair] = []
    for pair in pairs:
        if pair.approximate:
            raise ValidationError('approximate pairs can not be used for an exact reconstruction')
        q, p = field.convert(pair.q), field.convert(pair.p)
        if pair.chart == Chart.INFINITE:
            if field.is_zero(q):
                infinite.append(pair)
                continue
            q = field.one / q
            p = p * q ** (n - 2)
        finite.append((q, p, pair.blowup))

    if len(infinite) > 1:
        raise SingularSystem('more than one apparent singularity at infinity', defect=len(infinite) - 1)
    for a in range(len(finite)):
        for b in range(a):
            if field.equal(finite[a][0], finite[b][0]):
                raise SingularSystem(f'apparent singularities {b + 1} and {a + 1} coincide', defect=1)

    prepared = []
    for q, p, blowup in finite:
        i = _pole_index(spectral, q)
        if i is not None and not blown:
            raise PoleCollision(f'apparent singularity {field.to_sympy(q)} sits on t_{i}, use reconstruct_blown')
        if i is not None and (blowup is None or blowup.index != i):
            raise MissingBlowup(f'apparent singularity {field.to_sympy(q)} sits on t_{i} without blow-up coordinate')
        if blown and blowup is not None:
            if not 1 <= blowup.index < n:
                raise ValidationError(f'blow-up index {blowup.index} is not a finite pole')
            t = spectral.t(blowup.index)
            v = field.convert(blowup.v)
            p = blowup.eps * spectral.nu_hat(blowup.index) + v * (q - t)
            blowup = blowup._replace(v=v)
        prepared.append((q, p, blowup))

    at_infinity = None
    if infinite:
        if not blown:
            raise PoleCollision('an apparent singularity sits on the pole at infinity, use reconstruct_blown')
        at_infinity = infinite[0].blowup
        if at_infinity is None or at_infinity.index != n:
            raise MissingBlowup('the apparent singularity at infinity has no blow-up coordinate')
        at_infinity = at_infinity._replace(v=field.convert(at_infinity.v))
    return prepared, at_infinity


def _reconstruct(pairs: Sequence[ApparentPair], spectral: SpectralData, blown: bool) -> FieldMatrix:
    field = spectral.field
    n = spectral.n
    finite, at_infinity = _prepare(pairs, spectral, blown)
    qs = [q for q, _, _ in finite]
    ps = [p for _, p, _ in finite]

    f21 = Poly.from_roots(qs, field)
    if at_infinity is not None:
        f21 = -f21
    f21 = f21.with_bound(n - 3)

    b11 = n - 2
    if at_infinity is None:
        f11 = Poly(vandermonde_inverse_apply(qs, ps, field), field, b11)
    else:
        sigma, mu = spectral.infinity_shift(0)
        u = at_infinity.eps * mu - sigma
        gap = f21.degree
        columns = [j for j in range(b11 + 1) if not gap <= j <= gap + 1]
        rows = [[q ** j for j in columns] for q in qs]
        rows.append([field.one if j == b11 else field.zero for j in columns])
        values = linear_solve(rows, ps + [u], field)
        coeffs = [field.zero] * (b11 + 1)
        for j, value in zip(columns, values):
            coeffs[j] = value
        f11 = Poly(coeffs, field, b11)

    overrides: Dict[int, Scalar] = {}
    for q, p, blowup in finite:
        if blowup is None:
            continue
        i = _pole_index(spectral, q)
        if i is None:
            continue
        t = spectral.t(i)
        line = _linear(q, field)
        rest = f21.exact_div(line)(t)
        slope = blowup.v - (f11 - p).exact_div(line)(t)
        overrides[i] = (2 * blowup.eps * spectral.nu_hat(i) * slope - (t - q) * slope * slope) / rest
        log.debug('regularized residue row at t_%d', i)
    if at_infinity is not None:
        _, mu = spectral.infinity_shift(0)
        overrides[n] = 2 * at_infinity.eps * mu * (at_infinity.v - f11.coeff(b11 - 1)) / f21.coeff(f21.degree)

    f12 = solve_f12(spectral, 0, f11, f21, overrides=overrides)
    return FieldMatrix(spectral, 0, f11, f12, f21)


def reconstruct(pairs: Sequence[ApparentPair], spectral: SpectralData) -> FieldMatrix:
    '''
    The unique field of splitting type ``k = 0`` in normal form with the given apparent singularities.

    ``f21`` is ``(-1) ** m * prod (z - q_j)`` (``m`` pairs at infinity), ``f11`` interpolates the dual parameters
    with the coefficients ``l, l + 1`` removed (``l`` the degree of ``f21``), and ``f12`` follows from the residue
    conditions. The flavor of ``spectral`` decides between Higgs field and connection.

    :raises ValidationError: If the number of pairs is not ``n - 3``.
    :raises SingularSystem: If two abscissae coincide.
    :raises PoleCollision: If an abscissa equals a pole.
    '''
    return _reconstruct(pairs, spectral, False)


def reconstruct_blown(pairs: Sequence[ApparentPair], spectral: SpectralData) -> FieldMatrix:
    '''
    Like :func:`reconstruct`, but pairs carrying a blow-up coordinate ``(i, eps, v)`` get the dual parameter
    ``eps * nu_hat_i + v * (q - t_i)``. Pairs sitting on a pole use the regularized residue condition there, which
    only involves ``v``.

    :raises MissingBlowup: If a pair sits on a pole without blow-up coordinate.
    '''
    return _reconstruct(pairs, spectral, True)


def _base_pair(cluster: HilbCluster, spectral: SpectralData) -> ApparentPair:
    if cluster.pole is None:
        return ApparentPair(cluster.x, cluster.y)
    if cluster.a is None:
        raise MissingBlowup(f'exceptional cluster over t_{cluster.pole} needs the coordinate a')
    return ApparentPair(spectral.t(cluster.pole), cluster.eps * spectral.nu_hat(cluster.pole),
                        blowup=Blowup(cluster.pole, cluster.eps, cluster.a))


def _cluster_pairs(cluster: HilbCluster, exact: ScalarField, lifted: SpectralData) -> List[ApparentPair]:
    '''
    Spreads a cluster into ``mult`` points at distance ``h`` along the curve its parameters describe.
    '''
    deform = lifted.field
    h = deform.h

    def lift(value: Any) -> Scalar:
        return deform.lift(exact.convert(value), exact)

    lambdas = [lift(x) for x in cluster.lambdas]
    if len(lambdas) != cluster.mult - 1:
        raise ValidationError(f'a cluster of multiplicity {cluster.mult} needs {cluster.mult - 1} parameters')

    if cluster.pole is None:
        base = lift(cluster.x)
    else:
        base = lifted.t(cluster.pole)

    def curve(q: Scalar) -> Scalar:
        value = deform.zero
        for lam in reversed(lambdas):
            value = value * (q - base) + lam
        return value

    pairs = []
    for j in range(cluster.mult):
        q = base + j * h
        if cluster.pole is None:
            pairs.append(ApparentPair(q, lift(cluster.y) + (q - base) * curve(q)))
        else:
            v = lift(cluster.a) + (q - base) * curve(q)
            nh = lifted.nu_hat(cluster.pole)
            pairs.append(ApparentPair(q, cluster.eps * nh + (q - base) * v,
                                      blowup=Blowup(cluster.pole, cluster.eps, v)))
    return pairs


def reconstruct_hilb(chart: HilbChart, spectral: SpectralData) -> FieldMatrix:
    '''
    Reconstruction from a point of a Hilbert chart. A cluster of multiplicity ``m`` is deformed into ``m`` distinct
    points ``x + j * h`` on the curve ``p = y + (q - x) * (lambda_0 + .. + lambda_{m-2} * (q - x) ** (m-2))``
    (for exceptional clusters the same curve describes the blow-up coordinate), the deformed field is reconstructed
    over ``QQ(h)`` and the exact limit ``h -> 0`` is taken.

    :raises ValidationError: If the chart has the wrong length, bases coincide or the backend is not exact.
    :raises SingularSystem: If the limit does not exist, carrying the offending cluster.
    '''
    n = spectral.n
    if chart.length != n - 3:
        raise ValidationError(f'the chart has length {chart.length}, {n - 3} required')
    if all(c.mult == 1 for c in chart.clusters):
        return reconstruct_blown([_base_pair(c, spectral) for c in chart.clusters], spectral)
    if spectral.field.backend != Backend.EXACT:
        raise ValidationError('clusters with multiplicity need the exact backend')

    lifted = spectral.over(get_field(Backend.DEFORMATION))
    multiple = next(c for c in chart.clusters if c.mult > 1)
    pairs: List[ApparentPair] = []
    for cluster in chart.clusters:
        if cluster.mult < 1:
            raise ValidationError(f'multiplicity {cluster.mult} is not positive')
        pairs.extend(_cluster_pairs(cluster, spectral.field, lifted))
    try:
        family = reconstruct_blown(pairs, lifted)
    except SingularSystem as exc:
        raise SingularSystem(str(exc), exc.defect, cluster=multiple) from exc
    try:
        entries = [limit_poly(f) for f in (family.f11, family.f12, family.f21)]
    except PoleAtLimit as exc:
        raise SingularSystem(f'the cluster family has no limit: {exc}', cluster=multiple) from exc
    return FieldMatrix(spectral, 0, *entries)


def hilb_params(field_matrix: FieldMatrix, x: Any, mult: int) -> HilbCluster:
    '''
    The cluster of an ordinary base ``x``: ``y = f11(x)`` and the Taylor coefficients ``lambda_i`` of ``f11`` at
    ``x`` of order ``1 .. mult - 1``.

    :raises PoleCollision: If ``x`` is a pole, exceptional clusters are not recovered from ``f11`` alone.
    '''
    spectral = field_matrix.spectral
    x = spectral.field.convert(x)
    if _pole_index(spectral, x) is not None:
        raise PoleCollision('the cluster base is a pole')
    taylor = field_matrix.f11.shift(x)
    return HilbCluster(x, taylor.coeff(0), mult, tuple(taylor.coeff(i + 1) for i in range(mult - 1)))


def _value_to_json(value: Any, field: ScalarField) -> Any:
    if isinstance(value, QuadExt):
        return value.to_json()
    if isinstance(value, complex):
        return {'re': value.real, 'im': value.imag}
    return field.to_json(value)


def pair_to_json(pair: ApparentPair, field: ScalarField) -> Dict[str, Any]:
    if pair.chart == Chart.INFINITE:
        data: Dict[str, Any] = {'chart': Chart.INFINITE.value, 's': _value_to_json(pair.q, field),
                                'u': _value_to_json(pair.p, field)}
    else:
        data = {'q': _value_to_json(pair.q, field), 'p': _value_to_json(pair.p, field)}
    if pair.blowup is not None:
        data['blowup'] = {'index': pair.blowup.index, 'eps': pair.blowup.eps, 'v': field.to_json(pair.blowup.v)}
    if pair.approximate:
        data['approximate'] = True
    return data


def pair_from_json(data: Mapping[str, Any], field: ScalarField, location: str = 'pairs') -> ApparentPair:
    '''
    Parses ``{"q": "4", "p": "7"}`` or ``{"chart": "inf", "s": "0", "u": "3"}``, both with an optional
    ``"blowup": {"index": 3, "eps": 1, "v": "1"}``.

    :raises ParseError: If the document has the wrong shape.
    '''
    try:
        if data.get('chart', Chart.FINITE.value) == Chart.INFINITE.value:
            pair = ApparentPair(field.from_json(data['s']), field.from_json(data['u']), Chart.INFINITE)
        else:
            pair = ApparentPair(field.from_json(data['q']), field.from_json(data['p']))
        blowup = data.get('blowup')
        if blowup is not None:
            eps = int(blowup.get('eps', 1))
            if eps not in (1, -1):
                raise ParseError('eps has to be 1 or -1', f'{location}.blowup.eps')
            pair = pair._replace(blowup=Blowup(int(blowup['index']), eps, field.from_json(blowup['v'])))
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f'malformed apparent pair {data!r}', location) from exc
    return pair


def hilb_from_json(data: Mapping[str, Any], field: ScalarField) -> HilbChart:
    '''
    Parses ``{"clusters": [{"x": "2", "y": "1/3", "mult": 2, "lambda": ["5"]}]}``. Exceptional clusters name the pole
    with ``"pole"`` and give ``"eps"`` and ``"a"`` instead of ``x`` and ``y``.

    :raises ParseError: If the document has the wrong shape.
    '''
    clusters = []
    try:
        for idx, item in enumerate(data['clusters']):
            lambdas = tuple(field.from_json(x) for x in item.get('lambda', []))
            mult = int(item.get('mult', 1))
            if 'pole' in item:
                clusters.append(HilbCluster(field.zero, field.zero, mult, lambdas, int(item['pole']),
                                            int(item.get('eps', 1)), field.from_json(item['a'])))
            else:
                clusters.append(HilbCluster(field.from_json(item['x']), field.from_json(item['y']), mult, lambdas))
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError('malformed Hilbert chart', 'clusters') from exc
    return HilbChart(tuple(clusters))

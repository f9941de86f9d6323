
'''
Spectral data, field matrices in normal form and their residues.
'''

import logging
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import sympy

from .exceptions import NonGeneric, NoPivot, ParseError, PoleCollision, SingularSystem, ValidationError
from .scalar import ScalarField, get_field
from .scalarpoly import Poly, QuadExt, Z, linear_solve
from .types import Check, Flavor, Residue, Scalar, ValidationReport
from .validation import INFINITY_MARK, check_genericity, validate_gl, validate_nu, validate_poles

log = logging.getLogger('simplehiggs.modelcore')


class SpectralData:
    '''
    The pole divisor ``t_1 .. t_n`` with ``(t_1, t_2, t_n) = (0, 1, inf)`` and the residue eigenvalues.

    For the Higgs flavor the eigenvalues at every pole are ``+nu_i`` and ``-nu_i``. For the connection flavor the
    eigenvalues at infinity are ``nu_n`` and ``1 - nu_n``.

    The scaled eigenvalues ``nu_hat_i = nu_i * prod_{j != i, j < n} (t_i - t_j)`` are the values the polynomial
    entries of a field matrix see at the finite poles.

    :param poles: The poles, the last one has to be ``"inf"``.
    :param nu: The eigenvalues ``nu_1 .. nu_n``.
    :param flavor: Higgs or connection.
    :param field: Field the data lives in, defaults to the exact rationals.
    :param check: Enforce the conditions of :func:`~simplehiggs.validation.check_genericity`. Data derived from
        checked data, and data that is only inspected, is built without.
    :raises ValidationError: If the poles or the number of eigenvalues are invalid.
    :raises NonGeneric: If an eigenvalue vanishes or a signed sum of the eigenvalues is an integer.
    '''
    def __init__(self, poles: Sequence[Any], nu: Sequence[Any], flavor: Flavor = Flavor.HIGGS,
                 field: Optional[ScalarField] = None, *, check: bool = True) -> None:
        self._field = field or get_field()
        self._finite = validate_poles(poles, self._field)
        validate_nu(nu, len(self._finite) + 1)
        self._nu = tuple(self._field.convert(x) for x in nu)
        self._flavor = flavor
        if check:
            failed = check_genericity(self._nu, self._field)
            if failed:
                raise NonGeneric(f'the eigenvalues fail the conditions {", ".join(failed)}')

    def __repr__(self) -> str:
        return f'<SpectralData(n={self.n}, flavor={self._flavor.value})>'

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpectralData):
            return NotImplemented
        return (self._flavor == other.flavor and self._field == other.field and self.n == other.n
                and all(self._field.equal(a, b) for a, b in zip(self._finite + self._nu, other.finite + other.nu)))

    def __hash__(self) -> int:
        return hash((self.n, self._flavor, tuple(str(x) for x in self._nu)))

    @property
    def n(self) -> int:
        return len(self._finite) + 1

    @property
    def field(self) -> ScalarField:
        return self._field

    @property
    def flavor(self) -> Flavor:
        return self._flavor

    @property
    def finite(self) -> Tuple[Scalar, ...]:
        '''
        The finite poles ``t_1 .. t_{n-1}``.
        '''
        return self._finite

    @property
    def x(self) -> Tuple[Scalar, ...]:
        '''
        The free poles ``t_3 .. t_{n-1}``.
        '''
        return self._finite[2:]

    @property
    def nu(self) -> Tuple[Scalar, ...]:
        return self._nu

    def pole_product(self, i: int) -> Scalar:
        '''
        ``prod_{j != i, j < n} (t_i - t_j)`` for a finite pole, the derivative of :meth:`weight` at ``t_i``.
        '''
        ti = self.t(i)
        result = self._field.one
        for j, tj in enumerate(self._finite, start=1):
            if j != i:
                result = result * (ti - tj)
        return result

    def t(self, i: int) -> Scalar:
        '''
        The finite pole with 1-based index ``i``.

        :raises IndexError: For the pole at infinity or an index out of range.
        '''
        if not 1 <= i <= len(self._finite):
            raise IndexError(f'{i} is not the index of a finite pole')
        return self._finite[i - 1]

    def nu_hat(self, i: int) -> Scalar:
        return self._nu[i - 1] * self.pole_product(i)

    @property
    def nu_hats(self) -> Tuple[Scalar, ...]:
        return tuple(self.nu_hat(i) for i in range(1, self.n))

    def weight(self) -> Poly:
        '''
        The polynomial ``W(z) = prod_{j < n} (z - t_j)`` with ``dz = W(z) * omega_z``.
        '''
        return Poly.from_roots(self._finite, self._field)

    def eigenvalues(self, i: int) -> Tuple[Scalar, Scalar]:
        '''
        The prescribed residue eigenvalues ``(nu_i^+, nu_i^-)`` at pole ``i``.
        '''
        nu = self._nu[i - 1]
        if i == self.n and self._flavor == Flavor.CONNECTION:
            return nu, self._field.one - nu
        return nu, -nu

    def infinity_shift(self, k: int) -> Tuple[Scalar, Scalar]:
        '''
        Returns ``(sigma, mu)`` such that the condition at infinity reads ``b * c = mu ** 2 - (a + sigma) ** 2`` for
        the top coefficients ``a``, ``b``, ``c`` of ``f11``, ``f12`` and ``f21``.
        '''
        if self._flavor == Flavor.CONNECTION:
            half = self._field.convert('1/2')
            return self._field.convert(k) + half, self._nu[-1] - half
        return self._field.zero, self._nu[-1]

    def with_nu(self, nu: Sequence[Any], flavor: Optional[Flavor] = None) -> 'SpectralData':
        return SpectralData(list(self._finite) + [INFINITY_MARK], nu, flavor or self._flavor, self._field, check=False)

    def over(self, field: ScalarField) -> 'SpectralData':
        '''
        The same data with all scalars moved into ``field``.
        '''
        poles = [field.lift(t, self._field) for t in self._finite] + [INFINITY_MARK]
        return SpectralData(poles, [field.lift(x, self._field) for x in self._nu], self._flavor, field, check=False)

    def genericity(self) -> List[str]:
        '''
        The failed genericity conditions, see :func:`~simplehiggs.validation.check_genericity`.
        '''
        return check_genericity(self._nu, self._field)

    def poles_json(self) -> List[Any]:
        return [self._field.to_json(t) for t in self._finite] + [INFINITY_MARK]

    def to_json(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            't': self.poles_json(),
            'nu': [self._field.to_json(x) for x in self._nu],
            'flavor': self._flavor.value,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any], field: Optional[ScalarField] = None, *,
                  check: bool = True) -> 'SpectralData':
        '''
        Parses ``{"n": 5, "t": [...], "nu": [...], "flavor": "higgs"}``, ``n`` is optional. ``check`` is passed on to
        the constructor.

        :raises ParseError: If keys are missing or have the wrong type.
        '''
        field = field or get_field()
        try:
            poles = data['t']
            nu = data['nu']
        except (KeyError, TypeError) as exc:
            raise ParseError('spectral data needs "t" and "nu"', 'spectral') from exc
        try:
            flavor = Flavor.from_string(data.get('flavor', 'higgs'))
        except ValueError as exc:
            raise ParseError(str(exc), 'spectral.flavor') from exc
        if 'n' in data and data['n'] != len(poles):
            raise ParseError(f'n is {data["n"]} but {len(poles)} poles were given', 'spectral.n')
        parsed = [p if isinstance(p, str) and p.strip().lower() in (INFINITY_MARK, '∞') else field.from_json(p)
                  for p in poles]
        return cls(parsed, [field.from_json(x) for x in nu], flavor, field, check=check)


def bounds(n: int, k: int) -> Tuple[int, int, int]:
    '''
    Degree bounds of ``(f11, f12, f21)`` for splitting type ``O(k) + O(-k-1)``.
    '''
    return n - 2, n + 2 * k - 1, n - 2 * k - 3


def _coerce(value: Union[Poly, Sequence[Any]], bound: int, field: ScalarField) -> Poly:
    poly = value if isinstance(value, Poly) else Poly(value, field)
    if 0 <= poly.degree <= bound or (poly.is_zero() and bound >= 0):
        return poly.with_bound(bound)
    return poly


class FieldMatrix:
    '''
    Trace free polynomial matrix ``[[f11, f12], [f21, -f11]]`` representing ``A(z) * omega_z`` on the finite chart
    of ``O(k) + O(-k-1)``, with ``omega_z = dz / prod_{j < n} (z - t_j)``. The chart at infinity is reached through
    ``R_k = diag(z ** k, z ** (-k-1))``.

    Entries that exceed their degree bound are kept as they are, :func:`validate` reports them.

    :param spectral: The spectral data.
    :param k: The splitting type.
    :param f11: Upper left entry, a :class:`Poly` or ascending coefficients.
    :param f12: Upper right entry.
    :param f21: Lower left entry.
    :param is_connection: Whether ``d + A * omega_z`` is meant, defaults to the flavor of ``spectral``.
    '''
    def __init__(self, spectral: SpectralData, k: int, f11: Any, f12: Any, f21: Any, *,
                 is_connection: Optional[bool] = None) -> None:
        self._spectral = spectral
        self._k = k
        field = spectral.field
        b11, b12, b21 = bounds(spectral.n, k)
        self._f11 = _coerce(f11, b11, field)
        self._f12 = _coerce(f12, b12, field)
        self._f21 = _coerce(f21, max(b21, 0), field)
        self._is_connection = spectral.flavor == Flavor.CONNECTION if is_connection is None else is_connection

    def __repr__(self) -> str:
        return f'<FieldMatrix(k={self._k}, f11={self._f11}, f12={self._f12}, f21={self._f21})>'

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (self._k == other.k and self._is_connection == other.is_connection and self._f11 == other.f11
                and self._f12 == other.f12 and self._f21 == other.f21)

    def __hash__(self) -> int:
        return hash((self._k, self._f11, self._f12, self._f21))

    @property
    def spectral(self) -> SpectralData:
        return self._spectral

    @property
    def field(self) -> ScalarField:
        return self._spectral.field

    @property
    def n(self) -> int:
        return self._spectral.n

    @property
    def k(self) -> int:
        return self._k

    @property
    def f11(self) -> Poly:
        return self._f11

    @property
    def f12(self) -> Poly:
        return self._f12

    @property
    def f21(self) -> Poly:
        return self._f21

    @property
    def is_connection(self) -> bool:
        return self._is_connection

    def bounds(self) -> Tuple[int, int, int]:
        return bounds(self.n, self._k)

    def matrix(self) -> sympy.Matrix:
        '''
        The matrix ``A(z)`` as a sympy matrix in ``z``.
        '''
        f11 = self._f11.to_sympy(Z)
        return sympy.Matrix([[f11, self._f12.to_sympy(Z)], [self._f21.to_sympy(Z), -f11]])

    def over(self, field: ScalarField) -> 'FieldMatrix':
        return FieldMatrix(self._spectral.over(field), self._k, self._f11.over(field), self._f12.over(field),
                           self._f21.over(field), is_connection=self._is_connection)

    def to_json(self) -> Dict[str, Any]:
        return {
            'k': self._k,
            'f11': self._f11.to_json(),
            'f12': self._f12.to_json(),
            'f21': self._f21.to_json(),
            'connection': self._is_connection,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any], spectral: SpectralData) -> 'FieldMatrix':
        '''
        Parses ``{"k": 0, "f11": [...], "f12": [...], "f21": [...], "connection": false}``.

        :raises ParseError: If keys are missing or have the wrong type.
        '''
        field = spectral.field
        try:
            k = int(data.get('k', 0))
            entries = [Poly([field.from_json(c) for c in data[key]], field) for key in ('f11', 'f12', 'f21')]
        except (AttributeError, KeyError, TypeError, ValueError) as exc:
            raise ParseError('field matrix needs "f11", "f12" and "f21" coefficient lists', 'field') from exc
        connection = bool(data.get('connection', spectral.flavor == Flavor.CONNECTION))
        return cls(spectral, k, *entries, is_connection=connection)


class GlTuple(NamedTuple):
    '''
    Residue eigenvalues ``(xi_i^+, xi_i^-)`` of a ``gl_2`` connection on a bundle of degree ``d``.
    '''
    xi: Tuple[Tuple[Scalar, Scalar], ...]
    degree: int = -1


def normalize_gl_to_sl(xi: GlTuple, poles: Sequence[Any], field: Optional[ScalarField] = None) -> SpectralData:
    '''
    Twists a ``gl_2`` connection on a bundle of odd degree ``d`` by the rank one connection that removes the traces
    at the finite poles and brings the degree to ``-1``, which gives ``nu_i = (xi_i^+ - xi_i^-) / 2`` for ``i < n``
    and ``nu_n = xi_n^+ + sum_{i < n} (xi_i^+ + xi_i^-) / 2 + (d + 1) / 2``.

    :raises ValidationError: If the Fuchs relation does not hold or the degree is even.
    :raises NonGeneric: If some signed sum of the eigenvalues is an integer.
    '''
    field = field or get_field()
    pairs = tuple((field.convert(a), field.convert(b)) for a, b in xi.xi)
    validate_gl(pairs, xi.degree, field)
    if xi.degree % 2 == 0:
        raise ValidationError(f'a bundle of even degree {xi.degree} has no twist of degree -1')
    half = field.convert('1/2')
    nu = [(a - b) * half for a, b in pairs[:-1]]
    shift = field.convert((xi.degree + 1) // 2)
    nu.append(pairs[-1][0] + sum(((a + b) * half for a, b in pairs[:-1]), field.zero) + shift)
    return SpectralData(poles, nu, Flavor.CONNECTION, field)


def _eigenpair(field: ScalarField, trace: Scalar, det: Scalar) -> Tuple[Any, Any]:
    half = field.convert('1/2')
    disc = trace * trace - 4 * det
    root = field.sqrt(disc)
    if root is None:
        return QuadExt(trace * half, half, disc, field), QuadExt(trace * half, -half, disc, field)
    return (trace + root) * half, (trace - root) * half


def residue(field_matrix: FieldMatrix, i: int) -> Residue:
    '''
    Residue at the pole ``t_i``.

    At a finite pole it is ``A(t_i) / prod_{j != i} (t_i - t_j)``. At infinity the chart ``w = 1 / z`` with the frame
    change ``R_k`` gives ``-[[a, b], [c, -a]]`` for the top coefficients ``a``, ``b``, ``c`` of the entries, plus
    ``diag(-k, k + 1)`` from ``R_k^{-1} dR_k`` for connections.

    Example:

    >>> res = residue(field_matrix, 1)
    >>> res.eigenvalues
    (1/3, -1/3)

    :param field_matrix: The field.
    :param i: 1-based pole index, ``n`` is the pole at infinity.
    :raises IndexError: If the index is out of range.
    '''
    spectral = field_matrix.spectral
    field = spectral.field
    n = spectral.n
    if not 1 <= i <= n:
        raise IndexError(f'pole index {i} out of range 1..{n}')
    if i < n:
        ti = spectral.t(i)
        scale = field.one / spectral.pole_product(i)
        a = field_matrix.f11(ti) * scale
        matrix = ((a, field_matrix.f12(ti) * scale), (field_matrix.f21(ti) * scale, -a))
    else:
        b11, b12, b21 = field_matrix.bounds()
        a = field_matrix.f11.coeff(b11)
        b = field_matrix.f12.coeff(b12)
        c = field_matrix.f21.coeff(b21) if b21 >= 0 else field.zero
        if field_matrix.is_connection:
            k = field.convert(field_matrix.k)
            matrix = ((-a - k, -b), (-c, a + k + 1))
        else:
            matrix = ((-a, -b), (-c, a))
    trace = matrix[0][0] + matrix[1][1]
    det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    return Residue(matrix, trace, det, _eigenpair(field, trace, det))


def validate(field_matrix: FieldMatrix) -> ValidationReport:
    '''
    Checks the degree bounds, the splitting type bound, that ``f21`` does not vanish and that the residue at every
    pole has the prescribed trace and determinant.
    '''
    spectral = field_matrix.spectral
    field = spectral.field
    n, k = spectral.n, field_matrix.k
    b11, b12, b21 = field_matrix.bounds()
    checks = [
        Check('degree_f11', field_matrix.f11.degree <= b11, f'degree {field_matrix.f11.degree}, bound {b11}'),
        Check('degree_f12', field_matrix.f12.degree <= b12, f'degree {field_matrix.f12.degree}, bound {b12}'),
        Check('degree_f21', field_matrix.f21.degree <= b21, f'degree {field_matrix.f21.degree}, bound {b21}'),
        Check('bundle_type', 0 <= k <= (n - 3) // 2, f'k = {k}, bound {(n - 3) // 2}'),
        Check('irreducible', not field_matrix.f21.is_zero()),
    ]
    for i in range(1, n + 1):
        res = residue(field_matrix, i)
        plus, minus = spectral.eigenvalues(i)
        passed = field.equal(res.trace, plus + minus) and field.equal(res.det, plus * minus)
        name = f'residue_{i}' if i < n else 'residue_inf'
        checks.append(Check(name, passed, f'trace {field.to_sympy(res.trace)}, det {field.to_sympy(res.det)}'))
    report = ValidationReport(tuple(checks))
    if not report.ok:
        log.debug('validation failed: %s', ', '.join(report.failed()))
    return report


def normalize_auto(field_matrix: FieldMatrix) -> FieldMatrix:
    '''
    Applies the automorphism ``[[a, p(z)], [0, 1]]`` of ``O(k) + O(-k-1)`` with ``deg p <= 2k + 1`` that makes the
    leading coefficient of ``f21`` equal to ``(-1) ** m`` (``m`` the number of roots at infinity) and kills the
    coefficients ``l .. l + 2k + 1`` of ``f11``, ``l`` being the degree of ``f21``.

    The result is idempotent under this function.

    :raises NoPivot: If ``f21`` vanishes identically.
    '''
    spectral = field_matrix.spectral
    field = spectral.field
    f11, f12, f21 = field_matrix.f11, field_matrix.f12, field_matrix.f21
    if f21.is_zero():
        raise NoPivot('f21 vanishes identically')
    k = field_matrix.k
    lead = f21.coeff(f21.degree)
    at_infinity = f21.bound - f21.degree
    scale = (field.one if at_infinity % 2 == 0 else -field.one) / lead

    rest = f11
    coeffs = [field.zero] * (2 * k + 2)
    for j in reversed(range(2 * k + 2)):
        coeffs[j] = rest.coeff(f21.degree + j) / lead
        if coeffs[j]:
            monomial = Poly([field.zero] * j + [coeffs[j]], field, j)
            rest = rest - monomial * f21
    p = Poly(coeffs, field, 2 * k + 1)
    log.debug('normalizing with scale %s and p = %s', scale, p)

    new_f12 = (f12 + (f11 * p).scale(2) - p * p * f21).scale(field.one / scale)
    if field_matrix.is_connection:
        new_f12 = new_f12 + (p.derivative() * spectral.weight()).scale(field.one / scale)
    b11, b12, _ = field_matrix.bounds()
    return FieldMatrix(spectral, k, rest.with_bound(max(b11, rest.degree)),
                       new_f12.with_bound(max(b12, new_f12.degree)), f21.scale(scale).with_bound(f21.bound),
                       is_connection=field_matrix.is_connection)


def spectral_curve(field_matrix: FieldMatrix) -> Poly:
    '''
    The polynomial ``g = f11 ** 2 + f12 * f21`` of the spectral curve ``eta ** 2 = g(z)``, with
    ``g(t_i) = nu_hat_i ** 2`` at the finite poles of a valid Higgs field.

    :raises ValidationError: For a connection.
    '''
    if field_matrix.is_connection:
        raise ValidationError('spectral curves are only defined for Higgs fields')
    f11, f12, f21 = field_matrix.f11, field_matrix.f12, field_matrix.f21
    curve = f11 * f11 + f12 * f21
    return Poly(curve.coeffs, field_matrix.field, 2 * field_matrix.n - 4)


def regular_pole_value(spectral: SpectralData, i: int, f11: Poly, f21: Poly) -> Scalar:
    '''
    The value ``f12(t_i) = (nu_hat_i ** 2 - f11(t_i) ** 2) / f21(t_i)`` forced by the residue at a finite pole.

    :raises PoleCollision: If ``f21`` vanishes at ``t_i``.
    '''
    field = spectral.field
    ti = spectral.t(i)
    denom = f21(ti)
    if field.is_zero(denom):
        raise PoleCollision(f'an apparent singularity sits on the pole t_{i}')
    nh = spectral.nu_hat(i)
    value = f11(ti)
    return (nh * nh - value * value) / denom


def regular_infinity_value(spectral: SpectralData, k: int, f11: Poly, f21: Poly) -> Scalar:
    '''
    The top coefficient of ``f12`` forced by the residue at infinity.

    :raises PoleCollision: If ``f21`` has a root at infinity.
    '''
    field = spectral.field
    b11, _, b21 = bounds(spectral.n, k)
    top = f21.coeff(b21)
    if field.is_zero(top):
        raise PoleCollision('an apparent singularity sits on the pole at infinity')
    sigma, mu = spectral.infinity_shift(k)
    a = f11.coeff(b11) + sigma
    return (mu * mu - a * a) / top


def solve_f12(spectral: SpectralData, k: int, f11: Poly, f21: Poly, *,
              overrides: Optional[Mapping[int, Scalar]] = None,
              extra_rows: Sequence[Tuple[Sequence[Scalar], Scalar]] = ()) -> Poly:
    '''
    Determines ``f12`` from the residue conditions, which are linear once ``f11`` and ``f21`` are fixed: the value at
    every finite pole and the top coefficient for the pole at infinity.

    :param spectral: The spectral data.
    :param k: The splitting type.
    :param f11: Upper left entry.
    :param f21: Lower left entry.
    :param overrides: Values at poles (1-based, ``n`` is the top coefficient) replacing the regular formula, used
        where an apparent singularity collides with the pole.
    :param extra_rows: Further rows ``(coefficients, rhs)`` acting on the ascending coefficients of ``f12``.
    :raises PoleCollision: If a collision is not covered by ``overrides``.
    :raises SingularSystem: If the rows do not determine ``f12``.
    '''
    field = spectral.field
    n = spectral.n
    overrides = overrides or {}
    size = n + 2 * k
    rows: List[List[Scalar]] = []
    rhs: List[Scalar] = []
    for i in range(1, n):
        ti = spectral.t(i)
        power = field.one
        row = []
        for _ in range(size):
            row.append(power)
            power = power * ti
        rows.append(row)
        rhs.append(overrides[i] if i in overrides else regular_pole_value(spectral, i, f11, f21))
    rows.append([field.zero] * (size - 1) + [field.one])
    rhs.append(overrides[n] if n in overrides else regular_infinity_value(spectral, k, f11, f21))
    for row, value in extra_rows:
        rows.append(list(row))
        rhs.append(value)
    if len(rows) != size:
        raise SingularSystem(f'{len(rows)} conditions for {size} coefficients', defect=abs(size - len(rows)))
    return Poly(linear_solve(rows, rhs, field), field, size - 1)


def evaluation_row(field: ScalarField, x: Scalar, size: int, derivative: int = 0) -> List[Scalar]:
    '''
    Row of the linear functional ``f -> f^(derivative)(x)`` on ascending coefficients.
    '''
    row = []
    for i in range(size):
        if i < derivative:
            row.append(field.zero)
            continue
        factor = 1
        for m in range(derivative):
            factor *= i - m
        row.append(field.convert(factor) * x ** (i - derivative))
    return row


def eigen_table(field_matrix: FieldMatrix) -> Dict[str, Any]:
    '''
    Residue eigenvalues at every pole, serialized.
    '''
    field = field_matrix.field
    table = {}
    for i in range(1, field_matrix.n + 1):
        res = residue(field_matrix, i)
        name = str(i) if i < field_matrix.n else INFINITY_MARK
        table[name] = [v.to_json() if isinstance(v, QuadExt) else field.to_json(v) for v in res.eigenvalues]
    return table

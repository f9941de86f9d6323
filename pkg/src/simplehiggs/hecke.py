
'''
Elementary modifications and the jumping families they produce.
'''

import logging
from typing import Any, Dict, NamedTuple, Optional, Sequence, Tuple

import sympy

from .apparent import reconstruct
from .exceptions import BundleBoundExceeded, ParamOutsideX, PoleAtLimit, PoleCollision, ValidationError
from .modelcore import FieldMatrix, SpectralData, bounds, evaluation_row, solve_f12
from .scalar import H, ScalarField, get_field
from .scalarpoly import W, Z, Poly, limit_poly
from .types import (
    ApparentPair, Backend, Flavor, HilbPoint5, JumpParams, Modification, ModificationKind, ProjectiveValue, Scalar,
)
from .validation import validate_jump_params

log = logging.getLogger('simplehiggs.hecke')


class Gluing(NamedTuple):
    '''
    Gluing matrix of a modification, diagonal in a basis adapted to its direction.
    '''
    #: Columns are the direction and a complement
    basis: sympy.Matrix
    diagonal: sympy.Matrix

    @property
    def matrix(self) -> sympy.Matrix:
        return (self.basis * self.diagonal * self.basis.inv()).applyfunc(sympy.cancel)


def gluing_matrix(modification: Modification, field: Optional[ScalarField] = None) -> Gluing:
    '''
    The gluing matrix ``diag(1, z - a)`` of a lower and ``diag(1 / (z - a), 1)`` of an upper modification at ``a``,
    in the basis whose first vector is the direction.

    Example:

    >>> gluing_matrix(Modification(0, (1, 0), ModificationKind.LOWER)).matrix
    Matrix([[1, 0], [0, z]])

    :raises ValidationError: If the direction is zero.
    '''
    field = field or get_field()
    x, y = (field.to_sympy(field.convert(c)) for c in modification.direction)
    if x == 0 and y == 0:
        raise ValidationError('the direction of a modification has to be nonzero')
    basis = sympy.Matrix([[x, 0], [y, 1]]) if x != 0 else sympy.Matrix([[0, 1], [y, 0]])
    a = field.to_sympy(field.convert(modification.point))
    if modification.kind == ModificationKind.LOWER:
        diagonal = sympy.diag(1, Z - a)
    else:
        diagonal = sympy.diag(1 / (Z - a), 1)
    return Gluing(basis, diagonal)


def modification_matrices(q1: Any, p1: Any, q2: Any,
                          field: Optional[ScalarField] = None) -> Tuple[sympy.Matrix, sympy.Matrix, sympy.Matrix]:
    '''
    The matrices ``P1`` (lower modification at ``q1``), ``P2`` (moving the direction to the eigenline of ``p1``) and
    ``P3`` (upper modification at ``q1``), with ``c = (q1 - q2) / (2 p1)`` in ``P2``.

    :raises ParamOutsideX: If ``p1`` is zero.
    '''
    field = field or get_field()
    q1, p1, q2 = (field.convert(x) for x in (q1, p1, q2))
    if field.is_zero(p1):
        raise ParamOutsideX('p1 has to be nonzero')
    c = field.to_sympy((q1 - q2) / (2 * p1))
    lower = gluing_matrix(Modification(q1, (1, 0), ModificationKind.LOWER), field).matrix
    upper = gluing_matrix(Modification(q1, (1, 0), ModificationKind.UPPER), field).matrix
    return lower, sympy.Matrix([[1, 0], [c, 1]]), upper


def standard_frame(k: int) -> sympy.Matrix:
    '''
    ``R_k = diag(z ** k, z ** (-k-1))``, the transition of ``O(k) + O(-k-1)``.
    '''
    return sympy.diag(Z ** k, Z ** (-k - 1))


def _limit_expr(expr: sympy.Expr) -> sympy.Expr:
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
    den0 = den.subs(H, 0)
    if den0 == 0:
        raise PoleAtLimit(f'{expr} has a pole at h = 0')
    return sympy.cancel(num.subs(H, 0) / den0)


class GluedFamily:
    '''
    A field given by its matrix on ``U_0`` (polynomial in ``z``, in units of ``omega_z``), its matrix on ``U_inf``
    (rational in ``w``, regular at ``w = 0``, in units of ``omega_w = z ** (n-2) * omega_z``) and the transition
    ``T`` from the frame on ``U_inf`` to the frame on ``U_0``.

    :param spectral: The spectral data.
    :param k: Declared splitting type.
    :param u0: ``(f11, f12, f21)`` on ``U_0``.
    :param u_inf: The matrix on ``U_inf``.
    :param transition: The transition ``T``.
    :param sigma_zeros: Zeros of the cyclic vector.
    '''
    def __init__(self, spectral: SpectralData, k: int, u0: Tuple[Poly, Poly, Poly], u_inf: sympy.Matrix,
                 transition: sympy.Matrix, *, sigma_zeros: Sequence[Scalar] = ()) -> None:
        self.spectral = spectral
        self.k = k
        self.u0 = u0
        self.u_inf = u_inf
        self.transition = transition
        self.sigma_zeros = tuple(sigma_zeros)

    def __repr__(self) -> str:
        return f'<GluedFamily(k={self.k}, transition={self.transition.tolist()})>'

    @property
    def field(self) -> ScalarField:
        return self.spectral.field

    @property
    def is_connection(self) -> bool:
        return self.spectral.flavor == Flavor.CONNECTION

    def matrix_u0(self) -> sympy.Matrix:
        f11, f12, f21 = (f.to_sympy(Z) for f in self.u0)
        return sympy.Matrix([[f11, f12], [f21, -f11]])

    def limit(self) -> 'GluedFamily':
        '''
        The exact limit ``h -> 0`` of a family over the deformation field.

        :raises PoleAtLimit: If some entry has a pole at ``h = 0``.
        '''
        exact = get_field(Backend.EXACT)
        return GluedFamily(self.spectral.over(exact), self.k, tuple(limit_poly(f) for f in self.u0),
                           self.u_inf.applyfunc(_limit_expr), self.transition.applyfunc(_limit_expr),
                           sigma_zeros=[exact.lift(q, self.field) for q in self.sigma_zeros])

    def to_field(self, k: Optional[int] = None) -> FieldMatrix:
        '''
        The matrix on ``U_0`` as a field matrix. This is the normal form when the transition is ``R_k`` up to a frame
        change that is holomorphic and invertible near infinity.
        '''
        return FieldMatrix(self.spectral, self.k if k is None else k, *self.u0)

    def to_json(self) -> Dict[str, Any]:
        return {
            'k': self.k,
            'u0': [f.to_json() for f in self.u0],
            'u_inf': [[str(x) for x in row] for row in self.u_inf.tolist()],
            'transition': [[str(x) for x in row] for row in self.transition.tolist()],
            'sigma_zeros': [self.field.to_json(q) for q in self.sigma_zeros],
        }


def _at_infinity(matrix: sympy.Matrix, transition: sympy.Matrix, n: int, weight: sympy.Expr,
                 connection: bool) -> sympy.Matrix:
    '''
    Moves a matrix on ``U_0`` to ``U_inf`` through the transition and rewrites it in ``w`` and ``omega_w``.
    '''
    moved = transition.inv() * matrix * transition
    if connection:
        moved = moved + transition.inv() * transition.diff(Z) * weight
    return (moved / Z ** (n - 2)).subs(Z, 1 / W).applyfunc(sympy.cancel)


def check_compatible(family: GluedFamily) -> bool:
    '''
    Whether ``T^{-1} A T (+ T^{-1} dT)`` on the overlap equals the matrix on ``U_inf`` and the latter is regular at
    ``w = 0``.
    '''
    n = family.spectral.n
    weight = family.spectral.weight().to_sympy(Z)
    expected = _at_infinity(family.matrix_u0(), family.transition, n, weight, family.is_connection)
    for have, want in zip(family.u_inf, expected):
        if sympy.cancel(have - want) != 0:
            log.debug('gluing mismatch: %s != %s', have, want)
            return False
        _, den = sympy.fraction(sympy.cancel(have))
        if den.subs(W, 0) == 0:
            log.debug('entry %s is singular at w = 0', have)
            return False
    return True


def _conjugate(f11: Poly, f12: Poly, f21: Poly, q1: Scalar, c: Scalar) -> Tuple[Poly, Poly, Poly]:
    '''
    ``P^{-1} A P`` for ``P = [[1 / (z - q1), 0], [c, z - q1]]``, requires ``f21(q1) = 0`` and
    ``f21'(q1) = 2 c f11(q1)``.
    '''
    field = f11.field
    line = Poly([-q1, field.one], field, 1)
    square = line * line
    a = f11 + (f12 * line).scale(c)
    b = f12 * square
    d = (f21 - (f11 * line).scale(2 * c) - (f12 * square).scale(c * c)).exact_div(square)
    return a, b, d


def lift_jump(jp: JumpParams, spectral: SpectralData) -> Tuple[SpectralData, Scalar, Scalar, Scalar, Scalar]:
    field = spectral.field
    validate_jump_params(jp._replace(q1=field.convert(jp.q1), p1=field.convert(jp.p1), q2=field.convert(jp.q2),
                                     p2=field.convert(jp.p2), lam=field.convert(jp.lam)),
                         field, allow_collided=False)
    if not jp.deform:
        return spectral, field.convert(jp.q1), field.convert(jp.p1), field.convert(jp.q2), field.convert(jp.p2)
    if field.backend != Backend.EXACT:
        raise ValidationError('deformed jump parameters need the exact backend')
    deform = get_field(Backend.DEFORMATION)
    lifted = spectral.over(deform)
    q1, p1, lam = (deform.lift(field.convert(x), field) for x in (jp.q1, jp.p1, jp.lam))
    return lifted, q1, p1, q1 + deform.h, p1 + lam * deform.h


def jump_family_h(jp: JumpParams, spectral: SpectralData) -> GluedFamily:
    '''
    The family ``(P1 P2 P3)^{-1} A P1 P2 P3`` on ``U_0`` and ``R_0^{-1} A R_0`` on ``U_inf`` for ``n = 5``, where ``A``
    is the field of splitting type 0 with apparent singularities ``(q1, p1), (q2, p2)``. The transition is
    ``T = P^{-1} R_0``. With ``jp.deform`` set, ``q2 = q1 + h`` and ``p2 = p1 + lam * h`` over ``QQ(h)``.

    :raises ValidationError: If ``n != 5`` or the flavor is not Higgs.
    :raises ParamOutsideX: If the parameters are outside the parameter space.
    '''
    if spectral.n != 5:
        raise ValidationError('the jumping family is defined for n = 5')
    if spectral.flavor != Flavor.HIGGS:
        raise ValidationError('the jumping family of connections lives in simplehiggs.connjump')
    lifted, q1, p1, q2, p2 = lift_jump(jp, spectral)
    field = lifted.field
    base = reconstruct([ApparentPair(q1, p1), ApparentPair(q2, p2)], lifted)
    c = (q1 - q2) / (2 * p1)
    u0 = _conjugate(base.f11, base.f12, base.f21, q1, c)
    p1_, p2_, p3_ = modification_matrices(q1, p1, q2, field)
    transition = ((p1_ * p2_ * p3_).inv() * standard_frame(0)).applyfunc(sympy.cancel)
    u_inf = _at_infinity(base.matrix(), standard_frame(0), 5, lifted.weight().to_sympy(Z), False)
    log.debug('jumping family at q1=%s, c=%s', q1, c)
    return GluedFamily(lifted, 0, u0, u_inf, transition, sigma_zeros=[q1])


def jump_limit_h(family: GluedFamily) -> FieldMatrix:
    '''
    The limit ``h -> 0`` of a deformed jumping family, a field of splitting type ``k + 1`` whose cyclic vector
    vanishes at ``q1``.

    :raises ValidationError: If the family is not over the deformation field.
    '''
    if family.field.backend != Backend.DEFORMATION:
        raise ValidationError('the family is not deformed')
    return family.limit().to_field(family.k + 1)


def renormalize_q(family: GluedFamily, jp: JumpParams) -> FieldMatrix:
    '''
    Transforms the matrix on ``U_0`` by ``Q1 = [[z - q1, 1 / c], [-c, 0]]``, which gives the normal form of
    splitting type 0 with apparent data ``(q1, -p1), (q2, p2)``.

    :raises ParamOutsideX: If ``q1 = q2``.
    '''
    field = family.field
    a, b, d = family.u0
    q1 = family.sigma_zeros[0] if family.sigma_zeros else field.convert(jp.q1)
    if jp.deform:
        c = -field.h / (2 * field.lift(get_field().convert(jp.p1), get_field()))
    else:
        if field.equal(field.convert(jp.q1), field.convert(jp.q2)):
            raise ParamOutsideX('q1 and q2 have to differ')
        c = (field.convert(jp.q1) - field.convert(jp.q2)) / (2 * field.convert(jp.p1))
    line = Poly([-q1, field.one], field, 1)
    f11 = -a - (d * line).scale(field.one / c)
    f12 = d.scale(-field.one / (c * c))
    f21 = (a * line).scale(2 * c) - b.scale(c * c) + d * line * line
    b11, b12, b21 = bounds(family.spectral.n, 0)
    return FieldMatrix(family.spectral, 0, f11.with_bound(max(b11, f11.degree)), f12.with_bound(max(b12, f12.degree)),
                       f21.with_bound(max(b21, f21.degree)))


def jump_chain(field_matrix: FieldMatrix, pivot: Any, collide: Any, lam: Any, *,
               sigma_zeros: Sequence[Any] = (), transition: Optional[sympy.Matrix] = None) -> GluedFamily:
    '''
    One step of the jumping chain: the apparent singularity ``collide`` moves into ``pivot`` along
    ``q = pivot + h``, ``p = p_pivot + lam * h``, the lower and upper modification at ``pivot`` along the eigenline of
    ``p_pivot`` is applied and the limit ``h -> 0`` is taken. The result has splitting type ``k + 1`` and the
    cyclic vector gains the zero ``pivot``.

    Along the deformation ``f21`` and ``f11`` are changed only through ``f21 / (z - collide)``, so the other apparent
    singularities stay, and ``f12`` is solved from the residue conditions together with the value and the slope of
    the spectral curve at the existing zeros of the cyclic vector.

    :param field_matrix: Field of splitting type ``k`` over the exact rationals.
    :param pivot: Apparent singularity the other one collides into.
    :param collide: The moving apparent singularity.
    :param lam: Slope of the approach.
    :param sigma_zeros: The ``k`` zeros of the cyclic vector of ``field_matrix``.
    :param transition: Transition of ``field_matrix``, defaults to ``R_k``.
    :raises BundleBoundExceeded: If ``k + 1 > (n - 3) // 2``.
    :raises ValidationError: If pivot or collide are not distinct simple roots of ``f21``.
    :raises ParamOutsideX: If the dual parameter of the pivot vanishes.
    :raises PoleCollision: If the pivot is a pole.
    '''
    spectral = field_matrix.spectral
    exact = spectral.field
    n, k = spectral.n, field_matrix.k
    if k + 1 > (n - 3) // 2:
        raise BundleBoundExceeded(f'splitting type {k + 1} exceeds {(n - 3) // 2} for n = {n}')
    if exact.backend != Backend.EXACT:
        raise ValidationError('the jumping chain needs the exact backend')
    if len(sigma_zeros) != k:
        raise ValidationError(f'splitting type {k} needs {k} zeros of the cyclic vector')
    q1, q2 = exact.convert(pivot), exact.convert(collide)
    f21 = field_matrix.f21
    if exact.equal(q1, q2):
        raise ValidationError('pivot and collide have to differ')
    for q in (q1, q2):
        if not exact.is_zero(f21(q)) or exact.is_zero(f21.derivative()(q)):
            raise ValidationError(f'{exact.to_sympy(q)} is not a simple apparent singularity')
    if any(exact.equal(q1, t) for t in spectral.finite):
        raise PoleCollision('the pivot sits on a pole')
    p1 = field_matrix.f11(q1)
    if exact.is_zero(p1):
        raise ParamOutsideX('the dual parameter of the pivot has to be nonzero')

    deform = get_field(Backend.DEFORMATION)
    lifted = spectral.over(deform)
    h = deform.h
    f11, f12, f21 = (f.over(deform) for f in (field_matrix.f11, field_matrix.f12, f21))
    q1d, q2d, p1d, lamd = (deform.lift(x, exact) for x in (q1, q2, p1, exact.convert(lam)))
    moving = q1d + h
    rest = f21.exact_div(Poly([-q2d, deform.one], deform, 1))
    f21_h = (rest * Poly([-moving, deform.one], deform, 1)).with_bound(f21.bound)
    mu = (p1d + lamd * h - f11(moving)) / rest(moving)
    f11_h = f11 + rest.scale(mu)

    curve = f11 * f11 + f12 * f21
    size = n + 2 * k
    rows = []
    for q in sigma_zeros:
        qd = deform.lift(exact.convert(q), exact)
        value_row = evaluation_row(deform, qd, size)
        slope_row = evaluation_row(deform, qd, size, 1)
        e0, e1 = f21_h(qd), f21_h.derivative()(qd)
        rows.append(([e0 * x for x in value_row], curve(qd) - f11_h(qd) ** 2))
        rows.append(([e0 * x + e1 * y for x, y in zip(slope_row, value_row)],
                     curve.derivative()(qd) - 2 * f11_h(qd) * f11_h.derivative()(qd)))
    f12_h = solve_f12(lifted, k, f11_h, f21_h, extra_rows=rows)

    other = rest.exact_div(Poly([-q1d, deform.one], deform, 1))
    c = -h * other(q1d) / (2 * p1d)
    u0 = _conjugate(f11_h, f12_h, f21_h, q1d, c)
    limit_u0 = tuple(limit_poly(f) for f in u0)

    line = sympy.Matrix([[Z - exact.to_sympy(q1), 0], [0, 1 / (Z - exact.to_sympy(q1))]])
    prev = standard_frame(k) if transition is None else transition
    new_transition = (line * prev).applyfunc(sympy.cancel)
    b11, b12, b21 = bounds(n, k + 1)
    u0_exact = (limit_u0[0].with_bound(max(b11, limit_u0[0].degree)),
                limit_u0[1].with_bound(max(b12, limit_u0[1].degree)),
                limit_u0[2].with_bound(max(b21, 0, limit_u0[2].degree)))
    matrix = sympy.Matrix([[u0_exact[0].to_sympy(Z), u0_exact[1].to_sympy(Z)],
                           [u0_exact[2].to_sympy(Z), -u0_exact[0].to_sympy(Z)]])
    u_inf = _at_infinity(matrix, new_transition, n, spectral.weight().to_sympy(Z), False)
    log.info('jumped from splitting type %d to %d at %s', k, k + 1, q1)
    return GluedFamily(spectral, k + 1, u0_exact, u_inf, new_transition,
                       sigma_zeros=[exact.convert(q) for q in sigma_zeros] + [q1])


def gl_to_pair(field_matrix: FieldMatrix, q: Any, p: Any) -> HilbPoint5:
    '''
    Hilbert-chart data of a collided pair ``(q, p), (q, -p)`` at a zero ``q`` of the cyclic vector, with
    ``lam_minus = -g'(q) / (2 p)`` for the spectral curve ``g``.

    :raises ValidationError: If ``p ** 2`` is not ``g(q)``.
    '''
    field = field_matrix.field
    q, p = field.convert(q), field.convert(p)
    curve = field_matrix.f11 * field_matrix.f11 + field_matrix.f12 * field_matrix.f21
    if field.is_zero(p) or not field.equal(p * p, curve(q)):
        raise ValidationError('p has to be a nonzero square root of the spectral curve at q')
    lam_minus = -curve.derivative()(q) / (2 * p)
    return HilbPoint5((ApparentPair(q, p), ApparentPair(q, -p)), ProjectiveValue.INFINITY, lam_minus, None, None, None)

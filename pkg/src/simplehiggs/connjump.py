
'''
The jumping family of connections for ``n = 5``.

A family of connections on ``O + O(-1)`` is built as ``nabla_0 + Phi`` where ``Phi`` is the renormalized Higgs
jumping family of :mod:`simplehiggs.hecke` with eigenvalues ``nu'`` and ``nabla_0`` is glued from the matrix ``B_w``
on the chart at infinity. The free parameters of ``B_w`` are fixed so that the family converges as ``q2 -> q1``
(the coefficients ``f_0 .. f_3`` and ``e_2``), so that the residue of ``nabla_0`` preserves an eigenline of the
residue of ``Phi`` at every finite pole (``d_1 .. d_4``) and so that the residues of the sum have the prescribed
eigenvalues (``nu'``).

Units: matrices on the finite chart are polynomial in ``z`` and multiply ``dz / W(z)`` with
``W(z) = z (z - 1) (z - x_1) (z - x_2)``. On the chart at infinity ``B_w`` multiplies
``omega_w = dw / (w (w - 1) (x_1 w - 1) (x_2 w - 1)) = z ** 3 * dz / W(z)``.
'''

import logging
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import sympy

from .apparent import reconstruct
from .exceptions import (
    DegenerateEigenSolve, DegenerateQuadratic, InconsistentConstruction, ParseError, SingularSystem, ValidationError,
)
from .hecke import lift_jump
from .modelcore import FieldMatrix, SpectralData, solve_f12
from .scalar import ScalarField, get_field
from .scalarpoly import W, Poly, QuadExt, limit_h0, limit_poly, vandermonde_inverse_apply
from .types import ApparentPair, Backend, ConnJumpParams, Flavor, JumpParams, Scalar

log = logging.getLogger('simplehiggs.connjump')

#: Symbols used for the unsolved coefficients of ``B_w``
D_SYMBOLS = sympy.symbols('d1:5')


class NablaZero(NamedTuple):
    '''
    The coefficients of ``B_w`` fixed by convergence, and the gauge ``T_inf``.
    '''
    #: ``f_0 .. f_3``
    f: Tuple[Scalar, Scalar, Scalar, Scalar]
    #: ``e_0, e_1, e_2``
    e: Tuple[Scalar, Scalar, Scalar]
    #: ``[[1, nu_5'], [0, 1]]``
    t_inf: Any
    #: ``2 (z - q1) F(z) + 2 p1 E(z) - W(z)``, identically zero once the coefficients are substituted
    convergence: Poly
    #: ``q1 - q2``, the factor of the lower left entry
    dq: Scalar
    #: ``(x_1, x_2)``
    x: Tuple[Scalar, Scalar]
    field: ScalarField

    def b_w(self, d: Optional[Sequence[Scalar]] = None) -> sympy.Matrix:
        '''
        The matrix ``B_w`` in ``w``. Without ``d`` the coefficients ``d_1 .. d_4`` stay symbolic.
        '''
        to_sym = self.field.to_sympy
        f0, f1, f2, f3 = (to_sym(x) for x in self.f)
        e0, e1, e2 = (to_sym(x) for x in self.e)
        d1, d2, d3, d4 = D_SYMBOLS if d is None else (to_sym(x) for x in d)
        x1, x2 = (to_sym(x) for x in self.x)
        upper = f3 * W ** 3 + f2 * W ** 2 + f1 * W + f0
        return sympy.Matrix([
            [upper, d4 * W ** 4 + d3 * W ** 3 + d2 * W ** 2 + d1 * W],
            [to_sym(self.dq) * (e2 * W ** 2 + e1 * W + e0), (W - 1) * (x1 * W - 1) * (x2 * W - 1) - upper],
        ])


class PoleEigen(NamedTuple):
    '''
    Eigenvalue bookkeeping at a finite pole ``t_i``.
    '''
    index: int
    eps: int
    #: ``-2 e1 p1 - 2 e0 p1 (q1 + t_i) + prod_{j != i} (q1 - t_j)``
    beta1: Scalar
    #: ``p1 (q1 - t_i) - (q1 - q2) (lam (q1 - t_i) + nu_5' t_i (q1 - t_i) (q2 - t_i) + eps nu'_i W'(t_i))``
    beta2: Scalar
    #: Eigenvalue of the residue of ``nabla_0`` on the chosen eigenline of ``Phi``
    alpha: Scalar
    nu_prime: Scalar


class _Context(NamedTuple):
    spectral: SpectralData
    q1: Scalar
    p1: Scalar
    q2: Scalar
    p2: Scalar
    lam: Scalar
    e0: Scalar
    e1: Scalar
    eps: Tuple[int, ...]
    #: ``nu_5 + 1/2``
    nu5: Scalar
    deformed: bool
    #: Index of the pole ``q1`` is blown up at, the scalars then run along the blow-up curve in ``h``
    blowup: Optional[int] = None

    @property
    def field(self) -> ScalarField:
        return self.spectral.field


def _check(params: ConnJumpParams, spectral: SpectralData) -> None:
    if spectral.n != 5:
        raise ValidationError('the jumping family of connections is defined for n = 5')
    if spectral.flavor != Flavor.CONNECTION:
        raise ValidationError('the jumping family of connections needs spectral data of the connection flavor')
    if len(params.eps) != 4 or any(e not in (1, -1) for e in params.eps):
        raise ValidationError(f'expected four signs, got {params.eps!r}')


def _blowup_context(params: ConnJumpParams, spectral: SpectralData, i: int) -> _Context:
    '''
    The context along the curve ``q1 = t_i + h``, ``p1 = eps_i * nu_hat_i + lam * h`` through the point with
    blow-up coordinate ``v = lam`` on the exceptional curve over ``(t_i, eps_i * nu_hat_i)``.
    '''
    source = spectral.field
    if source.backend != Backend.EXACT:
        raise ValidationError('blow-up data at a pole needs the exact backend')
    deform = get_field(Backend.DEFORMATION)
    lifted = spectral.over(deform)
    jp = params.jump
    q2, p2, lam, e0, e1 = (deform.lift(source.convert(x), source)
                           for x in (jp.q2, jp.p2, jp.lam, params.e0, params.e1))
    q1 = lifted.t(i) + deform.h
    p1 = params.eps[i - 1] * lifted.nu_hat(i) + lam * deform.h
    nu5 = lifted.nu[-1] + deform.convert('1/2')
    log.debug('blowing up q1 at t_%d with v = %s', i, jp.lam)
    return _Context(lifted, q1, p1, q2, p2, lam, e0, e1, tuple(params.eps), nu5, False, i)


def _context(params: ConnJumpParams, spectral: SpectralData, *, along_blowup: bool = False) -> _Context:
    '''
    :param along_blowup: Accept ``q1 = t_i`` with blow-up data ``p1 = eps_i * nu_hat_i`` and ``v = lam`` on an
        undeformed family, see :func:`_blowup_context`.
    :raises SingularSystem: If an apparent singularity sits on a pole and no blow-up data applies.
    '''
    _check(params, spectral)
    lifted, q1, p1, q2, p2 = lift_jump(params.jump, spectral)
    field, source = lifted.field, spectral.field
    e0, e1, lam = (field.lift(source.convert(x), source) for x in (params.e0, params.e1, params.jump.lam))
    for i, t in enumerate(lifted.finite, start=1):
        if field.equal(q2, t):
            raise SingularSystem(f'an apparent singularity sits on t_{i}, the flag equations need blow-up data there')
    for i, t in enumerate(lifted.finite, start=1):
        if not field.equal(q1, t):
            continue
        if along_blowup and not params.jump.deform and field.equal(p1, params.eps[i - 1] * lifted.nu_hat(i)):
            return _blowup_context(params, spectral, i)
        raise SingularSystem(f'an apparent singularity sits on t_{i}, the flag equations need blow-up data there')
    nu5 = lifted.nu[-1] + field.convert('1/2')
    return _Context(lifted, q1, p1, q2, p2, lam, e0, e1, tuple(params.eps), nu5, params.jump.deform)


def _at_blowup(ctx: _Context, values: Sequence[Scalar]) -> Tuple[Scalar, ...]:
    '''
    The values themselves, or their limits at the exceptional point for a blown up context.

    :raises PoleAtLimit: If a value does not extend to the exceptional point.
    '''
    if ctx.blowup is None:
        return tuple(values)
    return tuple(limit_h0(x) for x in values)


def _others(ctx: _Context, x: Scalar, skip: int) -> Scalar:
    '''
    ``prod_{j != skip} (x - t_j)`` over the finite poles.
    '''
    result = ctx.field.one
    for j, t in enumerate(ctx.spectral.finite, start=1):
        if j != skip:
            result = result * (x - t)
    return result


def _nabla(ctx: _Context) -> NablaZero:
    field = ctx.field
    half = field.convert('1/2')
    x1, x2 = ctx.spectral.x
    q1, p1, e0, e1 = ctx.q1, ctx.p1, ctx.e0, ctx.e1
    cubic = _others(ctx, q1, 1)
    f = (half,
         (q1 - x1 - x2 - 1) * half,
         (-2 * e0 * p1 + q1 * q1 + x1 + x2 + x1 * x2 - q1 * (1 + x1 + x2)) * half,
         (-2 * e1 * p1 - 2 * e0 * p1 * q1 + cubic) * half)
    e2 = q1 / (2 * p1) * (-2 * e1 * p1 - 2 * e0 * p1 * q1 + cubic)
    upper = Poly(reversed(f), field, 3)
    lower = Poly([e2, e1, e0], field, 2)
    line = Poly([-q1, 1], field, 1)
    convergence = (line * upper).scale(2) + lower.scale(2 * p1) - ctx.spectral.weight()
    t_inf = sympy.Matrix([[1, field.to_sympy(ctx.nu5)], [0, 1]])
    return NablaZero(f, (e0, e1, e2), t_inf, convergence, q1 - ctx.q2, (x1, x2), field)


def _parts(ctx: _Context, nabla: NablaZero) -> Tuple[Poly, Poly, Poly]:
    '''
    The pieces ``(phi, eta, delta_0)`` of ``nabla_0`` on the finite chart: ``[[phi, D + delta_0], [eta, -phi]]``
    with ``D = d_1 z^3 + d_2 z^2 + d_3 z + d_4``.
    '''
    field = ctx.field
    f0, f1, f2, f3 = nabla.f
    e0, e1, e2 = nabla.e
    upper = Poly([f3, f2, f1, f0], field, 3)
    lower = Poly([e2, e1, e0], field, 2)
    z = Poly([0, 1], field, 1)
    cubic = ctx.spectral.weight().exact_div(z)
    nu, dq = ctx.nu5, nabla.dq
    phi = upper + (z * lower).scale(nu * dq)
    eta = lower.scale(dq)
    delta0 = -(z * (cubic + upper.scale(2))).scale(nu) - (z * z * lower).scale(nu * nu * dq)
    return phi, eta, delta0


def _higgs_lower(ctx: _Context) -> Tuple[Poly, Poly]:
    '''
    ``f11`` and ``f21`` of the renormalized Higgs family, with apparent data ``(q1, -p1), (q2, p2)``.
    '''
    field = ctx.field
    slope = (ctx.p1 + ctx.p2) / (ctx.q2 - ctx.q1)
    f11 = Poly([-ctx.p1 - slope * ctx.q1, slope], field, 3)
    f21 = Poly.from_roots([ctx.q1, ctx.q2], field).with_bound(2)
    return f11, f21


def _closed_form(ctx: _Context) -> Tuple[Poly, Poly]:
    # nu5 carries the shift by 1/2
    field = ctx.field
    x1, x2 = ctx.spectral.x
    q1, p1, q2, lam, e0, e1, nu = ctx.q1, ctx.p1, ctx.q2, ctx.lam, ctx.e0, ctx.e1, ctx.nu5
    half = field.convert('1/2')
    cubic = _others(ctx, q1, 1)
    h = q2 - q1
    slope = 2 * p1 / h + lam
    c3 = 1 - 2 * nu * e0 * h
    c2 = -2 * nu * e1 * h + q1 - x1 - x2 - 1
    c1 = (-2 * (p1 - nu * q1 * q1 * h) * e0 + 2 * nu * q1 * h * e1 - nu * h / p1 * q1 * cubic
          + q1 * q1 - (1 + x1 + x2) * q1 + x1 + x2 + x1 * x2)
    c0 = -2 * p1 * (1 + e1 + e0 * q1) + cubic
    f11 = Poly([c0 * half - slope * q1, c1 * half + slope, c2 * half, c3 * half], field, 3)
    f21 = Poly([q1 * q2 + (q1 - q2) * q1 / (2 * p1) * (-2 * e1 * p1 - 2 * e0 * p1 * q1 + cubic),
                -(q1 + q2 + e1 * h),
                1 + e0 * (q1 - q2)], field, 2)
    return f11, f21


def closed_form_F(params: ConnJumpParams, spectral: SpectralData) -> Tuple[Poly, Poly]:
    '''
    The entries ``F11`` and ``F21`` of the family in closed form, over the deformation field when
    ``params.jump.deform`` is set. The eigenvalue at infinity enters shifted, as ``nu_5' = nu_5 + 1/2``.

    Example:

    >>> f11, f21 = closed_form_F(params._replace(jump=params.jump._replace(deform=True)), spectral)
    >>> limit_poly(f21).to_sympy()
    q1**2 - 2*q1*z + z**2

    :raises ValidationError: If ``n != 5`` or the flavor is not the connection flavor.
    :raises ParamOutsideX: If the parameters are outside the parameter space.
    '''
    return _closed_form(_context(params, spectral))


def build_nabla0(params: ConnJumpParams, spectral: SpectralData) -> NablaZero:
    '''
    The coefficients ``f_0 .. f_3`` and ``e_2`` of ``B_w`` for which the family converges as ``q2 -> q1``. The
    returned record carries the convergence polynomial, which vanishes identically.

    :raises InconsistentConstruction: If the convergence polynomial does not vanish.
    '''
    ctx = _context(params, spectral)
    nabla = _nabla(ctx)
    if not nabla.convergence.is_zero():
        raise InconsistentConstruction(f'convergence polynomial does not vanish: {nabla.convergence}')
    return nabla


def _pole_eigen(ctx: _Context) -> List[PoleEigen]:
    field = ctx.field
    q1, p1, q2, lam, e0, e1 = ctx.q1, ctx.p1, ctx.q2, ctx.lam, ctx.e0, ctx.e1
    dq = q1 - q2
    result = []
    for i in range(1, 5):
        t = ctx.spectral.t(i)
        prod = ctx.spectral.pole_product(i)
        eps = ctx.eps[i - 1]
        beta1 = -2 * e1 * p1 - 2 * e0 * p1 * (q1 + t) + _others(ctx, q1, i)
        shift = lam * (q1 - t) + ctx.nu5 * t * (q1 - t) * (q2 - t)
        alpha0 = beta1 * (p1 * (q1 - t) - dq * shift) / (2 * p1 * (q2 - t) * prod)
        alpha1 = beta1 * dq / (2 * p1 * (q2 - t))
        if field.is_zero(1 + alpha1):
            raise DegenerateEigenSolve(f'the eigenvalue equation at t_{i} degenerates', index=i)
        nu_prime = eps * (ctx.spectral.nu[i - 1] + alpha0) / (1 + alpha1)
        beta2 = p1 * (q1 - t) - dq * (shift + eps * nu_prime * prod)
        alpha = beta1 * beta2 / (2 * p1 * (q2 - t) * prod)
        result.append(PoleEigen(i, eps, beta1, beta2, alpha, nu_prime))
    return result


def solve_nu_prime(params: ConnJumpParams, spectral: SpectralData) -> Tuple[Scalar, ...]:
    '''
    The eigenvalues ``nu'_1 .. nu'_5`` of the Higgs part: ``nu'_5 = nu_5 + 1/2`` and, at the finite poles,
    ``eps_i * nu'_i - alpha_i = nu_i`` with ``alpha_i = beta1 * beta2 / (2 p1 (q2 - t_i) W'(t_i))``, which is linear in
    ``nu'_i``.

    With ``q1 = t_i`` and blow-up data ``p1 = eps_i * nu_hat_i``, ``v = lam``, the eigenvalues are the limits along
    the blow-up curve.

    :raises DegenerateEigenSolve: If the equation at a pole has no unique solution.
    '''
    ctx = _context(params, spectral, along_blowup=True)
    return _at_blowup(ctx, [p.nu_prime for p in _pole_eigen(ctx)] + [ctx.nu5])


def _line(ctx: _Context, f11: Poly, f21: Poly, i: int, nu_prime: Scalar) -> Scalar:
    '''
    First coordinate of the eigenvector ``(x, 1)`` of the residue of ``Phi`` at ``t_i`` for ``-eps_i * nu'_i``.
    '''
    t = ctx.spectral.t(i)
    return (f11(t) - ctx.eps[i - 1] * nu_prime * ctx.spectral.pole_product(i)) / f21(t)


def _solve_d(ctx: _Context, nabla: NablaZero, nu_prime: Sequence[Scalar]) -> Tuple[Scalar, ...]:
    phi, eta, delta0 = _parts(ctx, nabla)
    f11, f21 = _higgs_lower(ctx)
    values = []
    for i in range(1, 5):
        t = ctx.spectral.t(i)
        x = _line(ctx, f11, f21, i, nu_prime[i - 1])
        values.append(eta(t) * x * x - 2 * phi(t) * x - delta0(t))
    ascending = vandermonde_inverse_apply(ctx.spectral.finite, values, ctx.field)
    return tuple(reversed(ascending))


def solve_d(params: ConnJumpParams, spectral: SpectralData, nu_prime: Sequence[Any]) -> Tuple[Scalar, ...]:
    '''
    The coefficients ``d_1 .. d_4`` of ``B_w`` from the flag equations: the residue of ``nabla_0`` at ``t_i`` maps
    the eigenline of the residue of ``Phi`` into itself. The values ``D(t_i)`` are interpolated at the finite poles.

    With ``q1 = t_i`` and blow-up data the values are computed along the blow-up curve and the limits at the
    exceptional point are returned.

    :param nu_prime: The eigenvalues from :func:`solve_nu_prime`.
    :raises SingularSystem: If an apparent singularity sits on a pole without blow-up data.
    :raises PoleAtLimit: If the coefficients do not extend to the exceptional point.
    '''
    ctx = _context(params, spectral, along_blowup=True)
    nu_prime = [ctx.field.convert(x) for x in nu_prime]
    return _at_blowup(ctx, _solve_d(ctx, _nabla(ctx), nu_prime))


def closed_form_d(params: ConnJumpParams, spectral: SpectralData, nu_prime: Sequence[Any]) -> Tuple[Scalar, ...]:
    '''
    Like :func:`solve_d`, with the values ``D(t_i) = h_i / ((q1 - t_i) ** 2 (q2 - t_i) ** 2)`` where

    ``h_i = 1/2 (q1 - t_i) beta1 (p1 (q1 - t_i) + p1 (q2 - t_i) - 2 (q1 - t_i) B + (q1 - q2) / p1 B ** 2)``

    and ``B = lam (q1 - t_i) + nu_5' t_i (q1 - t_i) (q2 - t_i) + eps_i nu'_i W'(t_i)``. The expression stays finite as
    ``q2 -> q1``. Blow-up data at a pole is handled as in :func:`solve_d`.
    '''
    ctx = _context(params, spectral, along_blowup=True)
    field = ctx.field
    q1, p1, q2 = ctx.q1, ctx.p1, ctx.q2
    half = field.convert('1/2')
    values = []
    for pole in _pole_eigen(ctx):
        i = pole.index
        t = ctx.spectral.t(i)
        nu_p = field.convert(nu_prime[i - 1])
        big = ctx.lam * (q1 - t) + ctx.nu5 * t * (q1 - t) * (q2 - t) + pole.eps * nu_p * ctx.spectral.pole_product(i)
        h_i = half * (q1 - t) * pole.beta1 * (p1 * (q1 - t) + p1 * (q2 - t) - 2 * (q1 - t) * big
                                              + (q1 - q2) / p1 * big * big)
        values.append(h_i / ((q1 - t) ** 2 * (q2 - t) ** 2))
    return _at_blowup(ctx, list(reversed(vandermonde_inverse_apply(ctx.spectral.finite, values, field))))


class ConnJumpFamily:
    '''
    The assembled family ``[[F11, F12], [F21, -F11]] * dz / W(z)`` on ``O + O(-1)`` together with the intermediate
    data of its construction.

    :param params: The parameters.
    :param spectral: The spectral data, over the deformation field for deformed parameters.
    :param entries: ``(F11, F12, F21)`` with ``F12`` from the residue conditions.
    :param pipeline: ``(F11, F12, F21)`` as the sum of ``nabla_0`` and the Higgs part.
    '''
    def __init__(self, params: ConnJumpParams, spectral: SpectralData, entries: Tuple[Poly, Poly, Poly],
                 pipeline: Tuple[Poly, Poly, Poly], *, nu_prime: Tuple[Scalar, ...], nabla0: NablaZero,
                 d: Tuple[Scalar, ...], poles: Sequence[PoleEigen], higgs: FieldMatrix,
                 parts: Tuple[Poly, Poly, Poly]) -> None:
        self.params = params
        self.spectral = spectral
        self.f11, self.f12, self.f21 = entries
        self.pipeline = pipeline
        self.nu_prime = nu_prime
        self.nabla0 = nabla0
        self.d = d
        self.poles = tuple(poles)
        self.higgs = higgs
        #: ``(phi, eta, delta)`` of ``nabla_0`` on the finite chart
        self.parts = parts

    def __repr__(self) -> str:
        return f'<ConnJumpFamily(eps={self.params.eps}, deformed={self.params.jump.deform})>'

    @property
    def field(self) -> ScalarField:
        return self.spectral.field

    def to_field(self) -> FieldMatrix:
        return FieldMatrix(self.spectral, 0, self.f11, self.f12, self.f21, is_connection=True)

    def agrees(self) -> bool:
        '''
        Whether both constructions produce the same entries.
        '''
        return (self.f11, self.f12, self.f21) == self.pipeline

    def flag_residuals(self) -> List[Scalar]:
        '''
        ``delta(t_i) - eta(t_i) x_i ** 2 + 2 phi(t_i) x_i`` for the eigenvector ``(x_i, 1)`` of the Higgs part, zero
        when the residue of ``nabla_0`` preserves the eigenline.
        '''
        phi, eta, delta = self.parts
        result = []
        for i in range(1, 5):
            t = self.spectral.t(i)
            pole = self.poles[i - 1]
            x = (self.higgs.f11(t) - pole.eps * pole.nu_prime * self.spectral.pole_product(i)) / self.higgs.f21(t)
            result.append(delta(t) - eta(t) * x * x + 2 * phi(t) * x)
        return result

    def to_json(self) -> Dict[str, Any]:
        field = self.field
        return {
            'params': conn_params_to_json(self.params, field),
            'f11': self.f11.to_json(),
            'f12': self.f12.to_json(),
            'f21': self.f21.to_json(),
            'nu_prime': [field.to_json(x) for x in self.nu_prime],
            'd': [field.to_json(x) for x in self.d],
            'f': [field.to_json(x) for x in self.nabla0.f],
            'e': [field.to_json(x) for x in self.nabla0.e],
            'alpha': [field.to_json(p.alpha) for p in self.poles],
            'agrees': self.agrees(),
        }


def assemble(params: ConnJumpParams, spectral: SpectralData) -> ConnJumpFamily:
    '''
    Builds the family. ``F11`` and ``F21`` come from :func:`closed_form_F`, ``F12`` from the five residue
    conditions of the connection. The sum of ``nabla_0`` (with :func:`build_nabla0`, :func:`solve_d`) and the Higgs
    part with eigenvalues :func:`solve_nu_prime` is kept as :attr:`ConnJumpFamily.pipeline` and agrees entrywise.

    :raises ValidationError: If ``n != 5`` or the flavor is not the connection flavor.
    :raises DegenerateEigenSolve: If an eigenvalue equation degenerates.
    :raises SingularSystem: If an apparent singularity sits on a pole.
    :raises InconsistentConstruction: If the closed form and the assembled connection differ.
    '''
    ctx = _context(params, spectral)
    field = ctx.field
    nabla = _nabla(ctx)
    f11, f21 = _closed_form(ctx)
    poles = _pole_eigen(ctx)
    nu_prime = tuple(p.nu_prime for p in poles) + (ctx.nu5,)
    d = _solve_d(ctx, nabla, nu_prime)
    phi, eta, delta0 = _parts(ctx, nabla)
    delta = delta0 + Poly(reversed(d), field, 3)

    higgs_spectral = ctx.spectral.with_nu(nu_prime, Flavor.HIGGS)
    higgs = reconstruct([ApparentPair(ctx.q1, -ctx.p1), ApparentPair(ctx.q2, ctx.p2)], higgs_spectral)
    pipeline = ((higgs.f11 + phi).with_bound(3), (higgs.f12 + delta).with_bound(4), (higgs.f21 + eta).with_bound(2))
    f12 = solve_f12(ctx.spectral, 0, f11, f21)
    family = ConnJumpFamily(params, ctx.spectral, (f11, f12, f21), pipeline, nu_prime=nu_prime, nabla0=nabla, d=d,
                            poles=poles, higgs=higgs, parts=(phi, eta, delta))
    if not family.agrees():
        raise InconsistentConstruction(f'closed form and assembled connection differ for {params}')
    log.debug('assembled connection jump family with nu\' = %s', nu_prime)
    return family


def connection_limit(family: ConnJumpFamily) -> FieldMatrix:
    '''
    The limit ``h -> 0`` in the frame of ``O(1) + O(-2)``: ``Q1 A Q1^{-1} + Q1 d(Q1^{-1})`` with
    ``Q1 = [[z - q1, 1 / c], [-c, 0]]`` and ``c = (q1 - q2) / (2 p1)``, which is
    ``[[c L F12 - F11, L^2 F12 - 2 L F11 / c - F21 / c^2 + W / c], [-c^2 F12, F11 - c L F12]]`` for ``L = z - q1``.

    :raises ValidationError: If the family is not deformed.
    :raises PoleAtLimit: If an entry has a pole at ``h = 0``.
    '''
    if not family.params.jump.deform or family.field.backend != Backend.DEFORMATION:
        raise ValidationError('the family is not deformed')
    field = family.field
    exact = get_field(Backend.EXACT)
    jp = family.params.jump
    q1, p1 = (field.lift(exact.convert(x), exact) for x in (jp.q1, jp.p1))
    c = -field.h / (2 * p1)
    inverse = field.one / c
    line = Poly([-q1, field.one], field, 1)
    f11, f12, f21 = family.f11, family.f12, family.f21
    m11 = (line * f12).scale(c) - f11
    m12 = (line * line * f12 - (line * f11).scale(2 * inverse) - f21.scale(inverse * inverse)
           + family.spectral.weight().scale(inverse))
    m21 = f12.scale(-c * c)
    limits = [limit_poly(m) for m in (m11, m12, m21)]
    log.debug('limit of the connection jump family: %s', limits)
    return FieldMatrix(family.spectral.over(exact), 1, *limits, is_connection=True)


def root_coefficients(params: ConnJumpParams, spectral: SpectralData) -> Tuple[Scalar, Scalar, Scalar]:
    '''
    ``(a1, a2, a3)`` with roots ``q1 + a1 (q2 - q1) -+ sqrt(a3 (q2 - q1)) / a2`` of ``F21``:

    * ``a1 = (1 + e1 + 2 e0 q1) / (2 - 2 e0 (q2 - q1))``
    * ``a2 = 2 p1 (-1 + e0 (q2 - q1))``
    * ``a3 = p1 (-p1 (1 + e1 + 2 e0 q1) ** 2 (q1 - q2) + 2 q1 (q1 - 1) (1 + e0 (q1 - q2)) (q1 - x1) (q1 - x2))``
    '''
    ctx = _context(params, spectral)
    q1, p1, q2, e0, e1 = ctx.q1, ctx.p1, ctx.q2, ctx.e0, ctx.e1
    x1, x2 = ctx.spectral.x
    lead = 1 + e1 + 2 * e0 * q1
    a1 = lead / (2 - 2 * e0 * (q2 - q1))
    a2 = 2 * p1 * (-1 + e0 * (q2 - q1))
    a3 = p1 * (-p1 * lead * lead * (q1 - q2) + 2 * q1 * (q1 - 1) * (1 + e0 * (q1 - q2)) * (q1 - x1) * (q1 - x2))
    return a1, a2, a3


def roots_of(f21: Poly) -> Tuple[QuadExt, QuadExt]:
    '''
    The roots ``c0 - r`` and ``c0 + r`` of a quadratic ``f21`` with ``r ** 2 = (b ** 2 - 4 a c) / (4 a ** 2)``. For the
    ``F21`` of the family this equals ``a3 (q2 - q1) / a2 ** 2`` with the coefficients of :func:`root_coefficients`.

    :raises DegenerateQuadratic: If the quadratic coefficient vanishes.
    '''
    field = f21.field
    a, b, c = f21.coeff(2), f21.coeff(1), f21.coeff(0)
    if field.is_zero(a):
        raise DegenerateQuadratic('the quadratic coefficient of F21 vanishes')
    center = -b / (2 * a)
    r2 = (b * b - 4 * a * c) / (4 * a * a)
    return QuadExt(center, -field.one, r2, field), QuadExt(center, field.one, r2, field)


def apparent_of_conn_jump(family: ConnJumpFamily) -> Tuple[QuadExt, QuadExt, QuadExt, QuadExt]:
    '''
    Apparent singularities ``q1', q2'`` (roots of ``F21``) and their dual parameters ``p_i' = F11(q_i')``, in the
    quadratic extension by the discriminant of ``F21``.

    :raises DegenerateQuadratic: If the quadratic coefficient of ``F21`` vanishes.
    '''
    q1p, q2p = roots_of(family.f21)
    return q1p, q2p, family.f11(q1p), family.f11(q2p)


def conn_params_to_json(params: ConnJumpParams, field: ScalarField) -> Dict[str, Any]:
    jp = params.jump
    source = get_field() if jp.deform and field.backend == Backend.DEFORMATION else field
    return {
        'q1': source.to_json(source.convert(jp.q1)),
        'p1': source.to_json(source.convert(jp.p1)),
        'q2': 'q1+h' if jp.deform else source.to_json(source.convert(jp.q2)),
        'lambda': source.to_json(source.convert(jp.lam)),
        'e0': source.to_json(source.convert(params.e0)),
        'e1': source.to_json(source.convert(params.e1)),
        'eps': ''.join('+' if e > 0 else '-' for e in params.eps),
    }


def conn_params_from_json(data: Mapping[str, Any], field: ScalarField) -> ConnJumpParams:
    '''
    Parses ``{"q1": .., "p1": .., "q2": .., "lambda": .., "e0": .., "e1": .., "eps": "++++"}``. A missing ``q2`` or
    ``"q2": "q1+h"`` selects the deformation ``q2 = q1 + h``.

    :raises ParseError: If keys are missing or malformed.
    '''
    try:
        q1, p1, lam = (field.from_json(data[key]) for key in ('q1', 'p1', 'lambda'))
        e0 = field.from_json(data.get('e0', '0'))
        e1 = field.from_json(data.get('e1', '0'))
        signs = str(data.get('eps', '++++'))
    except (KeyError, TypeError, AttributeError) as exc:
        raise ParseError('connjump needs "q1", "p1" and "lambda"', 'connjump') from exc
    if len(signs) != 4 or any(s not in '+-' for s in signs):
        raise ParseError(f'eps has to be four signs, got {signs!r}', 'connjump.eps')
    eps = tuple(1 if s == '+' else -1 for s in signs)
    raw = data.get('q2')
    if raw is None or (isinstance(raw, str) and raw.replace(' ', '') == 'q1+h'):
        return ConnJumpParams(JumpParams(q1, p1, q1, p1, lam, deform=True), e0, e1, eps)
    q2 = field.from_json(raw)
    return ConnJumpParams(JumpParams(q1, p1, q2, p1 + lam * (q2 - q1), lam), e0, e1, eps)

'''
Tests elementary modifications, the jumping family of Higgs fields and the jumping chain.
'''

import pytest
import sympy

from simplehiggs.apparent import canonical_pairs, extract, reconstruct, reconstruct_blown
from simplehiggs.exceptions import BundleBoundExceeded, ParamOutsideX, PoleCollision, ValidationError
from simplehiggs.hecke import (
    GluedFamily,
    check_compatible,
    gl_to_pair,
    gluing_matrix,
    jump_chain,
    jump_family_h,
    jump_limit_h,
    modification_matrices,
    renormalize_q,
    standard_frame,
)
from simplehiggs.modelcore import SpectralData, validate
from simplehiggs.scalar import get_field
from simplehiggs.scalarpoly import Z
from simplehiggs.types import (
    ApparentPair, Backend, Blowup, Flavor, JumpParams, Modification, ModificationKind, ProjectiveValue,
)

QQ = get_field()
POLES = ['0', '1', '2', '3', 'inf']
NU = ['1/3', '1/5', '1/7', '1/11', '1/13']


def _q(value):
    return QQ.convert(value)


def _spectral(flavor=Flavor.HIGGS, field=None):
    return SpectralData(POLES, NU, flavor, field)


def _jp(q1=4, p1=7, q2=5, p2=9, lam=2, deform=False):
    return JumpParams(_q(q1), _q(p1), _q(q2), _q(p2), _q(lam), deform)


def _base():
    return reconstruct([ApparentPair(_q(4), _q(7)), ApparentPair(_q(5), _q(9))], _spectral())


class TestModification:
    '''
    Tests the gluing matrices.
    '''
    def test_lower(self):
        gluing = gluing_matrix(Modification(0, (1, 0), ModificationKind.LOWER))
        assert gluing.matrix == sympy.Matrix([[1, 0], [0, Z]])

    def test_upper(self):
        gluing = gluing_matrix(Modification(2, (1, 0), ModificationKind.UPPER))
        assert gluing.matrix == sympy.Matrix([[1 / (Z - 2), 0], [0, 1]])

    def test_other_direction(self):
        gluing = gluing_matrix(Modification(0, (0, 1), ModificationKind.LOWER))
        assert gluing.matrix == sympy.Matrix([[Z, 0], [0, 1]])

    def test_zero_direction(self):
        with pytest.raises(ValidationError):
            gluing_matrix(Modification(0, (0, 0), ModificationKind.LOWER))

    def test_jump_matrices(self):
        lower, move, upper = modification_matrices(4, 7, 5)
        assert lower == sympy.diag(1, Z - 4)
        assert move == sympy.Matrix([[1, 0], [sympy.Rational(-1, 14), 1]])
        assert upper == sympy.diag(1 / (Z - 4), 1)
        product = (lower * move * upper).applyfunc(sympy.cancel)
        assert product == sympy.Matrix([[1 / (Z - 4), 0], [sympy.Rational(-1, 14), Z - 4]])

    def test_jump_matrices_p1(self):
        with pytest.raises(ParamOutsideX):
            modification_matrices(4, 0, 5)

    def test_standard_frame(self):
        assert standard_frame(1) == sympy.diag(Z, Z ** -2)


class TestJumpFamily:
    '''
    Tests ``jump_family_h`` and its limit.
    '''
    def test_compatible(self):
        family = jump_family_h(_jp(), _spectral())
        assert family.k == 0
        assert family.sigma_zeros == (_q(4),)
        assert check_compatible(family)

    def test_incompatible(self):
        family = jump_family_h(_jp(), _spectral())
        broken = GluedFamily(family.spectral, 0, family.u0, family.u_inf * 2, family.transition)
        assert not check_compatible(broken)

    def test_renormalize(self):
        jp = _jp()
        field = renormalize_q(jump_family_h(jp, _spectral()), jp)
        assert validate(field).ok
        got = canonical_pairs(extract(field), 5)
        assert [(p.q, p.p) for p in got] == [(_q(4), _q(-7)), (_q(5), _q(9))]

    def test_limit(self):
        family = jump_family_h(_jp(deform=True), _spectral())
        assert family.field.backend == Backend.DEFORMATION
        limit = jump_limit_h(family)
        assert limit.k == 1
        assert limit.f21.degree == 0
        assert validate(limit).ok
        pairs = extract(limit, [4])
        assert [(p.q, p.p) for p in pairs] == [(_q(4), _q(7)), (_q(4), _q(-7))]

    def test_limit_not_deformed(self):
        with pytest.raises(ValidationError):
            jump_limit_h(jump_family_h(_jp(), _spectral()))

    def test_json(self):
        data = jump_family_h(_jp(), _spectral()).to_json()
        assert data['k'] == 0
        assert data['sigma_zeros'] == ['4']
        assert len(data['u0']) == 3

    def test_collided(self):
        with pytest.raises(ParamOutsideX) as excinfo:
            jump_family_h(_jp(q2=4, p2=7), _spectral())
        assert 'have to differ' in str(excinfo.value)

    def test_connection(self):
        with pytest.raises(ValidationError):
            jump_family_h(_jp(), _spectral(Flavor.CONNECTION))

    def test_wrong_n(self):
        spectral = SpectralData(['0', '1', '2', 'inf'], NU[:4])
        with pytest.raises(ValidationError) as excinfo:
            jump_family_h(_jp(), spectral)
        assert 'n = 5' in str(excinfo.value)

    def test_deformed_float(self):
        field = get_field('float')
        jp = JumpParams(*(field.convert(x) for x in (4, 7, 4, 7, 2)), deform=True)
        with pytest.raises(ValidationError):
            jump_family_h(jp, _spectral(field=field))


class TestJumpChain:
    '''
    Tests ``jump_chain`` and ``gl_to_pair``.
    '''
    def test_matches_family(self):
        family = jump_chain(_base(), 4, 5, 2)
        assert family.k == 1
        assert family.sigma_zeros == (_q(4),)
        assert check_compatible(family)
        expected = jump_limit_h(jump_family_h(_jp(deform=True), _spectral()))
        assert family.to_field() == expected

    def test_bound(self):
        family = jump_chain(_base(), 4, 5, 2)
        with pytest.raises(BundleBoundExceeded):
            jump_chain(family.to_field(), 4, 5, 2, sigma_zeros=[4])

    def test_not_apparent(self):
        with pytest.raises(ValidationError) as excinfo:
            jump_chain(_base(), 6, 5, 2)
        assert 'not a simple apparent singularity' in str(excinfo.value)

    def test_same(self):
        with pytest.raises(ValidationError):
            jump_chain(_base(), 4, 4, 2)

    def test_pivot_on_pole(self):
        spectral = _spectral()
        pairs = [ApparentPair(_q(2), spectral.nu_hat(3), blowup=Blowup(3, 1, _q(1))), ApparentPair(_q(5), _q(9))]
        with pytest.raises(PoleCollision):
            jump_chain(reconstruct_blown(pairs, spectral), 2, 5, 1)

    def test_zero_dual(self):
        fm = reconstruct([ApparentPair(_q(7), _q(0)), ApparentPair(_q(8), _q(1))], _spectral())
        with pytest.raises(ParamOutsideX):
            jump_chain(fm, 7, 8, 1)

    def test_gl_to_pair(self):
        limit = jump_chain(_base(), 4, 5, 2).to_field()
        point = gl_to_pair(limit, 4, 7)
        assert point.lam_plus is ProjectiveValue.INFINITY
        assert [(p.q, p.p) for p in point.pairs] == [(_q(4), _q(7)), (_q(4), _q(-7))]
        curve = limit.f11 * limit.f11 + limit.f12 * limit.f21
        assert point.lam_minus == -curve.derivative()(_q(4)) / 14

    def test_gl_to_pair_wrong_value(self):
        limit = jump_chain(_base(), 4, 5, 2).to_field()
        with pytest.raises(ValidationError):
            gl_to_pair(limit, 4, 3)

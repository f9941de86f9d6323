'''
Tests the validation functions.
'''

import pytest

from simplehiggs.exceptions import NonGeneric, ParamOutsideX, ValidationError
from simplehiggs.modelcore import SpectralData
from simplehiggs.scalar import get_field
from simplehiggs.types import Flavor, JumpParams
from simplehiggs.validation import (
    check_genericity,
    is_integer,
    validate_gl,
    validate_jump_params,
    validate_nu,
    validate_poles,
    validate_spectral,
)


def _q(*values):
    field = get_field()
    return [field.convert(v) for v in values]


class TestPoles:
    '''
    Tests the function ``validate_poles``.
    '''
    @pytest.mark.parametrize('poles', [
        ['0', '1', '2', 'inf'],
        ['0', '1', '2', '3', 'inf'],
        [0, 1, '1/2', '-3', '∞'],
        ['0', '1', '2', '3', '4', '5', 'INF'],
    ])
    def test_valid(self, poles):
        finite = validate_poles(poles, get_field())
        assert len(finite) == len(poles) - 1

    def test_too_few(self):
        with pytest.raises(ValidationError) as excinfo:
            validate_poles(['0', '1', 'inf'], get_field())
        assert 'at least 4 poles' in str(excinfo.value)

    def test_last_not_infinity(self):
        with pytest.raises(ValidationError) as excinfo:
            validate_poles(['0', '1', '2', '3'], get_field())
        assert 'last pole' in str(excinfo.value)

    def test_infinity_in_between(self):
        with pytest.raises(ValidationError) as excinfo:
            validate_poles(['0', '1', 'inf', '3', 'inf'], get_field())
        assert 'pole 3 is at infinity' in str(excinfo.value)

    @pytest.mark.parametrize('poles', [['1', '0', '2', 'inf'], ['0', '2', '1', 'inf']])
    def test_normalization(self, poles):
        with pytest.raises(ValidationError) as excinfo:
            validate_poles(poles, get_field())
        assert 'start with 0 and 1' in str(excinfo.value)

    def test_coincide(self):
        with pytest.raises(ValidationError) as excinfo:
            validate_poles(['0', '1', '2', '2', 'inf'], get_field())
        assert 'poles 3 and 4 coincide' in str(excinfo.value)


class TestNu:
    '''
    Tests ``validate_nu`` and ``check_genericity``.
    '''
    def test_shape(self):
        validate_nu(_q(1, 2, 3, 4, 5), 5)
        with pytest.raises(ValidationError):
            validate_nu(_q(1, 2, 3), 5)

    def test_generic(self):
        assert check_genericity(_q('1/3', '1/5', '1/7', '1/11', '1/13'), get_field()) == []

    def test_zero(self):
        failed = check_genericity(_q('1/2', '1/2', '1/2', '1/2', 0), get_field())
        assert 'nonzero' in failed

    def test_integer_sum(self):
        assert check_genericity(_q('1/2', '1/2', '1/3', '1/3', '2'), get_field()) == ['generic']

    def test_float(self):
        field = get_field('float')
        values = [field.convert(x) for x in (0.25, 0.25, 0.5, 0.5)]
        assert check_genericity(values, field) == ['generic']

    @pytest.mark.parametrize('flavor', [Flavor.HIGGS, Flavor.CONNECTION])
    def test_spectral(self, flavor):
        poles = ['0', '1', '2', '3', 'inf']
        assert validate_spectral(SpectralData(poles, ['1/3', '1/5', '1/7', '1/11', '1/13'], flavor)) == []
        spectral = SpectralData(poles, ['1/2', '1/2', '1/3', '1/3', '2'], flavor, check=False)
        assert validate_spectral(spectral) == ['generic']

    @pytest.mark.parametrize('value,expected', [('3', True), ('-2', True), ('1/2', False), ('0', True)])
    def test_is_integer(self, value, expected):
        field = get_field()
        assert is_integer(field, field.convert(value)) is expected


class TestGl:
    '''
    Tests ``validate_gl``.
    '''
    def test_valid(self):
        xi = [tuple(_q(a, b)) for a, b in [('1/3', '-1/3'), ('1/5', '-1/5'), ('1/7', '-1/7'), ('1/11', '10/11')]]
        validate_gl(xi, -1, get_field())

    def test_fuchs(self):
        xi = [tuple(_q(a, b)) for a, b in [('1/3', '-1/3'), ('1/5', '-1/5'), ('1/7', '-1/7'), ('1/11', '1/11')]]
        with pytest.raises(ValidationError) as excinfo:
            validate_gl(xi, -1, get_field())
        assert 'Fuchs relation' in str(excinfo.value)

    def test_degree(self):
        xi = [tuple(_q(a, b)) for a, b in [('1/3', '-1/3'), ('1/5', '-1/5'), ('1/7', '-1/7'), ('1/11', '-12/11')]]
        validate_gl(xi, 1, get_field())
        with pytest.raises(ValidationError) as excinfo:
            validate_gl(xi, -1, get_field())
        assert 'not 1' in str(excinfo.value)

    def test_non_generic(self):
        xi = [tuple(_q(a, b)) for a, b in [('1/2', '-1/2'), ('1/2', '-1/2'), ('1/3', '-1/3'), ('1/3', '2/3')]]
        with pytest.raises(NonGeneric):
            validate_gl(xi, -1, get_field())


class TestJumpParams:
    '''
    Tests ``validate_jump_params``.
    '''
    def test_valid(self):
        validate_jump_params(JumpParams(*_q(4, 7, 5, 9, 2)), get_field())

    def test_slope(self):
        with pytest.raises(ParamOutsideX) as excinfo:
            validate_jump_params(JumpParams(*_q(4, 7, 5, 9, 3)), get_field())
        assert 'lambda' in str(excinfo.value)

    def test_p1_zero(self):
        with pytest.raises(ParamOutsideX) as excinfo:
            validate_jump_params(JumpParams(*_q(4, 0, 5, 2, 2)), get_field())
        assert 'p1 has to be nonzero' in str(excinfo.value)

    def test_collided(self):
        validate_jump_params(JumpParams(*_q(4, 7, 4, 7, 5)), get_field())
        with pytest.raises(ParamOutsideX) as excinfo:
            validate_jump_params(JumpParams(*_q(4, 7, 4, 7, 5)), get_field(), allow_collided=False)
        assert 'have to differ' in str(excinfo.value)

    def test_deformed(self):
        validate_jump_params(JumpParams(*_q(4, 7, 4, 7, 5), deform=True), get_field())
        with pytest.raises(ParamOutsideX):
            validate_jump_params(JumpParams(*_q(4, 0, 4, 0, 5), deform=True), get_field())

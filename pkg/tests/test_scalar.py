'''
Tests the scalar field backends.
'''

import pytest

from simplehiggs.exceptions import ParseError
from simplehiggs.scalar import get_field
from simplehiggs.scalar_exact import DeformationField, RationalField
from simplehiggs.scalar_float import FloatField
from simplehiggs.types import Backend


class TestGetField:
    '''
    Tests the factory ``get_field``.
    '''
    @pytest.mark.parametrize('backend,cls', [
        ('exact', RationalField),
        (Backend.EXACT, RationalField),
        ('deformation', DeformationField),
        ('float', FloatField),
        ('FLOAT', FloatField),
    ])
    def test_backends(self, backend, cls):
        assert isinstance(get_field(backend), cls)

    def test_default_is_exact(self):
        assert get_field().backend == Backend.EXACT

    def test_unknown(self):
        with pytest.raises(NotImplementedError) as excinfo:
            get_field('quaternion')
        assert 'has not been implemented' in str(excinfo.value)

    def test_tolerance(self):
        field = get_field('float', tolerance=1e-3)
        assert field.tolerance == 1e-3
        assert field.equal(field.convert(1), field.convert(1.0005))

    def test_bad_tolerance(self):
        with pytest.raises(ValueError):
            FloatField(tolerance=0)


class TestRationalField:
    '''
    Tests the exact rationals.
    '''
    @pytest.mark.parametrize('text,expected', [('3/4', '3/4'), ('6/8', '3/4'), ('-2', '-2'), (' 5 ', '5')])
    def test_json_roundtrip(self, text, expected):
        field = get_field()
        assert field.to_json(field.from_json(text)) == expected

    def test_from_json_int(self):
        field = get_field()
        assert field.from_json(7) == field.convert(7)

    @pytest.mark.parametrize('data', [1.5, None, [1], True])
    def test_from_json_rejects(self, data):
        with pytest.raises(ParseError):
            get_field().from_json(data)

    def test_parse_error(self):
        with pytest.raises(ParseError) as excinfo:
            get_field().convert('3/')
        assert 'could not parse' in str(excinfo.value)

    def test_sqrt(self):
        field = get_field()
        assert field.sqrt(field.convert('9/4')) == field.convert('3/2')
        assert field.sqrt(field.convert(2)) is None

    def test_arithmetic(self):
        field = get_field()
        a, b = field.convert('1/3'), field.convert('1/6')
        assert field.equal(a + b, field.convert('1/2'))
        assert field.is_zero(a - 2 * b)


class TestDeformationField:
    '''
    Tests rational functions in ``h``.
    '''
    def test_h(self):
        field = get_field('deformation')
        h = field.h
        assert field.to_json(h) == {'num': ['0', '1'], 'den': ['1']}

    def test_h_order(self):
        field = get_field('deformation')
        h = field.h
        assert field.h_order(h * h / (1 + h)) == (2, 0)
        assert field.h_order((1 + h) / h) == (0, 1)

    def test_lowest_ratio(self):
        field = get_field('deformation')
        h = field.h
        value = (3 * h + h * h) / (2 * h - h ** 3)
        assert field.lowest_ratio(value) == get_field().convert('3/2')

    def test_substitute(self):
        field = get_field('deformation')
        h = field.h
        assert field.substitute((1 + h) / (2 + h), get_field().convert(1)) == get_field().convert('2/3')
        with pytest.raises(ZeroDivisionError):
            field.substitute(1 / h, get_field().zero)

    def test_json_roundtrip(self):
        field = get_field('deformation')
        h = field.h
        value = (1 + 2 * h) / (3 - h * h)
        assert field.equal(field.from_json(field.to_json(value)), value)

    def test_from_json_zero_den(self):
        with pytest.raises(ParseError):
            get_field('deformation').from_json({'num': ['1'], 'den': ['0']})

    def test_sqrt(self):
        field = get_field('deformation')
        h = field.h
        assert field.equal(field.sqrt(4 * h * h / 9), 2 * h / 3)
        assert field.sqrt(h) is None

    def test_lift(self):
        exact = get_field()
        field = get_field('deformation')
        assert field.lift(exact.convert('2/5'), exact) == field.convert('2/5')


class TestFloatField:
    '''
    Tests the float backend.
    '''
    def test_json(self):
        field = get_field('float')
        assert field.to_json(field.convert(2)) == {'re': 2.0, 'im': 0.0}
        assert field.equal(field.from_json({'re': 1, 'im': 2}), field.convert(complex(1, 2)))

    def test_from_json_rejects(self):
        with pytest.raises(ParseError):
            get_field('float').from_json([1])

    def test_not_exact(self):
        assert not get_field('float').is_exact

    def test_relative_equality(self):
        field = get_field('float')
        assert field.equal(field.convert(1e12), field.convert(1e12 + 1))
        assert not field.equal(field.convert(1), field.convert(1.001))

'''
Tests the type declarations.
'''

import pytest

from simplehiggs.types import Backend, Check, Flavor, ValidationReport


class TestBackend:
    '''
    Tests ``Backend.from_string``.
    '''
    @pytest.mark.parametrize('value,expected', [
        ('exact', Backend.EXACT),
        ('Exact', Backend.EXACT),
        ('deformation', Backend.DEFORMATION),
        ('FLOAT', Backend.FLOAT),
    ])
    def test_valid(self, value, expected):
        assert Backend.from_string(value) == expected

    def test_invalid(self):
        with pytest.raises(ValueError) as excinfo:
            Backend.from_string('double')
        assert 'not a valid Backend' in str(excinfo.value)

    def test_non_string(self):
        with pytest.raises(ValueError) as excinfo:
            Backend.from_string(1)  # type: ignore
        assert 'only string types' in str(excinfo.value)


class TestFlavor:
    '''
    Tests ``Flavor.from_string``.
    '''
    @pytest.mark.parametrize('value,expected', [
        ('higgs', Flavor.HIGGS),
        ('HIGGS', Flavor.HIGGS),
        ('connection', Flavor.CONNECTION),
        ('conn', Flavor.CONNECTION),
    ])
    def test_valid(self, value, expected):
        assert Flavor.from_string(value) == expected

    def test_invalid(self):
        with pytest.raises(ValueError):
            Flavor.from_string('bundle')


class TestValidationReport:
    '''
    Tests the report helpers.
    '''
    def test_ok(self):
        report = ValidationReport((Check('a', True), Check('b', True)))
        assert report.ok
        assert report.failed() == ()

    def test_failed(self):
        report = ValidationReport((Check('a', True), Check('b', False, 'det differs')))
        assert not report.ok
        assert report.failed() == ('b',)

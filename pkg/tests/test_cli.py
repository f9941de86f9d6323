'''
Tests the command line interface.
'''

import hashlib
import json
from unittest.mock import patch

import pytest

from simplehiggs.cli import EXIT_DOMAIN, EXIT_OK, EXIT_PARSE, EXIT_USAGE, canonical_json, input_digest, main

SPECTRAL = {'t': ['0', '1', '2', '3', 'inf'], 'nu': ['1/3', '1/5', '1/7', '1/11', '1/13'], 'flavor': 'higgs'}


@pytest.fixture
def document(tmp_path):
    '''
    Writes a JSON document and returns its path.
    '''
    def write(data, name='input.json'):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)
    return write


def _run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr().out
    return status, out


class TestCommands:
    '''
    Runs subcommands end to end.
    '''
    def test_roundtrip(self, capsys, document):
        path = document({'spectral': SPECTRAL, 'pairs': [{'q': '4', 'p': '7'}, {'q': '5', 'p': '9'}]})
        status, out = _run(capsys, '--in', path, 'roundtrip')
        assert status == EXIT_OK
        assert json.loads(out)['ok'] is True

    def test_reconstruct_validate(self, capsys, document):
        path = document({'spectral': SPECTRAL, 'pairs': [{'q': '4', 'p': '7'}, {'q': '5', 'p': '9'}]})
        status, out = _run(capsys, '--in', path, 'reconstruct')
        assert status == EXIT_OK
        field = json.loads(out)['field']
        status, out = _run(capsys, '--in', document({'spectral': SPECTRAL, 'field': field}, 'field.json'), 'validate')
        assert status == EXIT_OK
        assert json.loads(out)['failed'] == []

    def test_genericity_failure(self, capsys, document):
        path = document({'nu': ['1/2', '1/2', '1/3', '1/3', '2']})
        status, out = _run(capsys, '--in', path, 'genericity')
        assert status == EXIT_DOMAIN
        assert json.loads(out) == {'ok': False, 'failed': ['generic']}

    def test_genericity_zero(self, capsys, document):
        status, out = _run(capsys, '--in', document({'nu': ['1/2', '1/2', '1/2', '1/2', '0']}), 'genericity')
        assert status == EXIT_DOMAIN
        assert 'nonzero' in json.loads(out)['failed']

    def test_chain_limits(self, capsys, document):
        status, out = _run(capsys, '--in', document({'x': ['2', '3'], 'q1': '4'}), 'chain-limits')
        assert status == EXIT_OK
        result = json.loads(out)
        assert result['lim_s'] == '1/24'
        assert result['lim_u2'] == '-25/1152'
        assert result['decomposition']['u1_lambda'] == '-1/2304'
        assert result['decomposition']['u1_p1_sq'] == '-1/55296'
        assert result['probe']['invertible'] is True
        assert result['probe']['point'] not in result['probe']['singular_points']

    def test_chain_limits_float(self, capsys, document):
        path = document({'x': ['2', '3'], 'q1': '4'})
        status, out = _run(capsys, '--backend', 'float', '--in', path, 'chain-limits')
        assert status == EXIT_USAGE
        assert 'exact backend' in json.loads(out)['diagnostics']['message']

    def test_solve_b4b5(self, capsys, document):
        data = {'spectral': SPECTRAL, 'pairs': [{'q': '4', 'p': '7'}, {'q': '4', 'p': '-7'}], 'lambda_minus': '5'}
        status, out = _run(capsys, '--in', document(data), 'solve-b4b5')
        assert status == EXIT_OK
        result = json.loads(out)
        assert result['valid'] is True
        assert result['hilb']['lam_plus'] == 'inf'
        assert result['hilb']['lam_minus'] == '5'

    def test_plot(self, capsys, document):
        path = document({'curve': ['1', '0', '1'], 'range': [-1, 1], 'samples': 3})
        status, out = _run(capsys, '--in', path, 'plot')
        assert status == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == 'z,eta_plus,eta_minus,mark'
        assert len(lines) == 4
        assert lines[2].startswith('0.0,1.0,-1.0')


class TestErrors:
    '''
    Tests diagnostics and exit codes.
    '''
    def test_invalid_json(self, capsys, document):
        status, out = _run(capsys, '--in', document('{"nu": '), 'genericity')
        assert status == EXIT_PARSE
        diagnostics = json.loads(out)['diagnostics']
        assert diagnostics['error'] == 'ParseError'
        assert diagnostics['location'].startswith('line 1')

    def test_missing_key(self, capsys, document):
        status, out = _run(capsys, '--in', document({'spectral': SPECTRAL}), 'roundtrip')
        assert status == EXIT_PARSE
        assert json.loads(out)['diagnostics']['location'] == 'pairs'

    def test_domain_error(self, capsys, document):
        data = {'spectral': SPECTRAL, 'pairs': [{'q': '4', 'p': '7'}]}
        status, out = _run(capsys, '--in', document(data), 'reconstruct')
        assert status == EXIT_DOMAIN
        assert json.loads(out)['ok'] is False

    def test_bad_rational(self, capsys, document):
        status, out = _run(capsys, '--in', document({'x': ['2', '3'], 'q1': '1/0'}), 'chain-limits')
        assert status == EXIT_PARSE
        assert json.loads(out)['diagnostics']['error'] == 'ParseError'

    @pytest.mark.parametrize('error', [ZeroDivisionError('division by zero'), ValueError('0**0')])
    def test_arithmetic_error(self, capsys, document, error):
        path = document({'x': ['2', '3'], 'q1': '4'})
        with patch('simplehiggs.cli.limits_at', side_effect=error):
            status, out = _run(capsys, '--in', path, 'chain-limits')
        assert status == EXIT_DOMAIN
        result = json.loads(out)
        assert result['ok'] is False
        assert result['diagnostics']['error'] == 'DomainError'
        assert type(error).__name__ in result['diagnostics']['message']

    def test_non_generic_spectral(self, capsys, document):
        spectral = dict(SPECTRAL, nu=['1/2', '1/2', '1/3', '1/3', '2'])
        data = {'spectral': spectral, 'pairs': [{'q': '4', 'p': '7'}, {'q': '5', 'p': '9'}]}
        status, out = _run(capsys, '--in', document(data), 'reconstruct')
        assert status == EXIT_DOMAIN
        assert json.loads(out)['diagnostics']['error'] == 'NonGeneric'
        status, out = _run(capsys, '--in', document(data), 'genericity')
        assert status == EXIT_DOMAIN
        assert json.loads(out) == {'ok': False, 'failed': ['generic']}

    def test_missing_file(self, capsys, tmp_path):
        status, _ = _run(capsys, '--in', str(tmp_path / 'nothing.json'), 'genericity')
        assert status == EXIT_USAGE

    @pytest.mark.parametrize('argv', [[], ['frobnicate'], ['--tol', 'x', 'genericity']])
    def test_usage(self, argv):
        assert main(argv) == EXIT_USAGE

    def test_tolerance(self, capsys, document):
        status, _ = _run(capsys, '--tol', '0', '--in', document({'nu': ['1/3']}), 'genericity')
        assert status == EXIT_USAGE


class TestManifest:
    '''
    Tests the run manifest.
    '''
    def test_digest(self):
        data = {'b': ['1/2'], 'a': 1}
        expected = hashlib.sha256(b'{"a":1,"b":["1/2"]}').hexdigest()
        assert canonical_json(data) == '{"a":1,"b":["1/2"]}'
        assert input_digest(data) == 'sha256:' + expected

    def test_embedded(self, capsys, document):
        data = {'nu': ['1/3', '1/5', '1/7', '1/11', '1/13']}
        status, out = _run(capsys, '--manifest', '--in', document(data), 'genericity')
        assert status == EXIT_OK
        manifest = json.loads(out)['manifest']
        assert manifest['command'] == 'genericity'
        assert manifest['input_digest'] == input_digest(data)
        assert manifest['backend'] == 'exact'
        assert 'sympy' in manifest['versions']

    def test_out(self, capsys, document, tmp_path):
        out_path = tmp_path / 'out.json'
        status, out = _run(capsys, '--in', document({'nu': ['1/3', '1/5']}), '--out', str(out_path), 'genericity')
        assert status == EXIT_OK
        assert out == ''
        assert json.loads(out_path.read_text())['ok'] is True

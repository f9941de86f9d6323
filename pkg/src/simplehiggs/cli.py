'''
Command line interface. Every subcommand reads one JSON document (from ``--in`` or standard input) and writes one
JSON document (to ``--out`` or standard output), ``plot`` writes CSV instead.

Exit codes: ``0`` success, ``2`` usage errors, ``3`` mathematical failures (including a check reporting
``"ok": false``), ``4`` unparsable input.
'''

import argparse
import csv
import hashlib
import io
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import sympy

from . import __version__
from .apparent import (
    canonical_pairs, extract, hilb_from_json, pair_from_json, pair_to_json, reconstruct, reconstruct_blown,
    reconstruct_hilb,
)
from .charts import (
    curve_field, decompose, decomposition_to_json, hilb_coords, limits_at, limits_to_json, m1_coordinate_probe,
    solve_b4b5,
)
from .connjump import assemble, conn_params_from_json, connection_limit
from .exceptions import DomainError, HiggsException, ParseError, UsageError, error_name
from .hecke import check_compatible, jump_chain, jump_family_h, jump_limit_h, renormalize_q
from .modelcore import (
    FieldMatrix, GlTuple, SpectralData, eigen_table, normalize_auto, normalize_gl_to_sl, spectral_curve, validate,
)
from .scalar import DEFAULT_TOLERANCE, ScalarField, get_field
from .scalarpoly import Poly, QuadExt
from .types import ApparentPair, Backend, Chart, Flavor, JumpParams, ProjectiveValue, RunManifest, ValidationReport
from .validation import INFINITY_MARK, check_genericity, validate_spectral

log = logging.getLogger('simplehiggs.cli')

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_PARSE = 4

#: Residue eigenvalues used by ``chain-limits`` when none are given
REFERENCE_NU = ('1/3', '1/5', '1/7', '1/11', '1/13')

Command = Callable[[Mapping[str, Any], ScalarField, argparse.Namespace], Any]


def exit_code(exc: BaseException) -> int:
    '''
    Maps an exception to the exit code of the process.
    '''
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    return EXIT_DOMAIN


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(',', ':'), ensure_ascii=False)


def input_digest(data: Any) -> str:
    '''
    SHA-256 of the canonical form of an input document.
    '''
    return 'sha256:' + hashlib.sha256(canonical_json(data).encode('utf-8')).hexdigest()


def make_manifest(command: str, data: Any, backend: Backend, tolerance: float) -> RunManifest:
    versions = (('numpy', np.__version__), ('simplehiggs', __version__), ('sympy', sympy.__version__))
    return RunManifest(command, input_digest(data), backend, tolerance, versions)


def manifest_to_json(manifest: RunManifest) -> Dict[str, Any]:
    return {
        'command': manifest.command,
        'input_digest': manifest.input_digest,
        'backend': manifest.backend.value,
        'tolerance': manifest.tolerance,
        'versions': dict(manifest.versions),
    }


def read_document(path: Optional[str]) -> Any:
    '''
    Reads the input document from ``path``, or from standard input for ``None`` and ``-``.

    :raises UsageError: If the file can't be opened.
    :raises ParseError: If the content is not JSON.
    '''
    try:
        if path is None or path == '-':
            text = sys.stdin.read()
        else:
            with open(path, 'rt') as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f'can\'t read input: {exc}') from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f'invalid JSON: {exc.msg}', f'line {exc.lineno} column {exc.colno}') from exc


def write_document(text: str, path: Optional[str]) -> None:
    if path is None or path == '-':
        sys.stdout.write(text)
        return
    try:
        with open(path, 'wt') as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f'can\'t write output: {exc}') from exc


def _get(data: Mapping[str, Any], key: str) -> Any:
    try:
        return data[key]
    except (KeyError, TypeError) as exc:
        raise ParseError(f'missing "{key}"', key) from exc


def _spectral(data: Mapping[str, Any], field: ScalarField, check: bool = True) -> SpectralData:
    return SpectralData.from_json(_get(data, 'spectral'), field, check=check)


def _field_matrix(data: Mapping[str, Any], spectral: SpectralData) -> FieldMatrix:
    return FieldMatrix.from_json(_get(data, 'field'), spectral)


def _pairs(data: Mapping[str, Any], field: ScalarField) -> List[ApparentPair]:
    raw = _get(data, 'pairs')
    if not isinstance(raw, list):
        raise ParseError('"pairs" has to be a list', 'pairs')
    return [pair_from_json(item, field, f'pairs[{i}]') for i, item in enumerate(raw)]


def _report(report: ValidationReport) -> Dict[str, Any]:
    return {
        'ok': report.ok,
        'failed': list(report.failed()),
        'checks': [{'name': c.name, 'passed': c.passed, 'detail': c.detail} for c in report.checks],
    }


def _value(value: Any, field: ScalarField) -> Any:
    if isinstance(value, ProjectiveValue):
        return value.value
    if value is None:
        return None
    return field.to_json(value)


def _jump_params(data: Mapping[str, Any], field: ScalarField) -> JumpParams:
    '''
    Parses ``{"q1": .., "p1": .., "q2": .., "lambda": ..}``, a missing ``q2`` or ``"q1+h"`` selects the deformation.
    '''
    try:
        q1, p1, lam = (field.from_json(data[key]) for key in ('q1', 'p1', 'lambda'))
    except (KeyError, TypeError) as exc:
        raise ParseError('jump parameters need "q1", "p1" and "lambda"', 'jump') from exc
    raw = data.get('q2')
    if raw is None or (isinstance(raw, str) and raw.replace(' ', '') == 'q1+h'):
        return JumpParams(q1, p1, q1, p1, lam, deform=True)
    q2 = field.from_json(raw)
    return JumpParams(q1, p1, q2, p1 + lam * (q2 - q1), lam)


def _reconstruct(pairs: Sequence[ApparentPair], spectral: SpectralData) -> FieldMatrix:
    if any(p.blowup is not None for p in pairs):
        return reconstruct_blown(pairs, spectral)
    return reconstruct(pairs, spectral)


def cmd_validate(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> Dict[str, Any]:
    spectral = _spectral(data, field)
    field_matrix = _field_matrix(data, spectral)
    result = _report(validate(field_matrix))
    result['eigenvalues'] = eigen_table(field_matrix)
    return result


def cmd_extract(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> Dict[str, Any]:
    spectral = _spectral(data, field)
    field_matrix = _field_matrix(data, spectral)
    zeros = [field.from_json(x) for x in data.get('sigma_zeros', [])]
    pairs = extract(field_matrix, zeros, allow_float=args.allow_float)
    return {'pairs': [pair_to_json(p, field) for p in pairs]}


def cmd_reconstruct(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> Dict[str, Any]:
    spectral = _spectral(data, field)
    return {'field': _reconstruct(_pairs(data, field), spectral).to_json()}


def cmd_reconstruct_hilb(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> Dict[str, Any]:
    spectral = _spectral(data, field)
    chart = hilb_from_json(_get(data, 'hilb'), field)
    return {'field': reconstruct_hilb(chart, spectral).to_json()}


def cmd_spectral_curve(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> Dict[str, Any]:
    spectral = _spectral(data, field)
    return {'curve': spectral_curve(_field_matrix(data, spectral)).to_json()}


def cmd_jump_higgs(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> Dict[str, Any]:
    spectral = _spectral(data, field)
    jp = _jump_params(_get(data, 'jump'), field)
    family = jump_family_h(jp, spectral)
    result: Dict[str, Any] = {
        'family': family.to_json(),
        'compatible': check_compatible(family),
        'renormalized': renormalize_q(family, jp).to_json(),
    }
    if jp.deform:
        limit = jump_limit_h(family)
        result['limit'] = limit.to_json()
        result['limit_valid'] = validate(limit).ok
    return result


def cmd_jump_conn(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> Dict[str, Any]:
    spectral = _spectral(data, field)
    params = conn_params_from_json(_get(data, 'connjump'), field)
    family = assemble(params, spectral)
    result: Dict[str, Any] = {'family': family.to_json()}
    if params.jump.deform:
        limit = connection_limit(family)
        result['limit'] = limit.to_json()
        result['limit_valid'] = validate(limit).ok
    else:
        result['valid'] = validate(family.to_field()).ok
    return result


def _chain_spectral(data: Mapping[str, Any], field: ScalarField) -> SpectralData:
    if 'spectral' in data:
        return _spectral(data, field)
    x = _get(data, 'x')
    if not isinstance(x, list) or len(x) != 2:
        raise ParseError('"x" has to list the two free poles', 'x')
    nu = data.get('nu', list(REFERENCE_NU))
    poles = ['0', '1'] + x + [INFINITY_MARK]
    return SpectralData.from_json({'t': poles, 'nu': nu, 'flavor': Flavor.CONNECTION.value}, field)


def cmd_chain_limits(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> Dict[str, Any]:
    if field.backend != Backend.EXACT:
        raise UsageError('chain-limits needs the exact backend')
    spectral = _chain_spectral(data, field)
    q1 = field.from_json(_get(data, 'q1'))
    e0, e1 = (field.from_json(data.get(key, '0')) for key in ('e0', 'e1'))
    p1 = field.from_json(data.get('p1', '1'))
    lam = field.from_json(data.get('lambda', '0'))
    result: Dict[str, Any] = limits_to_json(limits_at(q1, p1, lam, spectral, e0, e1))
    result['decomposition'] = decomposition_to_json(decompose(q1, spectral, e0, e1))
    probe = m1_coordinate_probe(q1, spectral, e0, e1)
    result['probe'] = {
        'point': [field.to_json(field.convert(x)) for x in probe.point],
        'determinant': field.to_json(probe.determinant),
        'singular_points': [[field.to_json(field.convert(x)) for x in point] for point in probe.singular_points],
        'invertible': probe.invertible,
    }
    return result


def cmd_solve_b4b5(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> Dict[str, Any]:
    spectral = _spectral(data, field)
    point = hilb_coords(_pairs(data, field), field)
    overrides = {}
    for key, name in (('lambda_plus', 'lam_plus'), ('lambda_minus', 'lam_minus'), ('lambda_minus_i', 'lam_minus_i'),
                      ('lambda_plus_i', 'lam_plus_i')):
        if key in data:
            overrides[name] = field.from_json(data[key])
    point = point._replace(**overrides)
    curve = solve_b4b5(point, spectral)
    field_matrix = curve_field(curve, spectral)
    return {
        'curve': curve.to_json(),
        'field': field_matrix.to_json(),
        'hilb': {name: _value(getattr(point, name), field)
                 for name in ('lam_plus', 'lam_minus', 'lam_plus_i', 'lam_minus_i')},
        'valid': validate(field_matrix).ok,
    }


def cmd_roundtrip(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> Dict[str, Any]:
    spectral = _spectral(data, field)
    pairs = _pairs(data, field)
    recovered = extract(_reconstruct(pairs, spectral), allow_float=args.allow_float)
    ok = canonical_pairs(recovered, spectral.n, field) == canonical_pairs(pairs, spectral.n, field)
    return {'ok': ok, 'pairs': [pair_to_json(p, field) for p in recovered]}


def cmd_genericity(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> Dict[str, Any]:
    if 'spectral' in data:
        failed = validate_spectral(_spectral(data, field, check=False))
        return {'ok': not failed, 'failed': failed}
    nu = _get(data, 'nu')
    if not isinstance(nu, list):
        raise ParseError('"nu" has to be a list', 'nu')
    failed = check_genericity([field.from_json(x) for x in nu], field)
    return {'ok': not failed, 'failed': failed}


def cmd_normalize(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> Dict[str, Any]:
    if 'gl' in data:
        gl = data['gl']
        try:
            xi = tuple((field.from_json(a), field.from_json(b)) for a, b in gl['xi'])
            poles = [t if t == INFINITY_MARK else field.from_json(t) for t in gl['t']]
            degree = int(gl.get('degree', -1))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError('gl data needs "xi" pairs and poles "t"', 'gl') from exc
        return {'spectral': normalize_gl_to_sl(GlTuple(xi, degree), poles, field).to_json()}
    spectral = _spectral(data, field)
    return {'field': normalize_auto(_field_matrix(data, spectral)).to_json()}


def cmd_jump_chain(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> Dict[str, Any]:
    spectral = _spectral(data, field)
    field_matrix = _field_matrix(data, spectral)
    pivot, collide, lam = (field.from_json(_get(data, key)) for key in ('pivot', 'collide', 'lambda'))
    zeros = [field.from_json(x) for x in data.get('sigma_zeros', [])]
    family = jump_chain(field_matrix, pivot, collide, lam, sigma_zeros=zeros)
    result = family.to_field()
    return {'family': family.to_json(), 'field': result.to_json(), 'valid': validate(result).ok}


def emit_plot(curve: Poly, lo: float, hi: float, samples: int,
              marks: Sequence[Tuple[float, str]] = ()) -> List[Tuple[float, Optional[float], Optional[float], str]]:
    '''
    Samples the two real branches ``+-sqrt(g(z))`` of a spectral curve on ``[lo, hi]``. Marked abscissae inside the
    range are added as rows of their own. Where ``g(z) < 0`` the branches are ``None``.

    :returns: Rows ``(z, +sqrt(g), -sqrt(g), mark)`` sorted by ``z``.
    '''
    if samples <= 0 or not lo < hi:
        return []
    field = curve.field
    desc = [field.to_complex(c).real for c in reversed(curve.coeffs)] or [0.0]
    points = [(float(z), '') for z in np.linspace(lo, hi, samples)]
    points.extend((float(z), name) for z, name in marks if lo <= z <= hi)
    points.sort()
    values = np.polyval(desc, np.array([z for z, _ in points], dtype=float))
    rows = []
    for (z, name), g in zip(points, values):
        if g < 0:
            rows.append((z, None, None, name))
        else:
            root = float(np.sqrt(g))
            rows.append((z, root, -root, name))
    return rows


def _witness(value: Any, field: ScalarField) -> complex:
    if isinstance(value, complex):
        return value
    if isinstance(value, QuadExt):
        return value.witness()
    return field.to_complex(value)


def cmd_plot(data: Mapping[str, Any], field: ScalarField, args: argparse.Namespace) -> str:
    marks: List[Tuple[float, str]] = []
    if 'curve' in data:
        curve = Poly([field.from_json(c) for c in _get(data, 'curve')], field)
        spectral = SpectralData.from_json(data['spectral'], field) if 'spectral' in data else None
    else:
        spectral = _spectral(data, field)
        field_matrix = _field_matrix(data, spectral)
        curve = spectral_curve(field_matrix)
        for pair in extract(field_matrix, allow_float=True):
            if pair.chart != Chart.FINITE:
                continue
            q = _witness(pair.q, field)
            if abs(q.imag) <= args.tol:
                marks.append((q.real, 'q'))
    if spectral is not None:
        marks.extend((field.to_complex(t).real, f't{i}') for i, t in enumerate(spectral.finite, start=1))
    try:
        lo, hi = (float(x) for x in data.get('range', [-1, 1]))
        samples = int(data.get('samples', 101))
    except (TypeError, ValueError) as exc:
        raise ParseError('"range" needs two numbers and "samples" an integer', 'range') from exc
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(['z', 'eta_plus', 'eta_minus', 'mark'])
    for z, plus, minus, name in emit_plot(curve, lo, hi, samples, marks):
        writer.writerow([repr(z), '' if plus is None else repr(plus), '' if minus is None else repr(minus), name])
    return buf.getvalue()


#: Subcommand name to handler and help text
COMMANDS: Dict[str, Tuple[Command, str]] = {
    'validate': (cmd_validate, 'check the residue conditions of a field matrix'),
    'extract': (cmd_extract, 'apparent singularities and dual parameters of a field'),
    'reconstruct': (cmd_reconstruct, 'field of splitting type 0 from apparent data'),
    'reconstruct-hilb': (cmd_reconstruct_hilb, 'field from a point of a Hilbert chart'),
    'spectral-curve': (cmd_spectral_curve, 'spectral curve of a Higgs field'),
    'jump-higgs': (cmd_jump_higgs, 'jumping family of Higgs fields'),
    'jump-conn': (cmd_jump_conn, 'jumping family of connections'),
    'chain-limits': (cmd_chain_limits, 'limits of the blow-up chain of the connection family'),
    'solve-b4b5': (cmd_solve_b4b5, 'spectral curve through a point of a Hilbert chart'),
    'roundtrip': (cmd_roundtrip, 'reconstruct and extract, compare the pairs'),
    'genericity': (cmd_genericity, 'check the conditions on the residue eigenvalues'),
    'normalize': (cmd_normalize, 'normal form of a field or sl_2 data of gl_2 eigenvalues'),
    'jump-chain': (cmd_jump_chain, 'one step of the jumping chain'),
    'plot': (cmd_plot, 'CSV samples of a spectral curve'),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='simplehiggs', description='Coordinates on moduli of parabolic Higgs bundles and connections.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='more logging, repeat for debug')
    parser.add_argument('--backend', choices=[Backend.EXACT.value, Backend.FLOAT.value], default=Backend.EXACT.value,
                        help='scalar backend')
    parser.add_argument('--tol', type=float, default=DEFAULT_TOLERANCE, help='comparison tolerance of the float '
                        'backend')
    parser.add_argument('--allow-float', action='store_true', help='permit float roots when exact roots are not '
                        'available')
    parser.add_argument('--in', dest='input', metavar='PATH', help='input document, standard input if omitted')
    parser.add_argument('--out', dest='output', metavar='PATH', help='output file, standard output if omitted')
    parser.add_argument('--manifest', action='store_true', help='embed a run manifest in the output')
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True
    for name, (_, text) in COMMANDS.items():
        subparsers.add_parser(name, help=text)
    return parser


def run(args: argparse.Namespace) -> Tuple[int, str]:
    '''
    Runs a parsed command line. Arithmetic failures of the computation that escape the domain checks are reported
    as :class:`~simplehiggs.exceptions.DomainError`.

    :returns: The exit code and the text to write.
    '''
    handler = COMMANDS[args.command][0]
    try:
        if args.tol <= 0:
            raise UsageError('--tol has to be positive')
        field = get_field(args.backend, tolerance=args.tol)
        data = read_document(args.input)
        if not isinstance(data, dict):
            raise ParseError('the input document has to be a JSON object', '$')
        try:
            result = handler(data, field, args)
        except (ArithmeticError, ValueError) as exc:
            raise DomainError(f'{type(exc).__name__}: {exc}') from exc
    except HiggsException as exc:
        log.debug('%s failed', args.command, exc_info=True)
        diagnostics: Dict[str, Any] = {'error': error_name(exc), 'message': str(exc)}
        if isinstance(exc, ParseError) and exc.location is not None:
            diagnostics['location'] = exc.location
        return exit_code(exc), json.dumps({'ok': False, 'diagnostics': diagnostics}, indent=2, sort_keys=True) + '\n'

    manifest = (make_manifest(args.command, data, Backend.from_string(args.backend), args.tol)
                if args.manifest else None)
    if isinstance(result, str):
        if manifest is not None:
            result = f'# manifest: {canonical_json(manifest_to_json(manifest))}\n' + result
        return EXIT_OK, result
    if manifest is not None:
        result['manifest'] = manifest_to_json(manifest)
    status = EXIT_DOMAIN if result.get('ok') is False else EXIT_OK
    return status, json.dumps(result, indent=2, sort_keys=True) + '\n'


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    status, text = run(args)
    try:
        write_document(text, args.output)
    except UsageError as exc:
        log.error('%s', exc)
        return EXIT_USAGE
    return status


if __name__ == '__main__':
    sys.exit(main())

'''
Stored chain limits. The shipped file holds the limits with closed forms, :func:`regenerate_golden` adds the parts
of ``lim u1`` and ``lim w`` that are only known from the computation. :func:`compare_golden` recomputes every
instance and compares the keys present in the file.
'''

import json
import logging
import os
from typing import Any, Dict, List, Optional

from .charts import decompose, decomposition_to_json
from .exceptions import ParseError
from .modelcore import SpectralData
from .scalar import get_field
from .types import Flavor, GoldenMismatch

log = logging.getLogger('simplehiggs.golden')

#: Directory holding the shipped golden files
GOLDEN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'golden')
#: The chain limits
CHAIN_LIMITS = os.path.join(GOLDEN_DIR, 'chain_limits.json')


def load_golden(path: Optional[str] = None) -> Dict[str, Any]:
    '''
    Reads a golden file.

    :raises ParseError: If the file is not valid JSON or lacks ``spectral`` or ``instances``.
    '''
    path = path or CHAIN_LIMITS
    try:
        with open(path, 'rt') as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f'invalid JSON: {exc.msg}', f'{path}:{exc.lineno}:{exc.colno}') from exc
    if not isinstance(data, dict) or 'spectral' not in data or not isinstance(data.get('instances'), dict):
        raise ParseError('golden files need "spectral" and "instances"', path)
    return data


def save_golden(data: Dict[str, Any], path: Optional[str] = None) -> None:
    path = path or CHAIN_LIMITS
    with open(path, 'wt') as fh:
        json.dump(data, fh, indent=2)
        fh.write('\n')
    log.info('wrote %d instances to %s', len(data['instances']), path)


def golden_spectral(data: Dict[str, Any]) -> SpectralData:
    spectral = SpectralData.from_json(data['spectral'])
    if spectral.flavor != Flavor.CONNECTION:
        raise ParseError('chain limits are stored for connections', 'spectral.flavor')
    return spectral


def compute_instance(q1: str, data: Dict[str, Any]) -> Dict[str, str]:
    '''
    The full record of one instance: the limits of ``s``, ``t1``, ``t2``, ``u2``, ``v`` and the coefficients of
    ``lim u1`` and ``lim w`` as polynomials in ``(lam, p1)``.
    '''
    field = get_field()
    parts = decompose(field.from_json(q1), golden_spectral(data), field.from_json(data.get('e0', '0')),
                      field.from_json(data.get('e1', '0')))
    return decomposition_to_json(parts)


def compare_golden(data: Optional[Dict[str, Any]] = None) -> List[GoldenMismatch]:
    '''
    Recomputes every stored instance.

    :returns: The differing entries, empty when all agree.
    '''
    data = data if data is not None else load_golden()
    mismatches = []
    for q1, expected in data['instances'].items():
        actual = compute_instance(q1, data)
        for key, value in expected.items():
            got = actual.get(key, '<missing>')
            if got != str(value):
                mismatches.append(GoldenMismatch(q1, key, str(value), got))
    for mismatch in mismatches:
        log.error('golden mismatch at q1=%s for %s: expected %s, got %s', *mismatch)
    return mismatches


def regenerate_golden(path: Optional[str] = None) -> Dict[str, Any]:
    '''
    Replaces every instance of a golden file by its full recomputed record and writes the file back.
    '''
    data = load_golden(path)
    data['instances'] = {q1: compute_instance(q1, data) for q1 in data['instances']}
    save_golden(data, path)
    return data

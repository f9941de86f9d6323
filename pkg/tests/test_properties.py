'''
Randomized checks of the coordinate maps on the five point reference data.
'''

import json
import random

import pytest

from simplehiggs.apparent import canonical_pairs, extract, reconstruct
from simplehiggs.charts import m1_coordinate_probe
from simplehiggs.hecke import jump_family_h, renormalize_q
from simplehiggs.modelcore import SpectralData, normalize_auto, validate
from simplehiggs.scalar import get_field
from simplehiggs.types import ApparentPair, Flavor, JumpParams

QQ = get_field()
POLES = ['0', '1', '2', '3', 'inf']
NU = ['1/3', '1/5', '1/7', '1/11', '1/13']
SEED = 5813


def _rational(rng, bound=30):
    return QQ.convert(f'{rng.randint(-bound, bound)}/{rng.randint(1, 9)}')


def _abscissae(rng, count):
    '''
    Distinct random abscissae off the finite poles.
    '''
    taken = [QQ.convert(t) for t in POLES[:-1]]
    result = []
    while len(result) < count:
        q = _rational(rng)
        if q not in taken:
            taken.append(q)
            result.append(q)
    return result


def _nonzero(rng):
    value = _rational(rng)
    while value == 0:
        value = _rational(rng)
    return value


class TestRoundTrip:
    '''
    Reconstruction followed by extraction on random pairs.
    '''
    @pytest.mark.parametrize('flavor', [Flavor.HIGGS, Flavor.CONNECTION])
    def test_random(self, flavor):
        rng = random.Random(SEED)
        spectral = SpectralData(POLES, NU, flavor)
        seen = set()
        for _ in range(100):
            pairs = [ApparentPair(q, _rational(rng)) for q in _abscissae(rng, 2)]
            field = reconstruct(pairs, spectral)
            assert validate(field).ok
            got = canonical_pairs(extract(field), 5)
            assert [(p.q, p.p) for p in got] == [(p.q, p.p) for p in canonical_pairs(pairs, 5)]
            key = json.dumps(normalize_auto(field).to_json(), sort_keys=True)
            seen.add((tuple(sorted((str(p.q), str(p.p)) for p in pairs)), key))
        keys = {key for _, key in seen}
        assert len(keys) == len(seen)


class TestJumpSigns:
    '''
    The renormalized jumping family flips the sign of the first dual parameter.
    '''
    def test_random(self):
        rng = random.Random(SEED + 1)
        spectral = SpectralData(POLES, NU)
        for _ in range(50):
            q1, q2 = _abscissae(rng, 2)
            p1, lam = _nonzero(rng), _rational(rng)
            jp = JumpParams(q1, p1, q2, p1 + lam * (q2 - q1), lam)
            field = renormalize_q(jump_family_h(jp, spectral), jp)
            assert validate(field).ok
            got = canonical_pairs(extract(field), 5)
            expected = canonical_pairs([ApparentPair(q1, -p1), ApparentPair(q2, jp.p2)], 5)
            assert [(p.q, p.p) for p in got] == [(p.q, p.p) for p in expected]


class TestCoordinateMap:
    '''
    The limits of ``u1`` and ``w`` separate ``(lambda, p1)`` at generic ``q1``.
    '''
    @pytest.mark.parametrize('q1', ['4', '5', '6', '7', '9', '-1', '-2', '-5', '1/2', '9/2', '5/2', '7/2', '1/3',
                                    '2/3', '-1/2', '-7/3', '11/4', '13/5', '17/6', '100'])
    def test_determinant(self, q1):
        report = m1_coordinate_probe(QQ.convert(q1), SpectralData(POLES, NU, Flavor.CONNECTION))
        assert report.invertible

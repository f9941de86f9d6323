'''
Tests the extraction of apparent singularities and the reconstruction of fields from them.
'''

import pytest

from simplehiggs.apparent import (
    blowup_coord,
    canonical_pairs,
    extract,
    hilb_from_json,
    hilb_params,
    pair_from_json,
    pair_to_json,
    reconstruct,
    reconstruct_blown,
    reconstruct_hilb,
)
from simplehiggs.exceptions import (
    Indeterminate, MissingBlowup, NoPivot, ParseError, PoleCollision, SingularSystem, ValidationError,
)
from simplehiggs.modelcore import FieldMatrix, SpectralData, evaluation_row, solve_f12, validate
from simplehiggs.scalar import get_field
from simplehiggs.scalarpoly import Poly, QuadExt
from simplehiggs.types import ApparentPair, Blowup, Chart, Flavor, HilbChart, HilbCluster, ProjectiveValue

QQ = get_field()
POLES = ['0', '1', '2', '3', 'inf']
NU = ['1/3', '1/5', '1/7', '1/11', '1/13']


def _q(value):
    return QQ.convert(value)


def _spectral(flavor=Flavor.HIGGS, field=None):
    return SpectralData(POLES, NU, flavor, field)


def _pairs(*coords):
    return [ApparentPair(_q(q), _q(p)) for q, p in coords]


class TestReconstruct:
    '''
    Tests ``reconstruct`` and ``extract`` on ordinary pairs.
    '''
    @pytest.mark.parametrize('flavor', [Flavor.HIGGS, Flavor.CONNECTION])
    @pytest.mark.parametrize('coords', [((4, 7), (5, 9)), (('1/2', -1), (-3, '2/5')), ((7, 0), (8, 1))])
    def test_roundtrip(self, flavor, coords):
        fm = reconstruct(_pairs(*coords), _spectral(flavor))
        assert validate(fm).ok
        assert fm.is_connection is (flavor == Flavor.CONNECTION)
        got = canonical_pairs(extract(fm), 5)
        assert [(p.q, p.p) for p in got] == [(p.q, p.p) for p in canonical_pairs(_pairs(*coords), 5)]

    def test_normal_form(self):
        fm = reconstruct(_pairs((4, 7), (5, 9)), _spectral())
        assert fm.f21 == Poly.from_roots([4, 5], QQ)
        assert fm.f11 == Poly([-1, 2], QQ)
        assert fm.f11.bound == 3

    def test_float(self):
        field = get_field('float')
        pairs = [ApparentPair(field.convert(q), field.convert(p)) for q, p in ((4, 7), (5, 9))]
        fm = reconstruct(pairs, _spectral(field=field))
        assert validate(fm).ok

    def test_count(self):
        with pytest.raises(ValidationError) as excinfo:
            reconstruct(_pairs((4, 7)), _spectral())
        assert '2 apparent singularities required' in str(excinfo.value)

    def test_coincide(self):
        with pytest.raises(SingularSystem) as excinfo:
            reconstruct(_pairs((4, 7), (4, 9)), _spectral())
        assert excinfo.value.defect == 1

    def test_on_pole(self):
        with pytest.raises(PoleCollision) as excinfo:
            reconstruct(_pairs((2, 7), (5, 9)), _spectral())
        assert 't_3' in str(excinfo.value)

    def test_approximate(self):
        pairs = [ApparentPair(4 + 1j, 7j, approximate=True), ApparentPair(_q(5), _q(9))]
        with pytest.raises(ValidationError):
            reconstruct(pairs, _spectral())


class TestBlowup:
    '''
    Tests pairs on the exceptional curves over the poles.
    '''
    def test_coordinate(self):
        spectral = _spectral()
        # nu_hat_4 = 1/11 * 3 * 2 * 1
        assert blowup_coord(spectral, 4, '28/11', 4, 1) == _q(2)
        assert blowup_coord(spectral, 3, 1, 4, 1) is ProjectiveValue.INFINITY
        with pytest.raises(Indeterminate):
            blowup_coord(spectral, 3, '6/11', 4, 1)

    @pytest.mark.parametrize('eps,v', [(1, '1'), (-1, '-3/4'), (1, '0')])
    def test_roundtrip_on_pole(self, eps, v):
        spectral = _spectral()
        pairs = [ApparentPair(_q(2), eps * spectral.nu_hat(3), blowup=Blowup(3, eps, _q(v))),
                 ApparentPair(_q(5), _q(9))]
        fm = reconstruct_blown(pairs, spectral)
        assert validate(fm).ok
        on_pole, other = extract(fm)
        assert on_pole.q == _q(2)
        assert on_pole.p == eps * spectral.nu_hat(3)
        assert on_pole.blowup == Blowup(3, eps, _q(v))
        assert (other.q, other.p) == (_q(5), _q(9))

    def test_moved_dual(self):
        spectral = _spectral()
        pairs = [ApparentPair(_q(4), _q(0), blowup=Blowup(4, 1, _q(2))), ApparentPair(_q(5), _q(9))]
        fm = reconstruct_blown(pairs, spectral)
        assert fm.f11(_q(4)) == _q('28/11')

    def test_missing(self):
        pairs = [ApparentPair(_q(2), _q('-2/7')), ApparentPair(_q(5), _q(9))]
        with pytest.raises(MissingBlowup):
            reconstruct_blown(pairs, _spectral())

    @pytest.mark.parametrize('eps,v', [(1, '2'), (-1, '3')])
    def test_infinity(self, eps, v):
        spectral = _spectral()
        u = eps * _q('1/13')
        pairs = [ApparentPair(QQ.zero, u, Chart.INFINITE, Blowup(5, eps, _q(v))), ApparentPair(_q(4), _q(7))]
        fm = reconstruct_blown(pairs, spectral)
        assert validate(fm).ok
        assert fm.f21.degree == 1
        finite, at_infinity = extract(fm)
        assert (finite.q, finite.p) == (_q(4), _q(7))
        assert at_infinity.chart == Chart.INFINITE
        assert at_infinity.p == u
        assert at_infinity.blowup == Blowup(5, eps, _q(v))

    def test_infinity_unblown(self):
        pairs = [ApparentPair(QQ.zero, _q('1/13'), Chart.INFINITE), ApparentPair(_q(4), _q(7))]
        with pytest.raises(PoleCollision):
            reconstruct(pairs, _spectral())
        with pytest.raises(MissingBlowup):
            reconstruct_blown(pairs, _spectral())


class TestExtract:
    '''
    Tests ``extract`` beyond the ordinary case.
    '''
    def _split(self, value):
        spectral = _spectral()
        f11 = Poly([0], QQ, 3)
        f21 = Poly([1], QQ, 0)
        rows = [(evaluation_row(QQ, _q(4), 7), _q(value)), (evaluation_row(QQ, _q(5), 7), QQ.one)]
        return FieldMatrix(spectral, 1, f11, solve_f12(spectral, 1, f11, f21, extra_rows=rows), f21)

    def test_cyclic_vector(self):
        fm = self._split(4)
        assert validate(fm).ok
        pairs = extract(fm, [4])
        assert [(p.q, p.p) for p in pairs] == [(_q(4), _q(2)), (_q(4), _q(-2))]

    def test_cyclic_vector_extension(self):
        pairs = extract(self._split(2), [4])
        assert isinstance(pairs[0].p, QuadExt)
        assert pairs[0].p.r2 == _q(2)
        assert pairs[0].p * pairs[0].p == _q(2)

    def test_zero_count(self):
        with pytest.raises(ValidationError):
            extract(self._split(4))

    def test_no_pivot(self):
        fm = FieldMatrix(_spectral(), 0, [0], [1], [])
        with pytest.raises(NoPivot):
            extract(fm)

    def test_canonical_infinite_chart(self):
        pair = ApparentPair(_q('1/4'), _q(1), Chart.INFINITE)
        (moved,) = canonical_pairs([pair], 5)
        assert moved.chart == Chart.FINITE
        assert (moved.q, moved.p) == (_q(4), _q(64))


class TestHilb:
    '''
    Tests the reconstruction from Hilbert charts.
    '''
    def test_ordinary(self):
        chart = HilbChart((HilbCluster(_q(4), _q(7)), HilbCluster(_q(5), _q(9))))
        assert reconstruct_hilb(chart, _spectral()) == reconstruct(_pairs((4, 7), (5, 9)), _spectral())

    @pytest.mark.parametrize('flavor', [Flavor.HIGGS, Flavor.CONNECTION])
    def test_double(self, flavor):
        chart = HilbChart((HilbCluster(_q(4), _q(7), 2, (_q(2),)),))
        fm = reconstruct_hilb(chart, _spectral(flavor))
        assert validate(fm).ok
        assert fm.f21 == Poly.from_roots([4, 4], QQ)
        assert fm.f11 == Poly([-1, 2], QQ)
        assert hilb_params(fm, 4, 2) == HilbCluster(_q(4), _q(7), 2, (_q(2),))

    def test_triple(self):
        spectral = SpectralData(['0', '1', '2', '3', '4', 'inf'], ['1/3', '1/5', '1/7', '1/11', '1/13', '1/17'])
        cluster = HilbCluster(_q(5), _q(7), 3, (_q(2), _q(3)))
        fm = reconstruct_hilb(HilbChart((cluster,)), spectral)
        assert validate(fm).ok
        assert fm.f21 == Poly.from_roots([5, 5, 5], QQ)
        assert hilb_params(fm, 5, 3) == cluster

    def test_length(self):
        chart = HilbChart((HilbCluster(_q(4), _q(7), 3, (_q(1), _q(1))),))
        with pytest.raises(ValidationError) as excinfo:
            reconstruct_hilb(chart, _spectral())
        assert 'length 3' in str(excinfo.value)

    def test_float_backend(self):
        field = get_field('float')
        chart = HilbChart((HilbCluster(field.convert(4), field.convert(7), 2, (field.convert(2),)),))
        with pytest.raises(ValidationError):
            reconstruct_hilb(chart, _spectral(field=field))

    def test_params_on_pole(self):
        fm = reconstruct(_pairs((4, 7), (5, 9)), _spectral())
        with pytest.raises(PoleCollision):
            hilb_params(fm, 2, 1)

    def test_from_json(self):
        chart = hilb_from_json({'clusters': [{'x': '4', 'y': '7', 'mult': 2, 'lambda': ['2']}]}, QQ)
        assert chart.length == 2
        assert chart.clusters[0] == HilbCluster(_q(4), _q(7), 2, (_q(2),))

    def test_from_json_exceptional(self):
        chart = hilb_from_json({'clusters': [{'pole': 3, 'eps': -1, 'a': '1/2'}, {'x': '5', 'y': '9'}]}, QQ)
        assert chart.clusters[0].pole == 3
        assert chart.clusters[0].eps == -1

    def test_from_json_malformed(self):
        with pytest.raises(ParseError):
            hilb_from_json({'clusters': [{'y': '7'}]}, QQ)


class TestPairJson:
    '''
    Tests the serialization of apparent pairs.
    '''
    def test_blowup(self):
        pair = ApparentPair(_q(2), _q('-2/7'), blowup=Blowup(3, 1, _q('1/2')))
        data = pair_to_json(pair, QQ)
        assert data == {'q': '2', 'p': '-2/7', 'blowup': {'index': 3, 'eps': 1, 'v': '1/2'}}
        assert pair_from_json(data, QQ) == pair

    def test_infinite_chart(self):
        data = {'chart': 'inf', 's': '0', 'u': '3'}
        pair = pair_from_json(data, QQ)
        assert pair.chart == Chart.INFINITE
        assert pair_to_json(pair, QQ) == data

    def test_bad_eps(self):
        with pytest.raises(ParseError) as excinfo:
            pair_from_json({'q': '2', 'p': '1', 'blowup': {'index': 3, 'eps': 2, 'v': '0'}}, QQ, 'pairs[0]')
        assert excinfo.value.location == 'pairs[0].blowup.eps'

    def test_missing(self):
        with pytest.raises(ParseError):
            pair_from_json({'q': '2'}, QQ)

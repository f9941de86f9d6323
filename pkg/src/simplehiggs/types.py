
'''
Type declarations
'''

from enum import Enum, unique
from typing import Any, NamedTuple, Optional, Tuple

#: Element of one of the scalar fields, see :mod:`simplehiggs.scalar`
Scalar = Any


@unique
class Backend(str, Enum):
    '''
    Enumeration of the scalar backends.
    '''
    #: Exact rationals
    EXACT = 'exact'
    #: Exact rational functions in the deformation variable ``h``
    DEFORMATION = 'deformation'
    #: Complex floating point with a comparison tolerance
    FLOAT = 'float'

    @staticmethod
    def from_string(value: str) -> 'Backend':
        '''
        Helper to convert a string to an instance.

        :param value: The string to convert.
        :returns: The enum value
        :raises ValueError: If the supplied value is not found in the enumeration.
        '''
        if not isinstance(value, str):
            raise ValueError('only string types allowed')
        val = value.lower()
        for member in Backend:
            if member.value == val:
                return member
        raise ValueError(f'Value {value} is not a valid Backend')


@unique
class Flavor(str, Enum):
    '''
    Whether residue eigenvalues belong to a Higgs field or to a connection.
    '''
    #: Eigenvalues are ``+nu_i`` and ``-nu_i`` at every pole
    HIGGS = 'higgs'
    #: Eigenvalues are ``+nu_i``, ``-nu_i`` at finite poles and ``nu_n``, ``1 - nu_n`` at infinity
    CONNECTION = 'connection'

    @staticmethod
    def from_string(value: str) -> 'Flavor':
        '''
        Helper to convert a string to an instance.

        :param value: The string to convert.
        :returns: The enum value
        :raises ValueError: If the supplied value is not found in the enumeration.
        '''
        if not isinstance(value, str):
            raise ValueError('only string types allowed')
        val = value.lower()
        if val == 'higgs':
            return Flavor.HIGGS
        if val in ('connection', 'conn'):
            return Flavor.CONNECTION
        raise ValueError(f'Value {value} is not a valid Flavor')


@unique
class Chart(str, Enum):
    '''
    Projective chart of an apparent singularity.
    '''
    #: ``[1:q]``, the pair is ``(q, p)``
    FINITE = 'finite'
    #: ``[s:1]``, the pair is ``(s, u)``
    INFINITE = 'inf'


@unique
class ModificationKind(str, Enum):
    '''
    Direction of an elementary modification.
    '''
    #: Lowers the degree by one
    LOWER = 'lower'
    #: Raises the degree by one
    UPPER = 'upper'


@unique
class ProjectiveValue(str, Enum):
    '''
    Tagged values for chart coordinates that are not finite scalars.
    '''
    #: ``x / 0`` with ``x != 0``
    INFINITY = 'inf'
    #: ``0 / 0``
    INDETERMINATE = '0/0'


class Blowup(NamedTuple):
    '''
    Blow-up coordinate of a pair sitting over ``(t_i, eps * nu_hat_i)``.
    '''
    #: 1-based index of the finite pole
    index: int
    #: Sign, ``1`` or ``-1``
    eps: int
    #: The slope ``(p - eps * nu_hat_i) / (q - t_i)``
    v: Scalar


class ApparentPair(NamedTuple):
    '''
    Apparent singularity together with its dual parameter.
    '''
    #: Abscissa ``q`` in the finite chart, ``s`` in the infinite chart
    q: Scalar
    #: Dual parameter ``p``, or ``u`` in the infinite chart
    p: Scalar
    #: Chart the coordinates refer to
    chart: Chart = Chart.FINITE
    #: Blow-up coordinate when the pair lives on an exceptional curve
    blowup: Optional[Blowup] = None
    #: Set when the values are float witnesses of roots that are not exact
    approximate: bool = False


class HilbCluster(NamedTuple):
    '''
    A cluster of a Hilbert chart: a base point, a multiplicity and the fiber parameters.

    For an exceptional cluster ``pole`` names the finite pole, ``y`` is ``eps * nu_hat`` and ``a`` is the blow-up
    coordinate of the base.
    '''
    #: Base abscissa
    x: Scalar
    #: Base dual value
    y: Scalar
    #: Multiplicity
    mult: int = 1
    #: Fiber parameters ``lambda_0 .. lambda_{mult-2}``
    lambdas: Tuple[Scalar, ...] = ()
    #: 1-based pole index for exceptional clusters
    pole: Optional[int] = None
    #: Sign of the exceptional base
    eps: int = 1
    #: Blow-up coordinate of the exceptional base
    a: Optional[Scalar] = None


class HilbChart(NamedTuple):
    '''
    A point of an affine chart of the Hilbert scheme of points.
    '''
    #: The clusters, with distinct base abscissae
    clusters: Tuple[HilbCluster, ...]

    @property
    def length(self) -> int:
        '''
        Total number of points, counted with multiplicity.
        '''
        return sum(c.mult for c in self.clusters)


class Modification(NamedTuple):
    '''
    Elementary modification at a point along a line.
    '''
    #: The point ``a``
    point: Scalar
    #: Projective direction ``l``, a pair of scalars
    direction: Tuple[Scalar, Scalar]
    #: Lower or upper
    kind: ModificationKind


class JumpParams(NamedTuple):
    '''
    A point ``((q1, p1), (q2, p2), lambda)`` of the parameter space of the jumping family.
    '''
    q1: Scalar
    p1: Scalar
    q2: Scalar
    p2: Scalar
    #: Slope with ``p2 - p1 = lam * (q2 - q1)``
    lam: Scalar
    #: When set, ``q2 = q1 + h`` and ``p2 = p1 + lam * h`` symbolically
    deform: bool = False


class ConnJumpParams(NamedTuple):
    '''
    Parameters of the connection jumping family.
    '''
    jump: JumpParams
    e0: Scalar
    e1: Scalar
    #: Signs ``eps_1 .. eps_4``
    eps: Tuple[int, ...] = (1, 1, 1, 1)


class HilbPoint5(NamedTuple):
    '''
    Hilbert chart parameters of two pairs.
    '''
    pairs: Tuple[ApparentPair, ApparentPair]
    #: ``p1 - p2 = lam_plus * (q1 - q2)``, or a :class:`ProjectiveValue`
    lam_plus: Any
    #: ``p1 + p2 = lam_minus * (q1 - q2)``, or a :class:`ProjectiveValue`
    lam_minus: Any
    #: Exceptional chart version of ``lam_plus``
    lam_plus_i: Any = None
    #: Exceptional chart version of ``lam_minus``
    lam_minus_i: Any = None
    #: 1-based pole index for the exceptional chart values
    pole: Optional[int] = None


class ChainPoint(NamedTuple):
    '''
    Blow-up chain coordinates, elements of a quadratic extension of the deformation field.
    '''
    s: Any
    t1: Any
    t2: Any
    u1: Any
    u2: Any
    v: Any
    w: Any
    #: ``1 / p'_1`` and ``1 / p'_2``
    pbar: Tuple[Any, Any]


class ChainLimits(NamedTuple):
    '''
    Limits of the blow-up chain at ``h = 0``.
    '''
    s: Scalar
    t1: Scalar
    t2: Scalar
    u1: Scalar
    u2: Scalar
    v: Scalar
    w: Scalar


class QuadraticLimit(NamedTuple):
    '''
    A limit written as a polynomial of degree two in ``(lam, p1)``.
    '''
    const: Scalar
    p1_coeff: Scalar
    p1_sq_coeff: Scalar
    lam_coeff: Scalar
    lam_p1_coeff: Scalar
    lam_sq_coeff: Scalar

    def at(self, lam: Scalar, p1: Scalar) -> Scalar:
        '''
        Evaluates the limit at ``(lam, p1)``.
        '''
        return (self.const + self.p1_coeff * p1 + self.p1_sq_coeff * p1 * p1 + self.lam_coeff * lam
                + self.lam_p1_coeff * lam * p1 + self.lam_sq_coeff * lam * lam)

    def gradient(self, lam: Scalar, p1: Scalar) -> Tuple[Scalar, Scalar]:
        '''
        The partial derivatives ``(d/dlam, d/dp1)`` at ``(lam, p1)``.
        '''
        return (self.lam_coeff + self.lam_p1_coeff * p1 + 2 * self.lam_sq_coeff * lam,
                self.p1_coeff + 2 * self.p1_sq_coeff * p1 + self.lam_p1_coeff * lam)


class ProbeReport(NamedTuple):
    '''
    Jacobian of ``(lim u1, lim w)`` in ``(lam, p1)`` at a fixed ``q1``, evaluated on a grid of ``(lam, p1)``.
    '''
    q1: Scalar
    #: The grid point the Jacobian below is taken at, the first one with a nonzero determinant if there is one
    point: Tuple[Scalar, Scalar]
    #: ``((du1/dlam, du1/dp1), (dw/dlam, dw/dp1))``
    jacobian: Tuple[Tuple[Scalar, Scalar], Tuple[Scalar, Scalar]]
    determinant: Scalar
    #: Grid points at which the determinant vanishes
    singular_points: Tuple[Tuple[Scalar, Scalar], ...]
    #: Whether the determinant, as a polynomial in ``(lam, p1)``, is not identically zero
    invertible: bool


class GoldenMismatch(NamedTuple):
    '''
    A stored limit that differs from the recomputed one.
    '''
    q1: str
    key: str
    expected: str
    actual: str


class Check(NamedTuple):
    '''
    Outcome of a single validation condition.
    '''
    name: str
    passed: bool
    detail: str = ''


class ValidationReport(NamedTuple):
    '''
    Collection of validation outcomes.
    '''
    checks: Tuple[Check, ...]

    @property
    def ok(self) -> bool:
        '''
        Whether every condition passed.
        '''
        return all(c.passed for c in self.checks)

    def failed(self) -> Tuple[str, ...]:
        '''
        Names of the failed conditions.
        '''
        return tuple(c.name for c in self.checks if not c.passed)


class RunManifest(NamedTuple):
    '''
    Describes a CLI run, identical manifests imply identical exact outputs.
    '''
    command: str
    #: SHA-256 of the canonical input document
    input_digest: str
    backend: Backend
    tolerance: float
    #: Package name to version
    versions: Tuple[Tuple[str, str], ...]


class Residue(NamedTuple):
    '''
    Residue of a field matrix at a pole, with trace, determinant and eigenvalues.
    '''
    #: Rows of the 2x2 residue matrix
    matrix: Tuple[Tuple[Scalar, Scalar], Tuple[Scalar, Scalar]]
    trace: Scalar
    det: Scalar
    #: Unordered pair, elements of the field or of a quadratic extension
    eigenvalues: Tuple[Any, Any]


'''
Exceptions
'''

from typing import Any, Optional


class HiggsException(Exception):
    '''
    Base for the exception tree used by this library.

    :note: Some functions throw ordinary python base exceptions as well.
    '''


class ValidationError(HiggsException):
    '''
    Indicates that a value failed validation.
    '''


class UsageError(HiggsException):
    '''
    The command line was used incorrectly.
    '''


class ParseError(HiggsException):
    '''
    An input document could not be parsed.
    '''
    def __init__(self, message: str, location: Optional[str] = None) -> None:
        '''
        :param message: The message to carry.
        :param location: JSON path or file offset where parsing failed, if known.
        '''
        super().__init__(message if location is None else f'{message} (at {location})')
        self.location = location


class DomainError(HiggsException):
    '''
    Base for the mathematical failures, such as singular systems or poles at a limit.
    '''


class NonGeneric(DomainError):
    '''
    The residue eigenvalues violate the genericity conditions.
    '''


class FactorizationUnavailable(DomainError):
    '''
    A root could not be expressed in the working field and no float fallback was permitted.
    '''


class DuplicateNode(DomainError):
    '''
    Two interpolation nodes coincide.
    '''


class SingularSystem(DomainError):
    '''
    A linear system has no unique solution.
    '''
    def __init__(self, message: str, defect: int = 0, cluster: Any = None) -> None:
        '''
        :param message: The message to carry.
        :param defect: Difference between the size of the system and its rank.
        :param cluster: The Hilbert-chart cluster responsible for the failure, if any.
        '''
        super().__init__(message)
        self.defect = defect
        self.cluster = cluster


class PoleAtLimit(DomainError):
    '''
    The denominator of a rational function in ``h`` vanishes at ``h = 0``.
    '''


class OddPart(DomainError):
    '''
    A quadratic extension element with nonzero odd part was passed where an even one is required.
    '''


class NoPivot(DomainError):
    '''
    The lower left entry of a field matrix vanishes identically, so no normal form exists.
    '''


class NonSemisimple(DomainError):
    '''
    Dual values at a zero of the cyclic vector are not defined in the working field.
    '''
    def __init__(self, message: str, quadratic: Any = None) -> None:
        '''
        :param message: The message to carry.
        :param quadratic: The value ``g(q)`` whose square roots were requested.
        '''
        super().__init__(message)
        self.quadratic = quadratic


class PoleCollision(DomainError):
    '''
    An apparent singularity coincides with a pole; the blow-up chart has to be used instead.
    '''


class MissingBlowup(DomainError):
    '''
    A pair sits on a pole but carries no blow-up coordinate.
    '''


class Indeterminate(DomainError):
    '''
    A chart coordinate is of the form 0/0 without a deformation to resolve it.
    '''


class ParamOutsideX(DomainError):
    '''
    Jump parameters lie outside the parameter space of the jumping family.
    '''


class BundleBoundExceeded(DomainError):
    '''
    The requested splitting type exceeds the bound ``(n - 3) // 2``.
    '''


class DegenerateEigenSolve(DomainError):
    '''
    The linear equation for a shifted eigenvalue has a vanishing leading coefficient.
    '''
    def __init__(self, message: str, index: int) -> None:
        '''
        :param message: The message to carry.
        :param index: Index of the pole (1-based) whose equation degenerated.
        '''
        super().__init__(message)
        self.index = index


class DegenerateQuadratic(DomainError):
    '''
    The quadratic defining the apparent singularities lost its leading coefficient.
    '''


class InconsistentConstruction(DomainError):
    '''
    Two constructions of the same object disagree, or an identity that holds by construction fails.
    '''


def error_name(exc: BaseException) -> str:
    '''
    Returns the machine readable name of an error, used in diagnostics.
    '''
    return type(exc).__name__

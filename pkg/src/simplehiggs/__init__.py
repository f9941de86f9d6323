
'''
Coordinates on moduli spaces of rank two parabolic Higgs bundles and connections on the projective line.
'''

__version__ = '0.1.0'

from .apparent import extract, reconstruct
from .modelcore import FieldMatrix, SpectralData, validate
from .scalar import get_field
from .types import ApparentPair, Backend, Flavor

__all__ = [
    'ApparentPair',
    'Backend',
    'FieldMatrix',
    'Flavor',
    'SpectralData',
    'extract',
    'get_field',
    'reconstruct',
    'validate',
]

"""Verification suites, one module per contract family."""
from .adaptive import AdaptiveSuite
from .cover import CoverSuite
from .equivalence import EquivalenceSuite
from .hoeffding import HoeffdingSuite
from .lieb import LiebSuite
from .mgf import MgfSuite
from .peeling import PeelingSuite
from .tail import TailSuite

__all__ = [
    'AdaptiveSuite',
    'CoverSuite',
    'EquivalenceSuite',
    'HoeffdingSuite',
    'LiebSuite',
    'MgfSuite',
    'PeelingSuite',
    'TailSuite',
]

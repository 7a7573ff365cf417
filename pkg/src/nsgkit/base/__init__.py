"""Base classes and interfaces for nsgkit."""
from .distribution import VectorDistribution
from .suite import CheckResult, Suite

__all__ = ['VectorDistribution', 'Suite', 'CheckResult']

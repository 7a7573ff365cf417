"""nsgkit: concentration bounds and numerical verification for norm-subGaussian vectors."""

__version__ = "0.1.0"

"""Exact polyhedral, lattice and monoid computations behind equivariant
compactifications of reductive groups."""

__version__ = "0.1.0"

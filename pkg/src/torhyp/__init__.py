"""torhyp: exact tools for the nine smooth complete toric threefold families
of Picard rank 2 and 3, their divisor polytopes, toric-ideal move sets, and
algebraic hyperbolicity verdicts."""

__version__ = "0.1.0"

"""Jordan-algebra geometry of symmetric cones, Shilov boundaries and contraction semigroups."""

__version__ = "0.1.0"

"""Sharp Hardy inequalities on weighted radial model manifolds."""

__version__ = "0.1.0"

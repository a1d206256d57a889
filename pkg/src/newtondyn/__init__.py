"""Newton maps of polynomials: dynamics, degenerations and non-Archimedean limits."""
__version__ = "0.1.0"

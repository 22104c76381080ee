"""Curvature and compatibility checks for contact metric 3-manifolds on one chart."""

__version__ = "0.1.0"

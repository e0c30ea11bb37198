"""Herdability analysis of positive linear systems on networks."""

__version__ = "0.1.0"

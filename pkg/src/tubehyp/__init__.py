"""Tube domains over planar strip bases: property checks, harmonic witness maps,
Kobayashi metric bounds and non-hyperbolicity certificates."""

__version__ = "0.1.0"

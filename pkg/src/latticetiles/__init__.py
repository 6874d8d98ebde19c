"""Exact verification and enumeration of multiple lattice tilings of the plane."""
from __future__ import annotations

__version__ = "0.1.0"

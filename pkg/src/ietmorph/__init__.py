"""Exact tools for interval exchange codings, morphisms and cut-and-project sets."""

from __future__ import annotations

__version__ = "0.1.0"

"""Generalized Hurwitz class numbers, half-integral weight Kloosterman data and
checks of the identities relating them."""

from __future__ import annotations

__version__ = "0.1.0"

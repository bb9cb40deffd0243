"""Connectivity of the commuting-product graph GG(C) on normal subsets of
prime-order elements in finite permutation groups.

For a normal subset ``C`` of a group ``G``, ``GG(C)`` has vertex set ``C``;
distinct ``x, y`` are adjacent when they commute and ``xy^-1`` or ``x^-1y``
lies in ``C``.
"""

from __future__ import annotations

__version__ = "0.1.0"

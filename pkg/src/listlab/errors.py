"""Shared error types."""

from __future__ import annotations


class InfeasibleError(Exception):
    """An exact computation would exceed its configured enumeration budget.

    Raised instead of silently approximating; callers may fall back to a
    sampled mode where one exists.
    """

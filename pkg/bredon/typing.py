"""
Type hints and aliases for the bredon library.
"""

from typing import List, Tuple, TypeVar

Perm = Tuple[int, ...]
"""A permutation of ``{0, ..., d-1}`` as its tuple of images."""

Vector = List[int]
"""An integer vector (arbitrary precision)."""

Matrix = List[List[int]]
"""A row-major integer matrix (arbitrary precision)."""

CallMsg = TypeVar("CallMsg")
"""Type variable for server call messages."""

CastMsg = TypeVar("CastMsg")
"""Type variable for server cast messages."""

StateType = TypeVar("StateType")
"""Type variable for server state."""

__all__ = ["Perm", "Vector", "Matrix", "CallMsg", "CastMsg", "StateType"]

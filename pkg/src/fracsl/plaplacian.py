"""The scalar p-Laplacian map, its inverse, and conjugate exponents."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


def _check_p(p: float):
    if not p > 1.0:
        raise ValidationError(f"p-Laplacian exponent must exceed 1, got {p}", field="p")


def conjugate(p: float) -> float:
    """Conjugate exponent p/(p-1), so that 1/p + 1/conjugate(p) = 1."""
    _check_p(p)
    return p / (p - 1.0)


@dataclass(frozen=True)
class ExponentPair:
    """An exponent p > 1 and its conjugate (the inverse map's exponent)."""

    p: float
    p_conj: float

    @classmethod
    def of(cls, p: float) -> "ExponentPair":
        return cls(float(p), conjugate(p))


def phi(p: float, s):
    """|s|^(p-2) * s, extended continuously by phi(p, 0) = 0.

    The continuous extension matters for p < 2, where the bare power form
    is 0 * inf at s = 0. Accepts scalars or numpy arrays.
    """
    _check_p(p)
    if np.isscalar(s):
        s = float(s)
        if s == 0.0:
            return 0.0
        return abs(s) ** (p - 2.0) * s
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    nz = s != 0.0
    out[nz] = np.abs(s[nz]) ** (p - 2.0) * s[nz]
    return out


def phi_inverse(p: float, s):
    """Inverse of phi(p, .): equals phi(conjugate(p), .)."""
    return phi(conjugate(p), s)

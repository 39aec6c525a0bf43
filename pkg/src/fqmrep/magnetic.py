"""Magnetic translations on the torus and their even-modulus twin.

For odd N the operators J_{r,s} = omega^{r s / 2} P^r Q^s close into a
projective representation of Z_N x Z_N (the 1/2 means the inverse of 2
mod N, which exists only for odd N).  For N = 2^n that inverse is
missing; the construction doubles the space instead and uses

    (J^p_{r,s})_{k1 k2, j1 j2}
        = omega^{p(-s r + (k1 + k2) s)} [j1 = k1 - r][j2 = k2 - r]

on C^{N^2} with the composite index N k1 + k2.  The same operator
factors as omega^{-p s r} (Q^s P^r) (x) (Q^s P^r), which is kept as an
independent construction for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exactnum import ZMod
from .heisenberg import HWParams, p_matrix, q_matrix
from .matrixcore import OpMatrix

__all__ = ["EvenModulus", "TorusPoint", "j_odd", "j_twisted", "j_twisted_product"]


class EvenModulus(ValueError):
    """Odd-modulus construction invoked with an even N."""


@dataclass(frozen=True)
class TorusPoint:
    """Point (r, s) on the discrete torus Z_N x Z_N."""

    r: ZMod
    s: ZMod

    def __post_init__(self) -> None:
        if self.r.modulus != self.s.modulus:
            raise ValueError("coordinates carry different moduli")

    @classmethod
    def of(cls, N: int, r: int, s: int) -> TorusPoint:
        return cls(ZMod(r, N), ZMod(s, N))

    @property
    def N(self) -> int:
        return self.r.modulus

    def __add__(self, other: TorusPoint) -> TorusPoint:
        return TorusPoint(self.r + other.r, self.s + other.s)

    def __neg__(self) -> TorusPoint:
        return TorusPoint(-self.r, -self.s)

    def coords(self) -> tuple[int, int]:
        return (self.r.value, self.s.value)


def _coords(pt, N: int) -> tuple[int, int]:
    if isinstance(pt, TorusPoint):
        if pt.N != N:
            raise ValueError(f"point modulus {pt.N} != {N}")
        return pt.coords()
    r, s = pt
    return (r % N, s % N)


def j_odd(N: int, pt) -> OpMatrix:
    """Magnetic translation omega^{r s/2} P^r Q^s for odd N (float backend)."""
    if N % 2 == 0:
        raise EvenModulus(f"j_odd needs odd N, got {N}")
    r, s = _coords(pt, N)
    inv2 = pow(2, -1, N)
    k = np.arange(N)
    j = (k - r) % N
    mask = np.zeros((N, N), dtype=bool)
    mask[k, j] = True
    exponents = np.zeros((N, N), dtype=np.int64)
    exponents[k, j] = (r * s * inv2 + j * s) % N
    return OpMatrix.from_phase_table(
        N, exponents, mask, backend="float", meta=f"j_odd(r={r},s={s})"
    )


def j_twisted(params: HWParams, pt, backend: str | None = None) -> OpMatrix:
    """Twisted magnetic translation J^p_{r,s} on C^{N^2}, N = 2^n."""
    N, p = params.N, params.p
    if not params.is_even:
        raise ValueError(f"twisted construction needs N = 2^n, got {N}")
    r, s = _coords(pt, N)
    backend = params.default_backend() if backend is None else backend
    dim = N * N
    k1, k2 = np.divmod(np.arange(dim), N)
    j1, j2 = (k1 - r) % N, (k2 - r) % N
    cols = N * j1 + j2
    mask = np.zeros((dim, dim), dtype=bool)
    mask[np.arange(dim), cols] = True
    exponents = np.zeros((dim, dim), dtype=np.int64)
    exponents[np.arange(dim), cols] = (p * (-s * r + (k1 + k2) * s)) % N
    return OpMatrix.from_phase_table(
        N, exponents, mask, backend=backend, meta=f"j_twisted(r={r},s={s})"
    )


def j_twisted_product(params: HWParams, pt, backend: str | None = None) -> OpMatrix:
    """Product-form twin omega^{-p s r} (Q^s P^r) (x) (Q^s P^r)."""
    from .exactnum import CycNum

    N, p = params.N, params.p
    r, s = _coords(pt, N)
    backend = params.default_backend() if backend is None else backend
    block = (q_matrix(params, backend) ** s) @ (p_matrix(params, backend) ** r)
    out = block.kron(block)
    phase_exp = (-p * s * r) % N
    if backend == "exact":
        out = out.scalar_mul(CycNum.root(N, phase_exp))
    else:
        out = out.scalar_mul(complex(np.exp(2j * np.pi * phase_exp / N)))
    out.meta = f"j_twisted_product(r={r},s={s})"
    return out

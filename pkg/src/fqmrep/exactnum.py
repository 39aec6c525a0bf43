"""Exact modular and scaled-cyclotomic scalar arithmetic.

Two scalar types back everything else in the package:

* ``ZMod`` -- residue classes used for all index/exponent bookkeeping.
* ``CycNum`` -- elements of Z[omega_M, 1/2] in a reduced power basis,
  exact enough to represent every matrix entry the even-modulus
  constructions produce (roots of unity, dyadic scales, sqrt(2)).

For M = 2^m the basis is 1, omega, ..., omega^{M/2-1} with
omega^{M/2} = -1 (negacyclic reduction).  For M an odd prime the basis
is 1, omega, ..., omega^{M-2} with omega^{M-1} = -(1 + ... + omega^{M-2}).
A value is coeffs * 2^{-scale_log2}; the canonical form divides out
common factors of two, so equal values have equal representations.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

__all__ = [
    "NotAUnit",
    "UnsupportedOrder",
    "OrderMismatch",
    "ZMod",
    "CycNum",
    "jacobi_symbol",
]


class NotAUnit(ValueError):
    """Modular inverse requested for a non-unit."""


class UnsupportedOrder(ValueError):
    """Cyclotomic order outside {2^m} union {odd primes}."""


class OrderMismatch(ValueError):
    """Mixed cyclotomic orders with no common supported superorder."""


def _is_pow2(m: int) -> bool:
    return m >= 1 and m & (m - 1) == 0


def _is_odd_prime(m: int) -> bool:
    if m < 3 or m % 2 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def basis_size(order: int) -> int:
    """Length of the reduced power basis for a supported order."""
    if _is_pow2(order) and order >= 8:
        return order // 2
    if _is_odd_prime(order):
        return order - 1
    raise UnsupportedOrder(f"unsupported cyclotomic order {order}")


def reduce_exponent(order: int, e: int) -> list[tuple[int, int]]:
    """Rewrite omega^e as a signed sum over the reduced basis.

    Returns (index, sign) pairs; one pair for power-of-two orders,
    possibly the full basis for odd primes (omega^{q-1} case).
    """
    size = basis_size(order)
    e %= order
    if _is_pow2(order):
        return [(e, 1)] if e < size else [(e - size, -1)]
    if e < size:
        return [(e, 1)]
    return [(k, -1) for k in range(size)]


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd n >= 3; 0 when gcd(a, n) > 1."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"jacobi_symbol needs odd n >= 3, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class ZMod:
    """Residue class value mod modulus, kept in [0, modulus)."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other: ZMod | int) -> ZMod:
        if isinstance(other, int):
            return ZMod(other, self.modulus)
        if not isinstance(other, ZMod):
            return NotImplemented
        if other.modulus != self.modulus:
            raise ValueError(
                f"mixed moduli {self.modulus} and {other.modulus}"
            )
        return other

    def __add__(self, other: ZMod | int) -> ZMod:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ZMod(self.value + other.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other: ZMod | int) -> ZMod:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ZMod(self.value - other.value, self.modulus)

    def __rsub__(self, other: int) -> ZMod:
        return ZMod(other - self.value, self.modulus)

    def __mul__(self, other: ZMod | int) -> ZMod:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ZMod(self.value * other.value, self.modulus)

    __rmul__ = __mul__

    def __neg__(self) -> ZMod:
        return ZMod(-self.value, self.modulus)

    def __pow__(self, e: int) -> ZMod:
        if e < 0:
            return self.inv() ** (-e)
        return ZMod(pow(self.value, e, self.modulus), self.modulus)

    def inv(self) -> ZMod:
        """Multiplicative inverse; raises NotAUnit if gcd > 1."""
        try:
            return ZMod(pow(self.value, -1, self.modulus), self.modulus)
        except ValueError:
            raise NotAUnit(
                f"{self.value} is not a unit mod {self.modulus}"
            ) from None

    def is_unit(self) -> bool:
        import math

        return math.gcd(self.value, self.modulus) == 1

    def __int__(self) -> int:
        return self.value


def _canonical(order: int, coeffs: list[int], scale_log2: int) -> tuple[tuple[int, ...], int]:
    if all(c == 0 for c in coeffs):
        return tuple(0 for _ in coeffs), 0
    while all(c % 2 == 0 for c in coeffs):
        coeffs = [c // 2 for c in coeffs]
        scale_log2 -= 1
    return tuple(coeffs), scale_log2


@dataclass(frozen=True, eq=False)
class CycNum:
    """Scaled cyclotomic integer: 2^{-scale_log2} * sum coeffs[k] omega^k."""

    order: int
    coeffs: tuple[int, ...]
    scale_log2: int = 0

    def __post_init__(self) -> None:
        size = basis_size(self.order)
        if len(self.coeffs) != size:
            raise ValueError(
                f"order {self.order} needs {size} coefficients, got {len(self.coeffs)}"
            )
        coeffs, scale = _canonical(self.order, list(self.coeffs), self.scale_log2)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "scale_log2", scale)

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, order: int = 8) -> CycNum:
        return cls(order, (0,) * basis_size(order), 0)

    @classmethod
    def from_int(cls, k: int, order: int = 8) -> CycNum:
        coeffs = [0] * basis_size(order)
        coeffs[0] = k
        return cls(order, tuple(coeffs), 0)

    @classmethod
    def one(cls, order: int = 8) -> CycNum:
        return cls.from_int(1, order)

    @classmethod
    def root(cls, order: int, e: int) -> CycNum:
        """omega_order^e, with small power-of-two orders promoted to 8."""
        if order >= 1 and _is_pow2(order) and order < 8:
            e, order = e * (8 // order), 8
        size = basis_size(order)
        coeffs = [0] * size
        for idx, sign in reduce_exponent(order, e):
            coeffs[idx] += sign
        return cls(order, tuple(coeffs), 0)

    @classmethod
    def inv_sqrt2_pow(cls, k: int, order: int = 8) -> CycNum:
        """2^{-k/2} for any integer k, using sqrt(2) = omega_8 + omega_8^{-1}."""
        if order < 8 or not _is_pow2(order):
            raise UnsupportedOrder("inv_sqrt2_pow needs a power-of-two order >= 8")
        if k % 2 == 0:
            return cls(order, cls.one(order).coeffs, k // 2)
        coeffs = [0] * basis_size(order)
        coeffs[order // 8] += 1
        coeffs[3 * order // 8] -= 1  # omega_8^{-1} = -omega_8^3
        return cls(order, tuple(coeffs), (k + 1) // 2)

    # -- order management -----------------------------------------------

    def promote(self, order: int) -> CycNum:
        """Re-express in a larger power-of-two order (or return self)."""
        if order == self.order:
            return self
        if not (_is_pow2(self.order) and _is_pow2(order) and order > self.order):
            raise OrderMismatch(
                f"cannot promote order {self.order} to {order}"
            )
        factor = order // self.order
        coeffs = [0] * basis_size(order)
        for k, c in enumerate(self.coeffs):
            coeffs[k * factor] = c
        return CycNum(order, tuple(coeffs), self.scale_log2)

    def _common(self, other: CycNum) -> tuple[CycNum, CycNum]:
        if self.order == other.order:
            return self, other
        if _is_pow2(self.order) and _is_pow2(other.order):
            order = max(self.order, other.order)
            return self.promote(order), other.promote(order)
        raise OrderMismatch(
            f"no common order for {self.order} and {other.order}"
        )

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: CycNum | int) -> CycNum:
        if isinstance(other, int):
            other = CycNum.from_int(other, self.order)
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = self._common(other)
        t = max(a.scale_log2, b.scale_log2)
        ca = [c << (t - a.scale_log2) for c in a.coeffs]
        cb = [c << (t - b.scale_log2) for c in b.coeffs]
        return CycNum(a.order, tuple(x + y for x, y in zip(ca, cb)), t)

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum(self.order, tuple(-c for c in self.coeffs), self.scale_log2)

    def __sub__(self, other: CycNum | int) -> CycNum:
        if isinstance(other, int):
            other = CycNum.from_int(other, self.order)
        if not isinstance(other, CycNum):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: int) -> CycNum:
        return CycNum.from_int(other, self.order) - self

    def __mul__(self, other: CycNum | int) -> CycNum:
        if isinstance(other, int):
            other = CycNum.from_int(other, self.order)
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = self._common(other)
        size = basis_size(a.order)
        out = [0] * size
        for i, ci in enumerate(a.coeffs):
            if ci == 0:
                continue
            for j, cj in enumerate(b.coeffs):
                if cj == 0:
                    continue
                for idx, sign in reduce_exponent(a.order, i + j):
                    out[idx] += sign * ci * cj
        return CycNum(a.order, tuple(out), a.scale_log2 + b.scale_log2)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> CycNum:
        if e < 0:
            raise ValueError("negative CycNum powers are not supported")
        result = CycNum.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> CycNum:
        """Complex conjugate: omega^k -> omega^{-k}."""
        size = basis_size(self.order)
        out = [0] * size
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            for idx, sign in reduce_exponent(self.order, -k):
                out[idx] += sign * c
        return CycNum(self.order, tuple(out), self.scale_log2)

    # -- predicates and conversions --------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _demoted(self) -> CycNum:
        # Smallest power-of-two order representing the same value; keeps
        # hashing consistent with cross-order equality.
        x = self
        while _is_pow2(x.order) and x.order > 8:
            half = basis_size(x.order) // 2
            if any(x.coeffs[k] for k in range(1, 2 * half, 2)):
                break
            x = CycNum(x.order // 2, tuple(x.coeffs[0::2]), x.scale_log2)
        return x

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = CycNum.from_int(other, self.order)
        if not isinstance(other, CycNum):
            return NotImplemented
        try:
            a, b = self._common(other)
        except OrderMismatch:
            a, b = self._demoted(), other._demoted()
            if a.order != b.order:
                return False
        return a.coeffs == b.coeffs and a.scale_log2 == b.scale_log2

    def __hash__(self) -> int:
        x = self._demoted()
        return hash((x.order, x.coeffs, x.scale_log2))

    def to_complex(self) -> complex:
        w = 2j * cmath.pi / self.order
        acc = 0j
        for k, c in enumerate(self.coeffs):
            if c:
                acc += c * cmath.exp(w * k)
        return acc * 2.0 ** (-self.scale_log2)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "coeffs": list(self.coeffs),
            "scale_log2": self.scale_log2,
        }

    @classmethod
    def from_dict(cls, d: dict) -> CycNum:
        return cls(d["order"], tuple(d["coeffs"]), d["scale_log2"])

    def __repr__(self) -> str:
        return f"CycNum(order={self.order}, coeffs={self.coeffs}, scale_log2={self.scale_log2})"

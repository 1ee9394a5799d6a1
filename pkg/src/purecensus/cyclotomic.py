"""Exact arithmetic in Z[zeta_l] for odd prime l.

Elements are stored in the power basis 1, z, ..., z^(l-2); products are formed
modulo z^l - 1 and then folded back using 1 + z + ... + z^(l-1) = 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CyclotomicInteger:
    ell: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != self.ell - 1:
            raise ValueError(f"expected {self.ell - 1} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_int(cls, ell: int, c: int) -> "CyclotomicInteger":
        return cls(ell, (int(c),) + (0,) * (ell - 2))

    @classmethod
    def zeta_power(cls, ell: int, k: int) -> "CyclotomicInteger":
        full = [0] * ell
        full[k % ell] = 1
        return cls._fold(ell, full)

    @classmethod
    def _fold(cls, ell: int, full) -> "CyclotomicInteger":
        top = full[ell - 1]
        return cls(ell, tuple(int(c - top) for c in full[: ell - 1]))

    def _full(self) -> list[int]:
        return list(self.coeffs) + [0]

    def _coerce(self, other) -> "CyclotomicInteger":
        if isinstance(other, CyclotomicInteger):
            if other.ell != self.ell:
                raise ValueError("mismatched cyclotomic fields")
            return other
        if isinstance(other, int):
            return CyclotomicInteger.from_int(self.ell, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicInteger(self.ell, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInteger(self.ell, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInteger(self.ell, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ell = self.ell
        full = [0] * ell
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        full[(i + j) % ell] += a * b
        return CyclotomicInteger._fold(ell, full)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not integral in general")
        out = CyclotomicInteger.from_int(self.ell, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational integer")
        return self.coeffs[0]

    def exact_div(self, d: int) -> "CyclotomicInteger":
        # the power basis is a Z-basis, so divisibility is coefficient-wise
        if any(c % d for c in self.coeffs):
            raise ArithmeticError(f"{self} is not divisible by {d}")
        return CyclotomicInteger(self.ell, tuple(c // d for c in self.coeffs))

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.ell)
        return sum(c * z**k for k, c in enumerate(self.coeffs))

    def __eq__(self, other):
        if isinstance(other, int):
            other = CyclotomicInteger.from_int(self.ell, other)
        if not isinstance(other, CyclotomicInteger):
            return NotImplemented
        return self.ell == other.ell and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ell, self.coeffs))

    def __repr__(self):
        terms = [f"{c}*z^{k}" if k else str(c) for k, c in enumerate(self.coeffs) if c]
        return f"Cyc{self.ell}({' + '.join(terms) or '0'})"

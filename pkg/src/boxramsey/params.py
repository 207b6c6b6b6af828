"""Threshold formulas for the consistency and extraction steps and the two pipelines.

Exponents are exact Python ints.  The thresholds themselves are doubly
exponential, so they are only ever materialised through ``capped_pow``,
which saturates at a caller-given cap instead of building huge integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import InvalidInput


def capped_pow(base: int, exp: int, cap: int) -> int:
    """``min(base**exp, cap)`` without materialising ``base**exp`` when it is huge."""
    if exp < 0:
        raise InvalidInput("negative exponent")
    if base <= 1 or exp == 0:
        return min(base ** exp if base >= 0 else 0, cap)
    if exp * (base.bit_length() - 1) > cap.bit_length() + 1:
        return cap
    return min(base ** exp, cap)


def tower_le(base: int, exp: int, n: int) -> bool:
    """Whether ``base**(base**exp) <= n``, decided without building the tower."""
    if base <= 1:
        return 1 <= n
    inner = capped_pow(base, exp, n.bit_length() + 1)
    return capped_pow(base, inner, n + 1) <= n


# Step thresholds -------------------------------------------------------------

def f_consistency(d: int) -> int:
    """Exponent factor of the consistent-box step: 2**(d-1) * d!."""
    if d < 1:
        raise InvalidInput("d must be positive")
    return 2 ** (d - 1) * factorial(d)


def g_colouring(d: int, r: int) -> int:
    """Exponent factor of the dense-set step for colourings: (12 + 2r)**(d-1)."""
    if d < 1 or r < 1:
        raise InvalidInput("d and r must be positive")
    return (12 + 2 * r) ** (d - 1)


def g_array(d: int) -> int:
    """Exponent factor of the dense-set step for arrays: 2 * 15**(d-1)."""
    if d < 1:
        raise InvalidInput("d must be positive")
    return 2 * 15 ** (d - 1)


def consistent_box_threshold(d: int, r: int, k: int, cap: int) -> int:
    """Side r**(f(d) r k**d) at which a consistent box of side k is guaranteed."""
    return capped_pow(r, f_consistency(d) * r * k ** d, cap)


def consistent_array_threshold(d: int, k: int, cap: int) -> int:
    """Side k**(f(d) k**(d-1)) at which a consistent subarray of side k is guaranteed."""
    return capped_pow(k, f_consistency(d) * k ** (d - 1), cap)


def _eps_pow(eps: Fraction, exp: int, cap: int) -> int:
    # ceil(eps**-exp), saturating at cap
    inv = Fraction(1) / eps
    if exp * (inv.numerator.bit_length() - inv.denominator.bit_length() - 1) > cap.bit_length() + 1:
        return cap
    v = inv ** exp
    return min(-(-v.numerator // v.denominator), cap)


def dense_colouring_threshold(d: int, r: int, k: int, eps: Fraction, cap: int) -> int:
    """eps**(-g k**(d-1)) * r**(g r k**d)."""
    g = g_colouring(d, r)
    a = _eps_pow(eps, g * k ** (d - 1), cap)
    b = capped_pow(r, g * r * k ** d, cap)
    return min(a * b, cap)


def dense_array_threshold(d: int, k: int, eps: Fraction, cap: int) -> int:
    """eps**(-g k**(d-1)) * k**(g k**(d-1))."""
    g = g_array(d)
    a = _eps_pow(eps, g * k ** (d - 1), cap)
    b = capped_pow(k, g * k ** (d - 1), cap)
    return min(a * b, cap)


# Pipeline parameters ---------------------------------------------------------

def ramsey_master_exponent(d: int, r: int) -> int:
    """C_d = 3 d g(d-1) + f(d) + 1 for the product-colouring pipeline."""
    if d < 2:
        raise InvalidInput("master exponent is defined for d >= 2")
    return 3 * d * g_colouring(d - 1, r) + f_consistency(d) + 1


def array_master_exponent(d: int) -> int:
    """C_d = 4 d g(d-1) + f(d) for the monotone-subarray pipeline."""
    if d < 2:
        raise InvalidInput("master exponent is defined for d >= 2")
    return 4 * d * g_array(d - 1) + f_consistency(d)


@dataclass(frozen=True)
class RamseyPlan:
    """Exponents and derived sizes for one (d, r, n) run of the colouring pipeline."""
    d: int
    r: int
    n: int

    @property
    def master_exponent(self) -> int:
        return ramsey_master_exponent(self.d, self.r)

    @property
    def t_exponent(self) -> int:
        # t = r ** (3 g(d-1) r n**d)
        return 3 * g_colouring(self.d - 1, self.r) * self.r * self.n ** self.d

    @property
    def u_exponent(self) -> int:
        # u = r ** (r n)
        return self.r * self.n

    def t(self, cap: int) -> int:
        return capped_pow(self.r, self.t_exponent, cap)

    def u(self, cap: int) -> int:
        return capped_pow(self.r, self.u_exponent, cap)

    @staticmethod
    def eps_hat(r: int, n: int, u: int) -> Fraction:
        """Pigeonhole density 1 / (r u**n) for the final-coordinate fibres."""
        return Fraction(1, r * u ** n)

    def guaranteed(self, side: int) -> bool:
        """Whether ``side`` reaches r**(r**(C_d r n**d))."""
        return tower_le(self.r, self.master_exponent * self.r * self.n ** self.d, side)


@dataclass(frozen=True)
class ArrayPlan:
    """Exponents and derived sizes for one (d, n) run of the array pipeline."""
    d: int
    n: int

    @property
    def master_exponent(self) -> int:
        return array_master_exponent(self.d)

    @property
    def t_exponent(self) -> int:
        # t = n ** (3 g(d-1) n**(d-1))
        return 3 * g_array(self.d - 1) * self.n ** (self.d - 1)

    def t(self, cap: int) -> int:
        return capped_pow(self.n, self.t_exponent, cap)

    def u(self, cap: int) -> int:
        return min(self.n ** 2, cap)

    @staticmethod
    def eps_hat(n: int, u: int) -> Fraction:
        """Pigeonhole density 1 / (2 C(u, n))."""
        return Fraction(1, 2 * comb(u, n))

    def guaranteed(self, side: int) -> bool:
        """Whether ``side`` reaches n**(n**(C_d n**(d-1)))."""
        return tower_le(self.n, self.master_exponent * self.n ** (self.d - 1), side)

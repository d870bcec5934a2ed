"""Fibration parameters and the closed-form slope bounds.

Every quantity is an exact :class:`fractions.Fraction`.  The branch degree
``r`` on a general fibre is always recomputed from ``(g, h, n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInput, NonIntegralR, NotMultipleOfN, UnsupportedOrder

Rational = Fraction


def format_rational(x) -> str:
    """Canonical ``"p/q"`` (or ``"p"``) rendering, sign on the numerator."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise InvalidInput(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    if not isinstance(s, str):
        raise InvalidInput(f"rationals are encoded as 'p/q' strings, got {s!r}")
    text = s.strip()
    num, _, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if den else 1
    except ValueError:
        raise InvalidInput(f"malformed rational {s!r}") from None
    if q == 0:
        raise InvalidInput(f"zero denominator in {s!r}")
    return Fraction(p, q)


def _check_ranges(g: int, h: int, n: int) -> None:
    if n < 2:
        raise InvalidInput(f"covering order n must be >= 2, got {n}")
    if g < 2:
        raise InvalidInput(f"fibre genus g must be >= 2, got {g}")
    if h < 0:
        raise InvalidInput(f"quotient genus h must be >= 0, got {h}")


def derive_r(g: int, h: int, n: int) -> int:
    """Branch degree ``r = 2(g - 1 - n(h - 1)) / (n - 1)`` from Hurwitz.

    Raises :class:`NonIntegralR` or :class:`NotMultipleOfN` when ``(g, h, n)``
    cannot come from a cyclic cover.
    """
    _check_ranges(g, h, n)
    num = 2 * (g - 1 - n * (h - 1))
    if num % (n - 1):
        raise NonIntegralR(f"(n-1)={n - 1} does not divide {num} for (g,h,n)=({g},{h},{n})")
    r = num // (n - 1)
    if r <= 0:
        raise InvalidInput(f"non-positive branch degree r={r} for (g,h,n)=({g},{h},{n})")
    if r % n:
        raise NotMultipleOfN(f"r={r} is not a multiple of n={n}")
    return r


def genus_from_r(r: int, n: int, h: int = 0) -> int:
    """Inverse of :func:`derive_r`; raises if the genus is not integral."""
    num = (n - 1) * r + 2 * n * (h - 1) + 2
    if num % 2:
        raise NonIntegralR(f"no integral genus for r={r}, n={n}, h={h}")
    return num // 2


@dataclass(frozen=True)
class FibrationParams:
    n: int
    g: int
    h: int = 0

    def __post_init__(self):
        derive_r(self.g, self.h, self.n)

    @property
    def r(self) -> int:
        return derive_r(self.g, self.h, self.n)

    @classmethod
    def from_r(cls, n: int, r: int, h: int = 0) -> "FibrationParams":
        return cls(n=n, g=genus_from_r(r, n, h), h=h)

    @property
    def lambda_lower(self) -> Fraction:
        return lambda_lower(self.g, self.h, self.n)

    @property
    def genus_hypothesis(self) -> bool:
        return genus_hypothesis_holds(self.g, self.h, self.n)


def lambda_lower(g: int, h: int, n: int) -> Fraction:
    """The sharp lower slope bound ``24(n-1)(g-1) / (2(2n-1)(g-1) - n(n+1)(h-1))``.

    Only the ranges of ``g, h, n`` are checked so the closed form can be
    compared with its specialisations for every genus; use
    :class:`FibrationParams` when integrality of ``r`` matters.
    """
    _check_ranges(g, h, n)
    den = 2 * (2 * n - 1) * (g - 1) - n * (n + 1) * (h - 1)
    if den == 0:
        raise InvalidInput(f"slope bound undefined for (g,h,n)=({g},{h},{n})")
    return Fraction(24 * (n - 1) * (g - 1), den)


def genus_hypothesis_holds(g: int, h: int, n: int) -> bool:
    """``g >= (2n-1)(2hn+n-1)/(n+1)``, needed by the lower bound when h >= 1.

    Vacuously true for ``h = 0``.
    """
    if h == 0:
        return True
    return (n + 1) * g >= (2 * n - 1) * (2 * h * n + n - 1)


def _delta(r: int, n: int) -> int:
    return 0 if r % (2 * n) == 0 else 1


def _upper_r(g: int, n: int) -> int:
    if n in (2, 3):
        raise UnsupportedOrder(f"no upper bound is available for n={n}; need n >= 4")
    if n < 2:
        raise InvalidInput(f"covering order n must be >= 2, got {n}")
    return derive_r(g, 0, n)


def _mu(r: int, n: int, delta: int) -> Fraction:
    if r == n:
        # r = n forces delta = 1 and the small-r denominator vanishes
        raise InvalidInput(f"the upper bound is undefined for r = n = {n} (smooth branch, slope is lambda_lower)")
    if r < n * (n - 1):
        return Fraction(48 * n * n * (r - 1), (n - 1) * (n + 1) * (r * r - delta * n * n))
    den = n * (n + 1) * r * r - 8 * (2 * n - 1) * r + 24 * n - delta * n ** 3 * (n + 1)
    return Fraction(48 * n * (n - 1) * (r - 1), den)


def lambda_upper(g: int, n: int) -> Fraction:
    """Upper slope bound ``12 - mu`` for type ``(g, 0, n)`` with ``n >= 4``.

    The two regimes ``n <= r < n(n-1)`` and ``r >= n(n-1)`` use different
    ``mu``; ``delta`` is 0 exactly when ``r`` is a multiple of ``2n``.
    """
    r = _upper_r(g, n)
    return 12 - _mu(r, n, _delta(r, n))


@dataclass(frozen=True)
class SlopeConstants:
    n: int
    r: int
    delta: int
    lambda_: Fraction
    mu: Fraction
    mu_prime: Fraction
    A: Fraction
    B: Fraction

    @property
    def large_r(self) -> bool:
        return self.r >= self.n * (self.n - 1)

    def identity_residual(self) -> Fraction:
        """``-2A + nB - 1``; zero in the large-``r`` regime."""
        return -2 * self.A + self.n * self.B - 1

    def coefficient_ledger(self) -> dict:
        n, A, B = self.n, self.A, self.B
        return {
            "-2A+nB-1": self.identity_residual(),
            "(n-2)A-2B": (n - 2) * A - 2 * B,
            "2(n-2)A-B": 2 * (n - 2) * A - B,
        }


def slope_constants(g: int, n: int) -> SlopeConstants:
    r = _upper_r(g, n)
    return slope_constants_from_r(r, n)


def slope_constants_from_r(r: int, n: int) -> SlopeConstants:
    if n < 4:
        raise UnsupportedOrder(f"no upper bound is available for n={n}; need n >= 4")
    if r % n or r < n:
        raise NotMultipleOfN(f"r={r} must be a positive multiple of n={n}")
    delta = _delta(r, n)
    mu = _mu(r, n, delta)
    mu_p = Fraction(n - 1, 12 * (r - 1)) * mu
    A = n - 1 - Fraction(r * (2 * n - 1) - 3 * n, n) * mu_p
    B = n - Fraction((n + 1) * (r * r - delta * n * n), 4 * n) * mu_p
    return SlopeConstants(n=n, r=r, delta=delta, lambda_=12 - mu, mu=mu, mu_prime=mu_p, A=A, B=B)

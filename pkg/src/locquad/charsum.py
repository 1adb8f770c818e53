"""Deterministic exact evaluation of p-adic character sums.

Every oscillatory quantity in this package reduces to finite sums of the
shape sum_z exp(2 pi i N(z) / p^e) with N(z) an integer-valued
polynomial reduced mod p^e.  The reductions are exact: numerators are
computed in modular integer arithmetic, and floating point enters only
in the final exp.  Sums are accumulated chunk by chunk in a fixed index
order, so results are bit-reproducible for a given argument list
regardless of environment.

int64 is safe throughout because moduli are capped at 2^31: all
intermediate products are at most (2^31)^2 < 2^63.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .places import valuation

# Hard cap on the number of enumerated terms in any one exact sum.
TERM_BUDGET = 10**7

_CHUNK = 1 << 18


class BudgetError(ValueError):
    """Raised when an exact enumeration would exceed TERM_BUDGET."""


def check_budget(terms: int, what: str = "character sum"):
    if terms > TERM_BUDGET:
        raise BudgetError(
            f"{what} needs {terms} terms, over the budget of {TERM_BUDGET}"
        )


def reduce_mod_prime_power(x: Fraction, p: int, e: int) -> int:
    """x mod p^e for a rational x integral at p (prime-to-p denominator
    is inverted mod p^e)."""
    pe = p**e
    num, den = x.numerator, x.denominator
    if den % p == 0:
        raise ValueError(f"{x} is not integral at {p}")
    return num * pow(den, -1, pe) % pe


def phase_sum(numerators: np.ndarray, p: int, e: int) -> complex:
    """sum exp(2 pi i n / p^e) over an int64 array of numerators in
    [0, p^e), reduced deterministically in chunk order."""
    pe = p**e
    total = 0 + 0j
    flat = numerators.reshape(-1)
    for start in range(0, flat.size, _CHUNK):
        chunk = flat[start : start + _CHUNK]
        angles = chunk.astype(np.float64) * (2.0 * np.pi / pe)
        total += complex(np.cos(angles).sum(), np.sin(angles).sum())
    return total


def poly_eval_mod(coeffs: list[int], z: np.ndarray, pe: int) -> np.ndarray:
    """Horner evaluation of a one-variable integer polynomial mod pe.

    coeffs[k] is the coefficient of z^k, already reduced mod pe.
    """
    acc = np.zeros_like(z)
    for c in reversed(coeffs):
        acc = (acc * z + c) % pe
    return acc


def padic_poly_sum(coeffs: list[Fraction], p: int, K: int) -> tuple[complex, int]:
    """Normalized exact sum p^-K sum_{z mod p^K} psi(f(z)) for the
    standard character psi and f(z) = sum coeffs[k] z^k with rational
    coefficients whose denominators are powers of p.

    Returns (value, e) where p^e was the common phase denominator.
    Exactness: f(z) mod 1 (in the p-adic sense) has denominator p^e with
    e = -min_k v(coeffs[k]); for z ranging over a full period p^K with
    K >= e the sum is the exact integral of psi(f) over Z_p.
    """
    e = 0
    for c in coeffs:
        if c != 0:
            e = max(e, -valuation(c, p))
    if e == 0:
        return 1.0 + 0j, 0  # psi(f) constant 1 on Z_p, up to unit phase
    pe = p**e
    if pe > 2**31 - 1:
        raise BudgetError(f"phase modulus {p}^{e} exceeds the int64-safe cap")
    check_budget(p**K, "p-adic polynomial sum")
    ints = [reduce_mod_prime_power(c * pe, p, e) if c else 0 for c in coeffs]
    z = np.arange(p**K, dtype=np.int64)
    nums = poly_eval_mod(ints, z, pe)
    return phase_sum(nums, p, e) / p**K, e

"""Weil constants of quadratic forms and the functional equation they
normalize.

Conventions, fixed once for the whole package: a diagonal form
q = <a_1, ..., a_n> has polarization matrix 2*diag(a), so

    det(q)   = prod(2 a_i),
    dual     q~(y) = sum y_i^2 / (4 a_i),

and the constant gamma(q, psi) is the eighth root of unity in

    FT(psi(q)) = gamma(q, psi) * |det q|^(-1/2) * psi(-q~),

with the Fourier transform FT(f)(y) = integral f(x) psi(x.y) dx for the
self-dual Haar measure.  gamma of a rank-1 form a*x^2 is computed as a
stabilized limit of exact Gauss sums

    I_m = p^m * |2a|^(1/2) * p^(-K) * sum_{y mod p^K} psi(a y^2 / p^(2m)),

K the exact conductor of the summand; I_m is independent of m once m is
large enough, and the limit is certified by three consecutive equal
values.  At the real place gamma(a x^2) = exp(i pi sign(a) / 4).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .charsum import BudgetError, padic_poly_sum
from .forms import QuadraticForm, relative_hasse, witt_filtration_level
from .places import AdditiveCharacter, Place, Rational, valuation

EIGHTH_ROOTS = [cmath.exp(1j * cmath.pi * k / 4) for k in range(8)]


def nearest_eighth_root(z: complex) -> tuple[int, float]:
    """Index k in 0..7 with z closest to exp(i pi k / 4), plus distance."""
    k = min(range(8), key=lambda k: abs(z - EIGHTH_ROOTS[k]))
    return k, abs(z - EIGHTH_ROOTS[k])


@dataclass(frozen=True)
class WeilConstant:
    value: complex
    eighth_root_index: int
    root_deviation: float
    stabilized_at: int | None = None  # Gauss-sum level; None at the real place

    def as_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "eighth_root_index": self.eighth_root_index,
            "root_deviation": self.root_deviation,
            "stabilized_at": self.stabilized_at,
        }


def polarized_det(q: QuadraticForm) -> Fraction:
    d = Fraction(1)
    for a in q.coeffs:
        d *= 2 * a
    return d


def polarized_det_abs_rsqrt(q: QuadraticForm) -> float:
    """|det q|^(-1/2) at the form's place."""
    d = polarized_det(q)
    if q.place.is_real:
        return 1.0 / math.sqrt(abs(d))
    return float(q.place.p) ** (valuation(d, q.place.p) / 2)


def _rank1_padic(a: Fraction, psi: AdditiveCharacter, tol: float, max_level: int):
    p = psi.place.p
    scale = math.sqrt(float(p) ** (-valuation(2 * a, p)))  # |2a|^(1/2)
    values = []
    for m in range(1, max_level + 3):
        c = Fraction(psi.sign) * a / p ** (2 * m)
        e = max(0, -valuation(c, p)) if c else 0
        s, _ = padic_poly_sum([Fraction(0), Fraction(0), c], p, e)
        values.append(p**m * scale * s)
        if (
            len(values) >= 3
            and abs(values[-3] - values[-2]) < tol
            and abs(values[-2] - values[-1]) < tol
        ):
            return values[-1], m - 2
    raise ArithmeticError(
        f"Gauss sums did not stabilize by level {max_level}: "
        + ", ".join(f"I_{i+1}={v:.6f}" for i, v in enumerate(values))
    )


def gamma_rank1(
    a: Rational,
    psi: AdditiveCharacter,
    tol: float = 1e-10,
    max_level: int = 6,
) -> WeilConstant:
    """Weil constant of the rank-1 form a*x^2 under the character psi."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("form coefficient must be nonzero")
    if psi.place.is_real:
        v = cmath.exp(1j * cmath.pi / 4 * psi.sign * (1 if a > 0 else -1))
        k, dev = nearest_eighth_root(v)
        return WeilConstant(v, k, dev, None)
    value, level = _rank1_padic(a, psi, tol, max_level)
    k, dev = nearest_eighth_root(value)
    return WeilConstant(value, k, dev, level)


def gamma_form(q: QuadraticForm, psi: AdditiveCharacter, tol: float = 1e-10) -> WeilConstant:
    """gamma(q, psi) = product of the rank-1 constants of the diagonal
    coefficients (gamma is a homomorphism under direct sum)."""
    if q.place != psi.place:
        raise ValueError("form and character live at different places")
    value = 1 + 0j
    level = None
    for a in q.coeffs:
        g = gamma_rank1(a, psi, tol)
        value *= g.value
        if g.stabilized_at is not None:
            level = max(level or 1, g.stabilized_at)
    k, dev = nearest_eighth_root(value)
    return WeilConstant(value, k, dev, level)


@dataclass(frozen=True)
class BallIndicator:
    """Indicator of a product of p-adic balls prod (c_i + p^level Z_p)."""

    center: tuple[Fraction, ...]
    level: int

    @staticmethod
    def make(center, level: int) -> "BallIndicator":
        return BallIndicator(tuple(Fraction(c) for c in center), int(level))


@dataclass(frozen=True)
class WeilEquationReport:
    lhs: complex
    rhs: complex
    residual: float
    gamma: WeilConstant

    def as_dict(self) -> dict:
        return {
            "lhs": [self.lhs.real, self.lhs.imag],
            "rhs": [self.rhs.real, self.rhs.imag],
            "residual": self.residual,
            "gamma": self.gamma.as_dict(),
        }


def _coordinate_integral(coeffs: list[Fraction], p: int) -> complex:
    """integral over Z_p of psi_+(f(z)) dz for rational f, exact."""
    e = max([0] + [-valuation(c, p) for c in coeffs if c])
    value, _ = padic_poly_sum(coeffs, p, e)
    return value


def verify_weil_equation(
    q: QuadraticForm, ball: BallIndicator, psi: AdditiveCharacter
) -> WeilEquationReport:
    """Test the defining functional equation of gamma against the
    indicator of a ball, both sides evaluated as exact character sums.

    With phi the indicator of prod(c_i + p^k Z_p):
      LHS = integral phi(x) psi(q(x)) dx
      RHS = gamma(q) |det q|^(-1/2) * integral FT(phi)(y) psi(-q~(y)) dy
    and FT(phi) factors as prod p^(-k) psi(c_i y_i) on prod p^(-k) Z_p.
    Diagonal forms split both sides into one-dimensional sums.
    """
    if psi.place.is_real or q.place != psi.place:
        raise ValueError("p-adic form and matching character required")
    if len(ball.center) != q.rank:
        raise ValueError("ball dimension must match the rank")
    p = q.place.p
    k = ball.level
    sgn = Fraction(psi.sign)

    lhs = 1 + 0j
    for a, c in zip(q.coeffs, ball.center):
        # x = c + p^k z:  a x^2 = a c^2 + 2 a c p^k z + a p^2k z^2
        poly = [sgn * a * c * c, sgn * 2 * a * c * Fraction(p) ** k, sgn * a * Fraction(p) ** (2 * k)]
        lhs *= Fraction(p) ** (-k) * _coordinate_integral(poly, p)

    g = gamma_form(q, psi)
    rhs = g.value * polarized_det_abs_rsqrt(q)
    for a, c in zip(q.coeffs, ball.center):
        # y = p^-k w:  -y^2/(4a) + c y pulled back to w in Z_p
        poly = [
            Fraction(0),
            sgn * c * Fraction(p) ** (-k),
            -sgn * Fraction(p) ** (-2 * k) / (4 * a),
        ]
        rhs *= _coordinate_integral(poly, p)  # the p^-k and p^k volume factors cancel

    return WeilEquationReport(lhs, rhs, abs(lhs - rhs), g)


@dataclass(frozen=True)
class GammaEpsilonReport:
    gamma_ratio: complex
    epsilon: int
    ok: bool

    def as_dict(self) -> dict:
        return {
            "gamma_ratio": [self.gamma_ratio.real, self.gamma_ratio.imag],
            "epsilon": self.epsilon,
            "ok": self.ok,
        }


def gamma_matches_epsilon(
    q: QuadraticForm, r: QuadraticForm, psi: AdditiveCharacter, tol: float = 1e-6
) -> GammaEpsilonReport:
    """Check gamma(q) conj(gamma(r)) = relative Hasse-Witt invariant.

    Requires the Witt-class difference to sit in the square of the
    fundamental ideal (filtration level >= 2); the comparison value is
    the level-2 class reported by witt_filtration_level, which equals
    hasse(q)*hasse(r) whenever the ranks agree.
    """
    level, w2 = witt_filtration_level(q, r)
    if level < 2:
        raise ValueError(
            f"pair sits at filtration level {level}; the identity needs level >= 2"
        )
    ratio = gamma_form(q, psi).value * gamma_form(r, psi).value.conjugate()
    return GammaEpsilonReport(ratio, w2, abs(ratio - w2) < tol)

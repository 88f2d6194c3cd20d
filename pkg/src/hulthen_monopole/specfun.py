"""Complex log-gamma, Pochhammer symbols and the Gauss hypergeometric function.

Only what the analytic solution needs: principal-branch log Gamma (and its
imaginary part), the rising factorial, the 2F1 power series with complex
parameters, and the connection formula that re-expands 2F1 about y = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

MAX_TERMS = 10_000
SERIES_RTOL = 1e-16

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
# B_{2k} / (2k (2k-1)), k = 1..10
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
)
_STIRLING_SHIFT = 12.0


class GammaPoleError(ValueError):
    """Gamma evaluated at a non-positive integer."""


class DegenerateParameterError(ValueError):
    """c - a - b is an integer; the two-term connection formula is singular."""


class HypergeometricConvergenceError(ArithmeticError):
    """The 2F1 series did not converge within the term cap."""

    def __init__(self, message: str, partial_value: complex, terms: int):
        super().__init__(message)
        self.partial_value = partial_value
        self.terms = terms


@dataclass(frozen=True)
class F21Params:
    a: complex
    b: complex
    c: complex

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if is_nonpositive_integer(self.c):
            raise GammaPoleError(f"c = {self.c!r} is a non-positive integer; 2F1 undefined")


def _as_complex(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite argument {z!r}")
    return z


def is_nonpositive_integer(z) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _nonpositive_int_index(z) -> int | None:
    """Return m if z == -m for an integer m >= 0, else None."""
    if is_nonpositive_integer(z):
        return int(-complex(z).real)
    return None


def log_gamma(z) -> complex:
    """Principal branch of log Gamma(z).

    The argument is shifted to Re z >= 12 with the upward recurrence and the
    Stirling series (ten Bernoulli terms) is applied there.  Summing principal
    logarithms of the shifted factors reproduces the branch that is analytic
    off the negative real axis, so the imaginary part varies continuously
    along paths that avoid the poles.
    """
    z = _as_complex(z)
    if is_nonpositive_integer(z):
        raise GammaPoleError(f"Gamma has a pole at z = {z.real:g}")
    shift = max(0, math.ceil(_STIRLING_SHIFT - z.real))
    correction = 0j
    for j in range(shift):
        correction += cmath.log(z + j)
    w = z + shift
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0j
    power = inv
    for coeff in _STIRLING:
        series += coeff * power
        power *= inv2
    return (w - 0.5) * cmath.log(w) - w + _HALF_LOG_2PI + series - correction


def arg_gamma(z) -> float:
    """Imaginary part of :func:`log_gamma`: a continuous argument of Gamma(z)."""
    return log_gamma(z).imag


def gamma(z) -> complex:
    return cmath.exp(log_gamma(z))


def pochhammer(x, s: int) -> complex:
    """Rising factorial (x)_s = x (x+1) ... (x+s-1); (x)_0 = 1."""
    if s < 0:
        raise ValueError("s must be non-negative")
    x = _as_complex(x)
    out = 1 + 0j
    for j in range(s):
        out *= x + j
    return out


def _series(a: complex, b: complex, c: complex, z: complex, max_terms: int) -> tuple[complex, int, float]:
    """Sum the 2F1 power series; returns (value, number of terms used, largest |term|).

    The largest term over |value| measures the cancellation suffered.
    """
    total = 1 + 0j
    term = 1 + 0j
    biggest = 1.0
    hump = max(abs(a), abs(b), abs(c))
    for s in range(max_terms):
        term *= (a + s) * (b + s) / ((c + s) * (s + 1)) * z
        total += term
        biggest = max(biggest, abs(term))
        if term == 0:
            return total, s + 1, biggest
        if s > hump and abs(term) <= SERIES_RTOL * abs(total):
            return total, s + 1, biggest
    raise HypergeometricConvergenceError(
        f"2F1 series not converged after {max_terms} terms (z={z})", total, max_terms
    )


def _polynomial(a: complex, b: complex, c: complex, y: float, degree: int) -> complex:
    total = 1 + 0j
    term = 1 + 0j
    for s in range(degree):
        term *= (a + s) * (b + s) / ((c + s) * (s + 1)) * y
        total += term
    return total


def _params(p, b=None, c=None) -> F21Params:
    if isinstance(p, F21Params):
        return p
    return F21Params(complex(p), complex(b), complex(c))


def hyp2f1(
    a, b=None, c=None, y: float = 0.0, *, max_terms: int = MAX_TERMS, one_minus_y: float | None = None
) -> complex:
    """Gauss hypergeometric function 2F1(a, b; c; y) for real 0 <= y < 1.

    Accepts either ``hyp2f1(a, b, c, y)`` or ``hyp2f1(F21Params(...), y=...)``.
    Terminating cases (a or b a non-positive integer) are summed exactly as
    polynomials for any y in [0, 1].  Otherwise the power series is used for
    y <= 0.5 and the connection formula about y = 1 beyond that; when c - a - b
    is an integer the series is summed directly up to ``max_terms``.  If the
    chosen representation loses more than ~1e-12 relative accuracy to
    cancellation (large |a|, |b|), the other one is tried and the better
    estimate wins.

    ``one_minus_y`` supplies 1 - y exactly when the caller knows it (for
    y = 1 - exp(-t) it is exp(-t)); ``y`` is then ignored.  Near y = 1 this
    avoids the relative error of forming 1 - y from a rounded y.

    Raises
    ------
    HypergeometricConvergenceError
        The series did not settle within ``max_terms`` terms.
    """
    p = _params(a, b, c)
    x = None if one_minus_y is None else float(one_minus_y)
    y = float(y) if x is None else 1.0 - x
    for top in (p.a, p.b):
        m = _nonpositive_int_index(top)
        if m is not None:
            if not 0.0 <= y <= 1.0:
                raise ValueError(f"y must lie in [0, 1], got {y}")
            return _polynomial(p.a, p.b, p.c, y, m)
    if not (0.0 <= y < 1.0 if x is None else 0.0 < x <= 1.0):
        raise ValueError(f"y must lie in [0, 1), got y = {y}, 1 - y = {x}")
    s = p.c - p.a - p.b
    if s.imag == 0.0 and s.real == math.floor(s.real):
        return _series(p.a, p.b, p.c, y, max_terms)[0]
    first, second = (_direct, _continued) if y <= 0.5 else (_continued, _direct)
    value, err = first(p, y, max_terms, x)
    if err > _FALLBACK_RTOL:
        try:
            other, other_err = second(p, y, max_terms, x)
        except HypergeometricConvergenceError:
            return value
        if other_err < err:
            return other
    return value


_EPS = 2.220446049250313e-16
_FALLBACK_RTOL = 1e-12


def _direct(p: F21Params, y: float, max_terms: int, x: float | None = None) -> tuple[complex, float]:
    value, terms, biggest = _series(p.a, p.b, p.c, y, max_terms)
    return value, _EPS * biggest * math.sqrt(terms) / max(abs(value), 1e-300)


def _continued(p: F21Params, y: float, max_terms: int, x: float | None = None) -> tuple[complex, float]:
    return _continued_with_error(p, y, max_terms, x)


def _log_rgamma_product(*args) -> complex | None:
    """log(1 / prod Gamma(args)); None when any argument is a pole (product of 1/Gamma vanishes)."""
    total = 0j
    for z in args:
        if is_nonpositive_integer(z):
            return None
        total -= log_gamma(z)
    return total


def hyp2f1_continued(a, b=None, c=None, y: float = 0.0, *, max_terms: int = MAX_TERMS) -> complex:
    """2F1 via its two-term expansion in powers of (1 - y).

    2F1(a,b;c;y) = G1 2F1(a, b; a+b-c+1; 1-y) + (1-y)^(c-a-b) G2 2F1(c-a, c-b; c-a-b+1; 1-y)

    with G1 = Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b)) and
    G2 = Gamma(c)Gamma(a+b-c)/(Gamma(a)Gamma(b)).  Gamma ratios are formed in
    log space.  At y = 1 the second term is dropped, which requires
    Re(c - a - b) > 0 (Gauss summation).
    """
    return _continued_with_error(_params(a, b, c), y, max_terms)[0]


def _continued_with_error(
    p: F21Params, y: float, max_terms: int, x: float | None = None
) -> tuple[complex, float]:
    """Connection-formula value and an estimate of its relative rounding error (``x`` = exact 1 - y)."""
    y = float(y)
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"y must lie in [0, 1], got {y}")
    s = p.c - p.a - p.b
    if s.imag == 0.0 and s.real == math.floor(s.real):
        raise DegenerateParameterError(f"c - a - b = {s.real:g} is an integer")
    x = 1.0 - y if x is None else x
    log_gc = log_gamma(p.c)

    first = 0j
    err = 0.0
    lr = _log_rgamma_product(p.c - p.a, p.c - p.b)
    if lr is not None:
        g1 = cmath.exp(log_gc + log_gamma(s) + lr)
        if x > 0:
            f, terms, biggest = _series(p.a, p.b, 1 - s, x, max_terms)
            first = g1 * f
            err += abs(g1) * biggest * math.sqrt(terms)
        else:
            first = g1
            err += abs(g1)

    if x == 0.0:
        if s.real <= 0:
            raise ValueError("2F1 diverges at y = 1 unless Re(c - a - b) > 0")
        return first, _EPS * err / max(abs(first), 1e-300)

    second = 0j
    lr = _log_rgamma_product(p.a, p.b)
    if lr is not None:
        g2 = cmath.exp(log_gc + log_gamma(-s) + lr + s * math.log(x))
        f, terms, biggest = _series(p.c - p.a, p.c - p.b, 1 + s, x, max_terms)
        second = g2 * f
        err += abs(g2) * biggest * math.sqrt(terms)
    total = first + second
    # Gamma ratios carry a few ulps times the size of their log arguments
    err += (abs(first) + abs(second)) * (abs(log_gc) + 1.0)
    return total, _EPS * err / max(abs(total), 1e-300)


def hyp2f1_derivatives(a, b, c, y: float) -> tuple[complex, complex, complex]:
    """Return (F, dF/dy, d2F/dy2) using d/dy 2F1(a,b;c;y) = (ab/c) 2F1(a+1,b+1;c+1;y)."""
    a, b, c = complex(a), complex(b), complex(c)
    f0 = hyp2f1(a, b, c, y)
    f1 = a * b / c * hyp2f1(a + 1, b + 1, c + 1, y)
    f2 = a * (a + 1) * b * (b + 1) / (c * (c + 1)) * hyp2f1(a + 2, b + 2, c + 2, y)
    return f0, f1, f2

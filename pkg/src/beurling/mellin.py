"""Closed-form Mellin transforms M_{F_N}(s) = int_0^1 F_N(x) x^{s-1} dx.

For Re(s) > 0 the transform reduces to

    M(s) = (sum_k a_k theta_k) / (s - 1) + (1/s) (1 - zeta(s) * P(s)),

with P(s) = sum_k a_k theta_k^s the power sum. Admissible specs drop the
pole term identically (its numerator is the exact rational 0, not a small
float), so M extends across s = 1 apart from the zeta pole itself; we keep
the exclusion disk |s - 1| <= 1e-6 rather than implement the limit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import ConstraintError, DomainError
from .numerics import (
    _MP_LOCK,
    PrecisionComplex,
    PrecisionReal,
    bits_for_tol,
    zeta_complex,
    zeta_even,
)

_PROVENANCES = ("closed_form", "quadrature", "reconstructed")
_POLE_EXCLUSION = 1e-6


@dataclass(frozen=True)
class MellinValue:
    """A value of M_{F_N}(s) together with how it was obtained."""

    s: PrecisionComplex
    value: PrecisionComplex
    provenance: str
    error_bound: PrecisionReal

    def __post_init__(self):
        if self.provenance not in _PROVENANCES:
            raise ValueError(f"provenance must be one of {_PROVENANCES}")
        if float(self.error_bound) < 0:
            raise ValueError("error_bound must be >= 0")


def _as_complex(s) -> complex:
    if isinstance(s, PrecisionComplex):
        return complex(s)
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("s must be finite")
    return z


def power_sum_exact(spec, n: int) -> tuple[Fraction, Fraction]:
    """Exact rational P(n) = sum_k a_k theta_k^n for integer n (re, im)."""
    re = Fraction(0)
    im = Fraction(0)
    for t in spec.terms:
        w = t.theta**n
        re += t.a_re * w
        im += t.a_im * w
    return re, im


def power_sum(spec, s, tol: float = 1e-16) -> PrecisionComplex:
    """P(s) = sum_k a_k theta_k^s, theta^s = exp(s log theta) with real log.

    Integer s is evaluated in exact rational arithmetic and then rounded;
    otherwise each term is computed by mpmath at a precision comfortably
    below tol (the sum has N terms of magnitude <= max|a_k|, so roundoff
    is the only error source and sits far under the working ulp).
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    bits = bits_for_tol(tol) + 16
    z = _as_complex(s)
    if z.imag == 0 and float(z.real).is_integer():
        re, im = power_sum_exact(spec, int(z.real))
        with _MP_LOCK, mp.workprec(bits):
            val = mpmath.mpc(
                mpmath.mpf(re.numerator) / re.denominator,
                mpmath.mpf(im.numerator) / im.denominator,
            )
            return PrecisionComplex.from_mpc(val, bits)
    with _MP_LOCK, mp.workprec(bits):
        s_mpc = s.to_mpc() if isinstance(s, PrecisionComplex) else mpmath.mpc(z)
        acc = mpmath.mpc(0)
        for t in spec.terms:
            a = mpmath.mpc(
                mpmath.mpf(t.a_re.numerator) / t.a_re.denominator,
                mpmath.mpf(t.a_im.numerator) / t.a_im.denominator,
            )
            th = mpmath.mpf(t.theta.numerator) / t.theta.denominator
            acc += a * mpmath.exp(s_mpc * mpmath.log(th))
        return PrecisionComplex.from_mpc(acc, bits)


def mellin_closed(spec, s, tol: float = 1e-12) -> MellinValue:
    """M(s) by the closed form; provenance "closed_form".

    Requires Re(s) > 0 and |s - 1| > 1e-6 (at s = 1 the zeta pole cancels
    against the power sum for admissible specs, but we exclude the disk
    instead of implementing the limit; non-admissible specs genuinely blow
    up there through the pole term).
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    z = _as_complex(s)
    if z.real <= 0:
        raise DomainError(f"mellin_closed requires Re(s) > 0, got Re(s) = {z.real}")
    if z == 0:
        raise DomainError("s = 0 is outside the domain")
    if math.hypot(z.real - 1.0, z.imag) <= _POLE_EXCLUSION:
        raise DomainError("|s - 1| <= 1e-6 is excluded (zeta/pole exclusion disk)")

    bits = bits_for_tol(tol) + 32
    # rough magnitudes to split the tolerance between zeta and the power sum
    p_rough = abs(complex(power_sum(spec, z, 1e-6)))
    zeta_rough = abs(complex(zeta_complex(z, 1e-6)))
    s_abs = abs(z)
    tol_p = tol * s_abs / (4.0 * (zeta_rough + 1.0))
    tol_z = tol * s_abs / (4.0 * (p_rough + 1.0))
    p_val = power_sum(spec, z, tol_p)
    z_val = zeta_complex(z, tol_z)

    res_re, res_im = spec.residual_exact
    with _MP_LOCK, mp.workprec(bits):
        s_mpc = mpmath.mpc(z)
        acc = (1 - z_val.to_mpc() * p_val.to_mpc()) / s_mpc
        if (res_re, res_im) != (0, 0):
            pole_num = mpmath.mpc(
                mpmath.mpf(res_re.numerator) / res_re.denominator,
                mpmath.mpf(res_im.numerator) / res_im.denominator,
            )
            acc += pole_num / (s_mpc - 1)
        value = PrecisionComplex.from_mpc(acc, bits)
        s_out = PrecisionComplex.from_mpc(s_mpc, bits)
    return MellinValue(
        s=s_out,
        value=value,
        provenance="closed_form",
        error_bound=PrecisionReal.from_float(tol, 64),
    )


def mellin_even(spec, l: int, tol: float = 1e-12) -> MellinValue:
    """M(2l) = (1/(2l)) (1 - zeta(2l) P(2l)) for admissible specs.

    P(2l) is exact rational; zeta(2l) comes from zeta_even. This is the
    input feed for the even-Mellin Fourier routes and for reconstruction.
    """
    if not isinstance(l, int) or l < 1:
        raise DomainError(f"l must be a positive integer, got {l!r}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    if not spec.admissible:
        raise ConstraintError(
            "mellin_even requires an admissible spec (sum a_k theta_k = 0); "
            f"constraint residual is {spec.constraint_residual:.3g}"
        )
    p_re, p_im = power_sum_exact(spec, 2 * l)
    extra = max(0, int(math.log2(1.0 + abs(float(p_re)) + abs(float(p_im)))) + 2)
    bits = bits_for_tol(tol) + 32 + extra
    zv = zeta_even(l, bits)
    with _MP_LOCK, mp.workprec(bits):
        p_mpc = mpmath.mpc(
            mpmath.mpf(p_re.numerator) / p_re.denominator,
            mpmath.mpf(p_im.numerator) / p_im.denominator,
        )
        val = (1 - zv.value * p_mpc) / (2 * l)
        value = PrecisionComplex.from_mpc(val, bits)
        s_out = PrecisionComplex.from_mpc(mpmath.mpc(2 * l), bits)
    # only rounding error remains: ~2^{extra+8} ulps at `bits` working bits
    return MellinValue(
        s=s_out,
        value=value,
        provenance="closed_form",
        error_bound=PrecisionReal.from_float(2.0 ** (extra + 8 - bits), 64),
    )


def mellin_even_bound(l: int, out_precision: int = 64) -> PrecisionReal:
    """(1 + zeta(2l)^2) / (2l): bounds |M(2l)| for admissible unit-fraction
    specs with |a_k| <= 1 and distinct denominators (caller checks the flags).
    """
    if not isinstance(l, int) or l < 1:
        raise DomainError(f"l must be a positive integer, got {l!r}")
    zv = zeta_even(l, out_precision + 16)
    with _MP_LOCK, mp.workprec(out_precision + 16):
        return PrecisionReal((1 + zv.value**2) / (2 * l), out_precision)

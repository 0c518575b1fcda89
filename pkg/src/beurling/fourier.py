"""Fourier sine coefficients c(N, n) = 2 int_0^1 F_N(x) sin(n pi x) dx.

Three independent routes:

* ``c_direct``            -- quadrature of the definition (the oracle).
* ``c_cosine_series``     -- the cosine telescoping series over j.
* ``c_even_mellin_*``     -- the even-Mellin series in M(2l), either cut at an
                             explicit L with its truncation certificate, or
                             summed to the limit.

Notation used throughout: A1 = (2 / n pi)(1 - cos n pi) and alpha_k = n pi
theta_k.

Tail bound for the cosine route (not from the source material; two-line
proof): by the mean value theorem cos(a/j) - cos(a/(j+1)) =
sin(xi) * a (1/j - 1/(j+1)) for some xi in (a/(j+1), a/j), and |sin xi| <=
xi <= a/j, so j |cos(a/j) - cos(a/(j+1))| <= a^2 / (j (j+1)); summing over
j > J gives a^2 / J. That 1/J rate cannot reach tight tolerances, so the
default path instead rewrites the telescoped series as
sum_j (cos(a/j) - 1) and evaluates the j > J tail analytically:
sum_{j>J} (cos(a/j) - 1) = sum_{m>=1} (-1)^m a^{2m}/(2m)! zeta(2m, J+1),
whose terms shrink by > 24x per step once J >= 2a (certified by twice the
first omitted term). The explicit-J form with the a^2/J certificate remains
available via the J argument.
"""
from __future__ import annotations

import csv
import io
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mp
from scipy.special import zeta as _hurwitz_f64

from . import _periodic
from .errors import ConstraintError, DomainError, HypothesisError, ToleranceNotMet
from .functions import BeurlingSpec, _eval_F_vec, _integrate_report
from .mellin import power_sum_exact
from .numerics import _MP_LOCK, PrecisionComplex, PrecisionReal, bits_for_tol, zeta_even

_METHODS = ("direct", "cosine_series", "even_mellin_exact_L", "even_mellin_limit")

_F64_EPS = float(np.finfo(np.float64).eps)

# zeta(2l) values at the highest precision requested so far, keyed by l
_ZETA_CACHE: dict[int, tuple] = {}
_ZETA_CACHE_LOCK = threading.Lock()


@dataclass(frozen=True)
class FourierCoefficient:
    """One coefficient c(N, n) with its route and truncation certificate."""

    n: int
    value: PrecisionComplex
    method: str
    truncation_order: int | None
    error_certificate: PrecisionReal

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if float(self.error_certificate) < 0:
            raise ValueError("error_certificate must be >= 0")


def _zeta_even_cached(l: int, bits: int):
    """mpf zeta(2l) at >= bits working precision (monotone-growing cache)."""
    with _ZETA_CACHE_LOCK:
        hit = _ZETA_CACHE.get(l)
        if hit is not None and hit[1] >= bits:
            return hit[0]
    val = zeta_even(l, bits).value
    with _ZETA_CACHE_LOCK:
        hit = _ZETA_CACHE.get(l)
        if hit is None or hit[1] < bits:
            _ZETA_CACHE[l] = (val, bits)
    return val


def _a1_mp(n: int):
    """A1 = (2/(n pi)) (1 - cos n pi) at current mpmath precision."""
    return mpmath.mpf(0) if n % 2 == 0 else 4 / (n * mpmath.pi)


def _route_c_bits(n: int, tol: float) -> int:
    """Working bits for the even-Mellin sums, whose terms peak near e^{n pi}."""
    return bits_for_tol(tol) + int(math.ceil(1.4427 * n * math.pi)) + 64


def _check_n(n) -> int:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return int(n)


def _require_even_mellin_hypotheses(spec: BeurlingSpec, who: str):
    if not spec.admissible:
        raise ConstraintError(
            f"{who} requires an admissible spec (sum a_k theta_k = 0); "
            f"residual {spec.constraint_residual:.3g}"
        )
    if not spec.unit_fraction:
        raise HypothesisError(f"{who} requires unit-fraction thetas (theta_k = 1/b_k)")
    if not spec.coeffs_le_1:
        raise HypothesisError(f"{who} requires |a_k| <= 1 for every term")


# ---------------------------------------------------------------------------
# Route A: direct quadrature (the oracle)
# ---------------------------------------------------------------------------


def c_direct(spec: BeurlingSpec, n, tol: float = 1e-10) -> FourierCoefficient:
    """c(N, n) = 2 int_0^1 F_N(x) sin(n pi x) dx; admissibility not required.

    Admissible exact-rational specs route through the u = 1/x periodic
    engine (exact cosine heads, Hurwitz-Taylor tails), reaching arbitrary
    tolerances; other specs use breakpoint-aware float64 quadrature with a
    quadratic small-x tail bound (|F sin| <= (1 + sum|a|) n pi x), whose
    reachable tolerance bottoms out near 5e-13.
    """
    n = _check_n(n)
    if tol <= 0:
        raise DomainError("tol must be positive")
    dec = spec.decomposition
    if spec.admissible and dec is not None:
        bits = bits_for_tol(tol) + 32
        consts, _beta = _periodic.f_piece_constants(spec, dec)
        pieces = [(lo, hi, (a_re + 1, a_im)) for lo, hi, (a_re, a_im) in consts]
        val, err = _periodic.sine_integral_mp(pieces, dec.period, n, bits)
        with _MP_LOCK, mp.workprec(bits):
            value = PrecisionComplex.from_mpc(2 * val, bits)
            cert = PrecisionReal(2 * err, 64)
        if float(cert) > tol:
            raise ToleranceNotMet(
                f"certified error {float(cert):.3g} exceeds tol {tol:.3g}"
            )
        if spec.is_real:
            value = PrecisionComplex(value.re, PrecisionReal.from_float(0.0, bits))
        return FourierCoefficient(n, value, "direct", None, cert)

    big_m = 1.0 + spec.sum_abs_a
    npi = n * math.pi
    # int_0^eps |F sin| <= big_m * npi * eps^2 / 2 <= tol/8  (overall factor 2)
    eps = math.sqrt(tol / (4.0 * big_m * npi))
    val, err, _ = _integrate_report(
        lambda x: _eval_F_vec(spec, x) * np.sin(npi * x),
        spec,
        None,
        tol / 2.0,
        bound_m=big_m,
        eps_override=eps,
        tail_bound_override=tol / 8.0,
        max_h=min(1.0 / 16.0, 1.0 / (2.0 * n)),
    )
    value = 2.0 * val
    cert = 2.0 * err
    if cert > tol:
        raise ToleranceNotMet(f"certified error {cert:.3g} exceeds tol {tol:.3g}")
    bits = bits_for_tol(tol)
    pv = PrecisionComplex.from_complex(value, bits)
    if spec.is_real:
        pv = PrecisionComplex(pv.re, PrecisionReal.from_float(0.0, bits))
    return FourierCoefficient(
        n, pv, "direct", None, PrecisionReal.from_float(cert, 64)
    )


# ---------------------------------------------------------------------------
# Route B: cosine telescoping series
# ---------------------------------------------------------------------------


def c_cosine_series(
    spec: BeurlingSpec, n, tol: float = 1e-10, J: int | None = None
) -> FourierCoefficient:
    """c(N, n) = A1 + (2/(n pi)) sum_k a_k sum_j j [cos(alpha_k/j) - cos(alpha_k/(j+1))].

    Requires admissibility (the telescoped form already cancelled the sine
    integral against the constraint).

    With J=None (default) the telescoped series is evaluated to its limit:
    heads sum_{j<=J_k} (cos(alpha_k/j) - 1) with J_k = max(64, 2 alpha_k),
    plus the analytic Hurwitz-zeta tail (see module docstring), certified by
    twice the first omitted term. With an explicit J, the literal partial sum
    through j = J is returned with the a^2/J mean-value-theorem certificate.
    """
    n = _check_n(n)
    if tol <= 0:
        raise DomainError("tol must be positive")
    if not spec.admissible:
        raise ConstraintError(
            "c_cosine_series requires an admissible spec; "
            f"residual {spec.constraint_residual:.3g}"
        )

    if J is not None:
        if not isinstance(J, int) or J < 1:
            raise DomainError("J must be a positive integer")
        j = np.arange(1, J + 1, dtype=np.float64)
        acc = 0.0 + 0.0j
        cert = 0.0
        for t in spec.terms:
            alpha = n * math.pi * float(t.theta)
            # cos(a/j) - cos(a/(j+1)) = -2 sin(mean) sin(half-diff), no cancellation
            mean = alpha * (2.0 * j + 1.0) / (2.0 * j * (j + 1.0))
            halfdiff = alpha / (2.0 * j * (j + 1.0))
            terms = j * (-2.0 * np.sin(mean) * np.sin(halfdiff))
            s_k = float(np.sum(terms))
            acc += t.a * s_k
            cert += abs(t.a) * (alpha * alpha / J + _F64_EPS * float(np.sum(np.abs(terms))))
        npi = n * math.pi
        a1 = 0.0 if n % 2 == 0 else 4.0 / npi
        value = a1 + (2.0 / npi) * acc
        cert = (2.0 / npi) * cert + 8.0 * _F64_EPS * (abs(value) + 1.0)
        bits = bits_for_tol(max(tol, 1e-15))
        pv = PrecisionComplex.from_complex(value, bits)
        if spec.is_real:
            pv = PrecisionComplex(pv.re, PrecisionReal.from_float(0.0, bits))
        return FourierCoefficient(
            n, pv, "cosine_series", J, PrecisionReal.from_float(cert, 64)
        )

    bits = bits_for_tol(tol) + 48
    with _MP_LOCK, mp.workprec(bits):
        npi = n * mpmath.pi
        acc = mpmath.mpc(0)
        cert = mpmath.mpf(0)
        absacc = mpmath.mpf(0)
        j_max = 0
        floor = mpmath.mpf(2) ** (-bits + 8)
        for t in spec.terms:
            theta = mpmath.mpf(t.theta.numerator) / t.theta.denominator
            alpha = npi * theta
            a_mag = abs(t.a)
            if a_mag == 0:
                continue
            Jk = max(64, int(math.ceil(2.0 * float(alpha))))
            j_max = max(j_max, Jk)
            head = mpmath.mpf(0)
            for j in range(1, Jk + 1):
                term = -2 * mpmath.sin(alpha / (2 * j)) ** 2
                head += term
                absacc += abs(term)
            # analytic tail over j > Jk (module docstring); ratio <= 1/24
            tail = mpmath.mpf(0)
            coef = alpha * alpha / 2  # alpha^{2m} / (2m)!
            m = 1
            while True:
                term = coef * mpmath.zeta(2 * m, Jk + 1)
                tail += -term if m % 2 else term
                absacc += abs(term)
                coef *= alpha * alpha / ((2 * m + 1) * (2 * m + 2))
                nxt = coef * mpmath.zeta(2 * m + 2, Jk + 1)
                if nxt < floor or m >= 200:
                    cert += a_mag * 2 * nxt
                    break
                m += 1
            am = mpmath.mpc(
                mpmath.mpf(t.a_re.numerator) / t.a_re.denominator,
                mpmath.mpf(t.a_im.numerator) / t.a_im.denominator,
            )
            acc += am * (head + tail)
        value_mp = _a1_mp(n) + (2 / npi) * acc
        cert_total = (2 / npi) * cert + (absacc + abs(value_mp) + 1) * mpmath.mpf(2) ** (
            8 - bits
        )
        value = PrecisionComplex.from_mpc(value_mp, bits)
        cert_out = PrecisionReal(cert_total, 64)
    if float(cert_out) > tol:
        raise ToleranceNotMet(
            f"certified error {float(cert_out):.3g} exceeds tol {tol:.3g}"
        )
    if spec.is_real:
        value = PrecisionComplex(value.re, PrecisionReal.from_float(0.0, bits))
    return FourierCoefficient(n, value, "cosine_series", j_max, cert_out)


# ---------------------------------------------------------------------------
# Routes C: even-Mellin series
# ---------------------------------------------------------------------------


def remainder_bound(spec: BeurlingSpec, n, L: int) -> PrecisionReal:
    """((n pi)^{L+1} / (L+1)!) zeta(L+1) sum_k theta_k^{L+1}.

    Bounds the unevaluated remainder of the even-Mellin exact-L form. Needs
    |a_k| <= 1 (HypothesisError otherwise); the theta-power form is the
    sharper one available when the thetas are known, below the generic
    zeta^2(L+1) variant for unit fractions with distinct denominators.
    """
    n = _check_n(n)
    if not isinstance(L, int) or L < 1:
        raise DomainError("L must be a positive integer")
    if not spec.coeffs_le_1:
        raise HypothesisError("remainder_bound requires |a_k| <= 1 for every term")
    theta_pow = Fraction(0)
    for t in spec.terms:
        theta_pow += t.theta ** (L + 1)
    if theta_pow == 0:
        return PrecisionReal.from_float(0.0, 64)
    with _MP_LOCK, mp.workprec(96):
        npi = n * mpmath.pi
        val = (
            mpmath.power(npi, L + 1)
            / mpmath.factorial(L + 1)
            * mpmath.zeta(L + 1)
            * (mpmath.mpf(theta_pow.numerator) / theta_pow.denominator)
        )
        return PrecisionReal(val, 64)


def _m2l_mp(spec: BeurlingSpec, l: int, bits: int):
    """M(2l) = (1 - zeta(2l) P(2l)) / (2l) as an mpc at current precision."""
    p_re, p_im = power_sum_exact(spec, 2 * l)
    zl = _zeta_even_cached(l, bits)
    p = mpmath.mpc(
        mpmath.mpf(p_re.numerator) / p_re.denominator,
        mpmath.mpf(p_im.numerator) / p_im.denominator,
    )
    return (1 - zl * p) / (2 * l)


def c_even_mellin_exact_L(
    spec: BeurlingSpec, n, L: int, tol: float = 1e-10
) -> FourierCoefficient:
    """Finite even-Mellin form, exact for every L:

        c = A1 + (2/(n pi)) sum_{l<=L} (-1)^l (n pi)^{2l} / (2l)!
               + 2 sum_{l<=L} (-1)^{l-1} (n pi)^{2l-1} / (2l-1)! M(2l)
               + (remainder, NOT computed).

    The returned certificate is remainder_bound(spec, n, L) plus summation
    roundoff. Terms grow to ~e^{n pi} before cancelling, so the working
    precision adds ceil(1.443 n pi) + 64 bits over the output precision.
    """
    n = _check_n(n)
    if not isinstance(L, int) or L < 1:
        raise DomainError("L must be a positive integer")
    if tol <= 0:
        raise DomainError("tol must be positive")
    _require_even_mellin_hypotheses(spec, "c_even_mellin_exact_L")
    bits = _route_c_bits(n, tol)
    rb = remainder_bound(spec, n, L)
    with _MP_LOCK, mp.workprec(bits):
        npi = n * mpmath.pi
        npi2 = npi * npi
        acc = mpmath.mpc(_a1_mp(n))
        absacc = abs(acc)
        p2 = mpmath.mpf(1)  # (n pi)^{2l} / (2l)!     (updated in loop)
        p3 = mpmath.mpf(0)  # (n pi)^{2l-1} / (2l-1)! (updated in loop)
        for l in range(1, L + 1):
            p2 *= npi2 / ((2 * l - 1) * (2 * l))
            p3 = npi if l == 1 else p3 * npi2 / ((2 * l - 1) * (2 * l - 2))
            m2l = _m2l_mp(spec, l, bits)
            t2 = (2 / npi) * p2
            t3 = 2 * p3 * m2l
            if l % 2 == 1:
                acc += -t2 + t3
            else:
                acc += t2 - t3
            absacc += abs(t2) + abs(t3)
        roundoff = (absacc + 1) * mpmath.mpf(2) ** (8 - bits)
        cert = PrecisionReal(
            mpmath.mpf(float(rb)) + roundoff, 64
        )
        value = PrecisionComplex.from_mpc(acc, bits)
    if spec.is_real:
        value = PrecisionComplex(value.re, PrecisionReal.from_float(0.0, bits))
    return FourierCoefficient(n, value, "even_mellin_exact_L", L, cert)


def _limit_L_for(n: int, tol: float, spec: BeurlingSpec) -> int:
    """Smallest L making both certificate pieces of the limit route <= tol/4."""
    npi = n * math.pi
    log_npi = math.log(npi)
    theta_pow_log = {}

    def log_rb(L: int) -> float:
        # log of (n pi)^{L+1}/(L+1)! * zeta(L+1) * sum theta^{L+1}
        if L not in theta_pow_log:
            s = sum(float(t.theta) ** (L + 1) for t in spec.terms)
            theta_pow_log[L] = math.log(s) if s > 0 else -math.inf
        return (
            (L + 1) * log_npi
            - math.lgamma(L + 2)
            + math.log(2.0)  # zeta(L+1) <= 2 for L >= 1
            + theta_pow_log[L]
        )

    def log_costail(L: int) -> float:
        # log of (2/(n pi)) (n pi)^{2L+2} / (2L+2)!
        return math.log(2.0) - log_npi + (2 * L + 2) * log_npi - math.lgamma(2 * L + 3)

    target = math.log(tol / 4.0)
    L = max(1, int(math.ceil(1.36 * npi / 2.0)))  # e*npi for the 2L+2 index
    while L < 200_000 and (log_rb(L) > target or log_costail(L) > target):
        L += 1 + L // 16
    while L > 1 and log_rb(L - 1) <= target and log_costail(L - 1) <= target:
        L -= 1
    if log_rb(L) > target or log_costail(L) > target:
        raise ToleranceNotMet(
            f"even-Mellin limit route cannot certify tol {tol:.3g} at n = {n}"
        )
    return L


def c_even_mellin_limit(spec: BeurlingSpec, n, tol: float = 1e-10) -> FourierCoefficient:
    """The limit form c(N, n) = 2 sum_{l>=1} (-1)^{l-1} (n pi)^{2l-1}/(2l-1)! M(2l).

    Truncation L is chosen so the remainder certificate <= tol/2 (its two
    parts: the exact-L remainder bound, and the first omitted term of the
    cancelling cosine pair A1 + sum (-1)^l (n pi)^{2l}/(2l)!, each <= tol/4)
    and additionally the next series term is <= tol/10.
    """
    n = _check_n(n)
    if tol <= 0:
        raise DomainError("tol must be positive")
    _require_even_mellin_hypotheses(spec, "c_even_mellin_limit")
    L = _limit_L_for(n, tol, spec)
    bits = _route_c_bits(n, tol)
    rb = float(remainder_bound(spec, n, L))
    with _MP_LOCK, mp.workprec(bits):
        npi = n * mpmath.pi
        npi2 = npi * npi
        acc = mpmath.mpc(0)
        absacc = mpmath.mpf(0)
        p3 = mpmath.mpf(0)
        l = 1
        while True:
            p3 = npi if l == 1 else p3 * npi2 / ((2 * l - 1) * (2 * l - 2))
            m2l = _m2l_mp(spec, l, bits)
            t3 = 2 * p3 * m2l
            acc += t3 if l % 2 == 1 else -t3
            absacc += abs(t3)
            if l >= L:
                # contract guard: extend while the next term is still > tol/10
                nxt_p3 = p3 * npi2 / ((2 * l + 1) * (2 * l))
                nxt = 2 * nxt_p3 * abs(_m2l_mp(spec, l + 1, bits))
                if nxt <= mpmath.mpf(tol) / 10 or l > L + 1000:
                    break
            l += 1
        L_used = l
        costail = (2 / npi) * mpmath.power(npi, 2 * L_used + 2) / mpmath.factorial(
            2 * L_used + 2
        )
        roundoff = (absacc + 1) * mpmath.mpf(2) ** (8 - bits)
        cert = PrecisionReal(mpmath.mpf(rb) + costail + roundoff, 64)
        value = PrecisionComplex.from_mpc(acc, bits)
    if float(cert) > tol:
        raise ToleranceNotMet(
            f"certified error {float(cert):.3g} exceeds tol {tol:.3g}"
        )
    if spec.is_real:
        value = PrecisionComplex(value.re, PrecisionReal.from_float(0.0, bits))
    return FourierCoefficient(n, value, "even_mellin_limit", L_used, cert)


# ---------------------------------------------------------------------------
# Telescoping partial sums
# ---------------------------------------------------------------------------


def telescope_partial(l: int, J: int, out_precision: int = 128) -> PrecisionReal:
    """sum_{j=1}^{J} j [j^{-2l} - (j+1)^{-2l}], via the closed partial form

        1 - (J+1)^{1-2l} + sum_{j=2}^{J+1} j^{-2l};

    increases to zeta(2l) as J grows.
    """
    if not isinstance(l, int) or l < 1:
        raise DomainError("l must be a positive integer")
    if not isinstance(J, int) or J < 1:
        raise DomainError("J must be a positive integer")
    with _MP_LOCK, mp.workprec(out_precision + 32):
        acc = mpmath.mpf(1) - mpmath.power(J + 1, 1 - 2 * l)
        acc += mpmath.nsum(lambda j: mpmath.power(j, -2 * l), [2, J + 1], method="direct")
        return PrecisionReal(acc, out_precision)


# ---------------------------------------------------------------------------
# Batches
# ---------------------------------------------------------------------------


def c_batch(
    spec: BeurlingSpec,
    ns,
    method: str = "direct",
    tol: float = 1e-10,
    L: int | None = None,
    threads: int = 1,
) -> list[FourierCoefficient]:
    """Coefficients for each n in ns (any iterable of ints), ordered as given.

    Rows are independent; with threads > 1 they are computed concurrently
    and returned in input order, so the output is identical for any thread
    count.
    """
    ns = [int(n) for n in ns]

    def one(n: int) -> FourierCoefficient:
        if method == "direct":
            return c_direct(spec, n, tol)
        if method == "cosine_series":
            return c_cosine_series(spec, n, tol)
        if method == "even_mellin_exact_L":
            if L is None:
                raise DomainError("method even_mellin_exact_L needs L")
            return c_even_mellin_exact_L(spec, n, L, tol)
        if method == "even_mellin_limit":
            return c_even_mellin_limit(spec, n, tol)
        raise DomainError(f"unknown method {method!r}")

    if threads <= 1 or len(ns) <= 1:
        return [one(n) for n in ns]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(one, ns))


def batch_cosine_f64(spec: BeurlingSpec, n_max: int):
    """Route-B coefficients for n = 1..n_max, vectorized in float64.

    Returns (c, cert): complex128 and float64 arrays of length n_max, with
    per-coefficient certificates (analytic-tail truncation + roundoff).
    Requires an admissible spec. Used for Parseval-scale batches where
    per-coefficient mpmath calls would be too slow.
    """
    if not spec.admissible:
        raise ConstraintError("batch route B requires an admissible spec")
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    n = np.arange(1, n_max + 1, dtype=np.float64)
    npi = n * math.pi
    a1 = np.where(np.arange(1, n_max + 1) % 2 == 1, 4.0 / npi, 0.0)
    c = a1.astype(np.complex128)
    cert = 8.0 * _F64_EPS * np.abs(c)
    for t in spec.terms:
        theta = float(t.theta)
        if t.a == 0:
            continue
        alpha = npi * theta  # per-n
        J = np.maximum(64, np.ceil(2.0 * alpha)).astype(np.int64)
        head = np.zeros(n_max, dtype=np.float64)
        absacc = np.zeros(n_max, dtype=np.float64)
        rowblk, jblk = 256, 1 << 13
        for i0 in range(0, n_max, rowblk):
            i1 = min(i0 + rowblk, n_max)
            al = alpha[i0:i1, None]
            Jb = J[i0:i1, None]
            jmax_b = int(J[i0:i1].max())
            for j0 in range(1, jmax_b + 1, jblk):
                j = np.arange(j0, min(j0 + jblk, jmax_b + 1), dtype=np.float64)[None, :]
                terms = -2.0 * np.sin(al / (2.0 * j)) ** 2
                terms[j > Jb] = 0.0
                head[i0:i1] += np.sum(terms, axis=1)
                absacc[i0:i1] += np.sum(np.abs(terms), axis=1)
        tail = np.zeros(n_max, dtype=np.float64)
        coef = alpha * alpha / 2.0
        q = (J + 1).astype(np.float64)
        trunc = np.zeros(n_max, dtype=np.float64)
        m = 1
        while True:
            term = coef * _hurwitz_f64(2 * m, q)
            tail += -term if m % 2 else term
            absacc += np.abs(term)
            coef = coef * alpha * alpha / ((2 * m + 1) * (2 * m + 2))
            trunc = coef * _hurwitz_f64(2 * m + 2, q)
            if float(trunc.max()) < 1e-19 or m >= 64:
                break
            m += 1
        contrib = (head + tail) * (2.0 / npi)
        c += t.a * contrib
        cert += abs(t.a) * (2.0 / npi) * (2.0 * trunc + 4.0 * _F64_EPS * absacc)
    return c, cert


def coefficients_csv(coeffs: list[FourierCoefficient]) -> str:
    """CSV with columns n, re(c), im(c), method, L_or_J, certificate."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "re(c)", "im(c)", "method", "L_or_J", "certificate"])
    for fc in coeffs:
        w.writerow(
            [
                fc.n,
                format(float(fc.value.re), ".17g"),
                format(float(fc.value.im), ".17g"),
                fc.method,
                "" if fc.truncation_order is None else fc.truncation_order,
                format(float(fc.error_certificate), ".17g"),
            ]
        )
    return buf.getvalue()

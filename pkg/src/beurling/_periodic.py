"""Certified integrals of Beurling data on the u = 1/x side.

Substituting u = 1/x turns every integral this package needs into

    int_1^inf  P(u) * u^{-r} du

where P(u) is built from rho(theta_k u) terms and is therefore periodic with
integer period B = lcm of the theta denominators, piecewise polynomial of
degree <= 2 between consecutive points where some theta_k u is an integer.

The head [1, U] (U a multiple of B) is integrated exactly piece by piece.
The infinite tail collapses, by periodicity, to one period weighted by a
Hurwitz zeta kernel:

    int_U^inf P(u) u^{-r} du = sum_pieces int p_i(w) B^{-r} zeta(r, (U+w)/B) dw,

a smooth one-period integral done by Gauss-Legendre at two orders (their
difference is the certificate). No cutoff-epsilon tail bound is ever needed,
which is what makes small sigma and tight tolerances reachable at all.

Two backends: float64/numpy + scipy's real Hurwitz zeta for bulk work, and
mpmath for complex exponents or sub-1e-12 tolerances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mp
from numpy.polynomial.legendre import leggauss
from scipy.special import zeta as _hurwitz_f64

from .errors import DomainError
from .numerics import _MP_LOCK

_F64_EPS = float(np.finfo(np.float64).eps)

PERIOD_CAP = 100_000
PIECES_CAP = 400_000


@dataclass(frozen=True)
class PeriodicDecomposition:
    """One period [0, B] of the breakpoint structure of u -> (theta_k u mod 1)."""

    period: int
    bounds: tuple[Fraction, ...]
    floors: tuple[tuple[int, ...], ...]  # per piece, floor(theta_k * u) for u in the piece

    @property
    def npieces(self) -> int:
        return len(self.floors)


def decompose(spec) -> PeriodicDecomposition | None:
    """Exact one-period piece structure, or None when the period is too large.

    theta_k = p/q in lowest terms makes rho(theta_k u) periodic with period
    q; the joint period is lcm of the q's. Floats with full 53-bit
    denominators blow past PERIOD_CAP and get None (callers fall back to
    x-space quadrature).
    """
    B = 1
    for t in spec.terms:
        q = t.theta.denominator
        B = B // math.gcd(B, q) * q
        if B > PERIOD_CAP:
            return None
    est_pieces = sum(int(B * t.theta) for t in spec.terms) + 2
    if est_pieces > PIECES_CAP:
        return None
    pts = {Fraction(0), Fraction(B)}
    for t in spec.terms:
        step = Fraction(t.theta.denominator, t.theta.numerator)
        u = step
        while u < B:
            pts.add(u)
            u += step
    bounds = tuple(sorted(pts))
    floors = []
    for i in range(len(bounds) - 1):
        mid = (bounds[i] + bounds[i + 1]) / 2
        floors.append(tuple(int(t.theta * mid) for t in spec.terms))
    return PeriodicDecomposition(B, bounds, tuple(floors))


# ---------------------------------------------------------------------------
# Piece polynomial builders (coefficients in the period coordinate w)
# ---------------------------------------------------------------------------


def f_piece_constants(spec, dec: PeriodicDecomposition):
    """Pieces of f(1/u) = sum a_k rho(theta_k u) as (lo, hi, alpha, beta):
    f = alpha + beta*w on the piece, beta = sum a_k theta_k shared by all."""
    beta_re = sum((t.a_re * t.theta for t in spec.terms), Fraction(0))
    beta_im = sum((t.a_im * t.theta for t in spec.terms), Fraction(0))
    out = []
    for i in range(dec.npieces):
        ms = dec.floors[i]
        a_re = -sum((t.a_re * m for t, m in zip(spec.terms, ms)), Fraction(0))
        a_im = -sum((t.a_im * m for t, m in zip(spec.terms, ms)), Fraction(0))
        out.append((dec.bounds[i], dec.bounds[i + 1], (a_re, a_im)))
    return out, (beta_re, beta_im)


def f_linear_pieces(spec, dec: PeriodicDecomposition):
    """F(1/u) = 1 + f(1/u) as degree-1 pieces [(lo, hi, c0, c1)] (complex Fractions)."""
    consts, beta = f_piece_constants(spec, dec)
    return [
        (lo, hi, (a_re + 1, a_im), beta)
        for lo, hi, (a_re, a_im) in consts
    ]


def f_abs2_pieces(spec, dec: PeriodicDecomposition):
    """|F(1/u)|^2 as degree-2 pieces [(lo, hi, (c0, c1, c2))], real Fractions."""
    out = []
    for lo, hi, (c0re, c0im), (b_re, b_im) in f_linear_pieces(spec, dec):
        c0 = c0re * c0re + c0im * c0im
        c1 = 2 * (c0re * b_re + c0im * b_im)
        c2 = b_re * b_re + b_im * b_im
        out.append((lo, hi, (c0, c1, c2)))
    return out


def rho_pair_pieces(theta_j: Fraction, theta_k: Fraction):
    """Pieces of rho(theta_j u) rho(theta_k u) over one joint period.

    Returns (B, [(lo, hi, (c0, c1, c2))]) with exact Fraction coefficients,
    or None when the joint period exceeds the cap.
    """
    qj, qk = theta_j.denominator, theta_k.denominator
    B = qj // math.gcd(qj, qk) * qk
    if B > PERIOD_CAP:
        return None
    pts = {Fraction(0), Fraction(B)}
    for th in (theta_j, theta_k):
        step = Fraction(th.denominator, th.numerator)
        u = step
        while u < B:
            pts.add(u)
            u += step
    bounds = sorted(pts)
    pieces = []
    for i in range(len(bounds) - 1):
        lo, hi = bounds[i], bounds[i + 1]
        mid = (lo + hi) / 2
        mj = int(theta_j * mid)
        mk = int(theta_k * mid)
        c0 = Fraction(mj * mk)
        c1 = -(mj * theta_k + mk * theta_j)
        c2 = theta_j * theta_k
        pieces.append((lo, hi, (c0, c1, c2)))
    return B, pieces


def rho_single_pieces(theta: Fraction):
    """Pieces of rho(theta u) over one period: (B, [(lo, hi, (c0, c1, 0))])."""
    B = theta.denominator
    step = Fraction(theta.denominator, theta.numerator)
    pts = {Fraction(0), Fraction(B)}
    u = step
    while u < B:
        pts.add(u)
        u += step
    bounds = sorted(pts)
    pieces = []
    for i in range(len(bounds) - 1):
        mid = (bounds[i] + bounds[i + 1]) / 2
        m = int(theta * mid)
        pieces.append((bounds[i], bounds[i + 1], (Fraction(-m), theta, Fraction(0))))
    return B, pieces


# ---------------------------------------------------------------------------
# float64 backend
# ---------------------------------------------------------------------------

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(order: int):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = leggauss(order)
    return _GL_CACHE[order]


def _phi_f64(u: np.ndarray, m: float) -> np.ndarray:
    """Antiderivative of u^m (log branch at m = -1)."""
    if abs(m + 1.0) < 1e-14:
        return np.log(u)
    return u ** (m + 1.0) / (m + 1.0)


def _choose_U(B: int, minimum: int = 64) -> int:
    return B * max(2, -(-minimum // B))


def u_integral_f64(pieces, B: int, r: float, U_min: int = 64):
    """int_1^inf P(u) u^{-r} du for real r > 1, P from degree-2 period pieces.

    pieces: [(lo, hi, (c0, c1, c2))] in period coordinates, floats or Fractions.
    Returns (value, err_bound).
    """
    if r <= 1.0:
        raise DomainError("u-integral needs r > 1 for convergence")
    U = _choose_U(B, U_min)
    nper = U // B
    lo_w = np.array([float(p[0]) for p in pieces])
    hi_w = np.array([float(p[1]) for p in pieces])
    c0 = np.array([float(p[2][0]) for p in pieces])
    c1 = np.array([float(p[2][1]) for p in pieces])
    c2 = np.array([float(p[2][2]) for p in pieces])

    offs = (np.arange(nper) * B).astype(float)[:, None]
    lo_u = np.maximum(lo_w[None, :] + offs, 1.0)
    hi_u = np.maximum(hi_w[None, :] + offs, 1.0)
    # expand p(w) = p(u - off) into powers of u
    k0 = c0[None, :] - c1[None, :] * offs + c2[None, :] * offs**2
    k1 = c1[None, :] - 2.0 * c2[None, :] * offs
    k2 = np.broadcast_to(c2[None, :], k0.shape)
    head = 0.0
    absacc = 0.0
    for k, mexp in ((k0, -r), (k1, 1.0 - r), (k2, 2.0 - r)):
        if not np.any(k):
            continue
        dphi = _phi_f64(hi_u, mexp) - _phi_f64(lo_u, mexp)
        head += float(np.sum(k * dphi))
        absacc += float(np.sum(np.abs(k * dphi)))

    def tail_at(order: int) -> float:
        x, wts = _gl(order)
        acc = 0.0
        for lo, hi, (a0, a1, a2) in pieces:
            lo_f, hi_f = float(lo), float(hi)
            half = 0.5 * (hi_f - lo_f)
            midp = 0.5 * (hi_f + lo_f)
            wn = midp + half * x
            pv = float(a0) + float(a1) * wn + float(a2) * wn * wn
            kern = _hurwitz_f64(r, (U + wn) / B) * B ** (-r)
            acc += half * float(np.sum(wts * pv * kern))
        return acc

    t_lo = tail_at(24)
    t_hi = tail_at(32)
    err = abs(t_hi - t_lo) + 8.0 * _F64_EPS * (absacc + abs(t_hi))
    return head + t_hi, err


# ---------------------------------------------------------------------------
# mpmath backend
# ---------------------------------------------------------------------------


def u_integral_mp(pieces, B: int, r, prec_bits: int, U_min: int = 64):
    """mpmath version of u_integral_f64; r may be complex (Re r > 1).

    pieces carry exact Fraction bounds/coefficients; coefficients may be
    (re, im) Fraction pairs for complex integrands.
    Returns (mpc value, mpf err_bound).
    """

    def _to_mp(c):
        if isinstance(c, tuple):
            return mpmath.mpc(mpmath.mpf(c[0].numerator) / c[0].denominator,
                              mpmath.mpf(c[1].numerator) / c[1].denominator)
        if isinstance(c, Fraction):
            return mpmath.mpf(c.numerator) / c.denominator
        return mpmath.mpf(c)

    with _MP_LOCK, mp.workprec(prec_bits):
        r_mp = mpmath.mpc(r)
        if mpmath.re(r_mp) <= 1:
            raise DomainError("u-integral needs Re(r) > 1 for convergence")
        if mpmath.im(r_mp) == 0:
            r_mp = mpmath.mpf(mpmath.re(r_mp))
        U = _choose_U(B, U_min)
        nper = U // B

        def phi(u, mexp):
            if mexp == -1:
                return mpmath.log(u)
            return mpmath.power(u, mexp + 1) / (mexp + 1)

        head = mpmath.mpc(0)
        absacc = mpmath.mpf(0)
        for q in range(nper):
            off = q * B
            for lo, hi, coeffs in pieces:
                lo_u = max(Fraction(off) + lo, Fraction(1))
                hi_u = Fraction(off) + hi
                if hi_u <= lo_u:
                    continue
                cs = [_to_mp(c) for c in coeffs]
                while len(cs) < 3:
                    cs.append(mpmath.mpf(0))
                c0, c1, c2 = cs
                k0 = c0 - c1 * off + c2 * off * off
                k1 = c1 - 2 * c2 * off
                k2 = c2
                lo_m = mpmath.mpf(lo_u.numerator) / lo_u.denominator
                hi_m = mpmath.mpf(hi_u.numerator) / hi_u.denominator
                for k, mexp in ((k0, -r_mp), (k1, 1 - r_mp), (k2, 2 - r_mp)):
                    if k == 0:
                        continue
                    contrib = k * (phi(hi_m, mexp) - phi(lo_m, mexp))
                    head += contrib
                    absacc += abs(contrib)

        tail = mpmath.mpc(0)
        tail_err = mpmath.mpf(0)
        for lo, hi, coeffs in pieces:
            cs = [_to_mp(c) for c in coeffs]
            while len(cs) < 3:
                cs.append(mpmath.mpf(0))
            c0, c1, c2 = cs
            lo_m = mpmath.mpf(lo.numerator) / lo.denominator
            hi_m = mpmath.mpf(hi.numerator) / hi.denominator

            def g(w):
                return (c0 + c1 * w + c2 * w * w) * mpmath.zeta(r_mp, (U + w) / B)

            val, est = mpmath.quad(g, [lo_m, hi_m], error=True)
            tail += val
            tail_err += est
        tail *= mpmath.power(B, -r_mp)
        tail_err *= abs(mpmath.power(B, -r_mp))

        roundoff = (absacc + abs(tail)) * mpmath.mpf(2) ** (8 - prec_bits)
        return head + tail, tail_err + roundoff


def sine_integral_mp(const_pieces, B: int, n: int, prec_bits: int, taylor_terms: int = 60):
    """int_1^inf P(u) sin(n pi / u) u^{-2} du for piecewise-CONSTANT periodic P.

    Head [1, U]: exact, since int sin(n pi/u) u^{-2} du = cos(n pi/u)/(n pi).
    Tail: Taylor of sin(n pi/u) in 1/u; each power integrates over the
    periodic structure to Hurwitz zeta differences. U >= 2 n pi makes the
    Taylor terms alternate with rapidly decreasing magnitude, so the first
    omitted term (doubled) certifies the truncation.

    const_pieces: [(lo: Fraction, hi: Fraction, alpha: (Fr, Fr))].
    Returns (mpc value, mpf err_bound).
    """
    with _MP_LOCK, mp.workprec(prec_bits):
        npi = n * mpmath.pi
        U = B * max(2, -(-int(math.ceil(2 * math.pi * n)) // B), -(-64 // B))
        nper = U // B

        def alpha_mp(a):
            return mpmath.mpc(mpmath.mpf(a[0].numerator) / a[0].denominator,
                              mpmath.mpf(a[1].numerator) / a[1].denominator)

        head = mpmath.mpc(0)
        absacc = mpmath.mpf(0)
        for q in range(nper):
            off = q * B
            for lo, hi, a in const_pieces:
                lo_u = max(Fraction(off) + lo, Fraction(1))
                hi_u = Fraction(off) + hi
                if hi_u <= lo_u:
                    continue
                am = alpha_mp(a)
                if am == 0:
                    continue
                lo_m = mpmath.mpf(lo_u.numerator) / lo_u.denominator
                hi_m = mpmath.mpf(hi_u.numerator) / hi_u.denominator
                contrib = am * (mpmath.cos(npi / hi_m) - mpmath.cos(npi / lo_m)) / npi
                head += contrib
                absacc += abs(contrib)

        # tail: sum_m (-1)^m (npi)^{2m+1}/(2m+1)! * sum_pieces alpha * T(m, piece)
        # T(m, piece) = B^{-(2m+2)}/(2m+2) [zeta(2m+2,(U+lo)/B) - zeta(2m+2,(U+hi)/B)]
        # envelope E_m = (npi)^{2m+1}/(2m+1)! * maxP * U^{-(2m+2)}/(2m+2) decays by
        # a factor (npi/U)^2 / ((2m+3)(2m+4)) <= 1/4 per step since U >= 2 n pi,
        # so 2 * E_{m+1} certifies stopping after term m.
        max_p = max((abs(alpha_mp(a)) for _, _, a in const_pieces), default=mpmath.mpf(0))
        tail = mpmath.mpc(0)
        coef = npi  # (npi)^{2m+1}/(2m+1)!
        trunc = mpmath.mpf(0)
        floor = mpmath.mpf(2) ** (-prec_bits)
        for m in range(taylor_terms):
            tm = mpmath.mpc(0)
            ex = 2 * m + 2
            for lo, hi, a in const_pieces:
                am = alpha_mp(a)
                if am == 0:
                    continue
                alo = (U + mpmath.mpf(lo.numerator) / lo.denominator) / B
                ahi = (U + mpmath.mpf(hi.numerator) / hi.denominator) / B
                t = (mpmath.zeta(ex, alo) - mpmath.zeta(ex, ahi)) / (ex * mpmath.power(B, ex))
                tm += am * t
            tail += coef * tm if m % 2 == 0 else -coef * tm
            coef *= npi * npi / ((2 * m + 2) * (2 * m + 3))
            trunc = coef * max_p / ((2 * m + 4) * mpmath.power(U, 2 * m + 4))
            if trunc < floor and m >= 2:
                break
        roundoff = (absacc + abs(tail) + 1) * mpmath.mpf(2) ** (8 - prec_bits)
        return head + tail, 2 * trunc + roundoff

"""Norm of F_N from its Fourier sine coefficients.

Convention: with c(n) = 2 int_0^1 F(x) sin(n pi x) dx (coefficients of the
odd extension to [-1, 1] against unit-norm sines), the L2(0,1) norm obeys

    ||F||^2 = (1/2) sum_{n>=1} |c(n)|^2,

pinned numerically by the square wave F = 1 (classical (8/pi^2) sum 1/n^2
over odd n = 1). The n > n_max tail is ESTIMATED from the jump-driven decay
c(n) = Theta(1/n): tail ~ A^2/n_max with A = max n|c(n)| over the top half
of the computed range. The estimate is reported as such, never folded into
a certified bound; Bessel (partial <= ||F||^2) gives the one-sided truth.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .errors import DomainError, ToleranceNotMet
from .fourier import batch_cosine_f64, c_cosine_series
from .functions import BeurlingSpec, norm_numeric
from .numerics import PrecisionReal


def _coeff_sq_sum(spec: BeurlingSpec, n_max: int, coeff_tol: float):
    """c(n) and certificates for n = 1..n_max, each certified <= coeff_tol."""
    if coeff_tol >= 1e-11:
        c, cert = batch_cosine_f64(spec, n_max)
        if float(cert.max()) <= coeff_tol:
            return c, cert
    if n_max > 2048:
        raise ToleranceNotMet(
            f"per-coefficient tol {coeff_tol:.3g} needs the mpmath route, "
            "which is not practical beyond n_max = 2048"
        )
    cs = [c_cosine_series(spec, n, coeff_tol) for n in range(1, n_max + 1)]
    c = np.array([complex(fc.value) for fc in cs])
    cert = np.array([float(fc.error_certificate) for fc in cs])
    return c, cert


def norm_via_parseval(spec: BeurlingSpec, n_max: int = 10_000, coeff_tol: float = 1e-10) -> dict:
    """Parseval partial sum, tail estimate, and bracketing norm values.

    Returns a dict with PrecisionReal fields:
      partial_norm_sq  (1/2) sum_{n<=n_max} |c(n)|^2
      tail_estimate    A^2 / n_max, A = max n|c(n)| over n in [n_max/2, n_max]
      norm             sqrt(partial + tail_estimate/2)  (point estimate)
      norm_lo          sqrt(partial)        (Bessel-certain lower bracket)
      norm_hi          sqrt(partial + tail_estimate)
    plus coeff_cert_total, the summed effect of coefficient certificates on
    partial_norm_sq.
    """
    if not spec.admissible:
        raise DomainError("norm_via_parseval requires an admissible spec")
    if n_max < 8:
        raise DomainError("n_max must be >= 8")
    c, cert = _coeff_sq_sum(spec, n_max, coeff_tol)
    mags = np.abs(c)
    partial = 0.5 * float(np.sum(mags**2))
    # d(|c|^2) <= 2|c| cert + cert^2, halved by the convention factor
    cert_total = 0.5 * float(np.sum(2.0 * mags * cert + cert**2))
    n = np.arange(1, n_max + 1, dtype=np.float64)
    top = slice(n_max // 2 - 1, n_max)
    a_coef = float(np.max(n[top] * mags[top]))
    tail_est = a_coef * a_coef / n_max
    return {
        "n_max": int(n_max),
        "partial_norm_sq": PrecisionReal.from_float(partial, 64),
        "tail_estimate": PrecisionReal.from_float(tail_est, 64),
        "norm": PrecisionReal.from_float(math.sqrt(partial + 0.5 * tail_est), 64),
        "norm_lo": PrecisionReal.from_float(math.sqrt(partial), 64),
        "norm_hi": PrecisionReal.from_float(math.sqrt(partial + tail_est), 64),
        "coeff_cert_total": PrecisionReal.from_float(cert_total, 64),
    }


def norm_crosscheck(
    spec: BeurlingSpec,
    n_max: int = 10_000,
    tol: float = 1e-10,
    coeff_tol: float = 1e-10,
) -> dict:
    """Compare norm_via_parseval against norm_numeric.

    Returns a JSON-ready dict {n_max, partial, tail_estimate, norm_lo,
    norm_hi, oracle, gap, gap_rel}; oracle is the quadrature norm (null when
    quadrature cannot certify tol, e.g. astronomically long periods), gap is
    |point estimate^2 - oracle^2| with the squared-norm convention.
    """
    rec = norm_via_parseval(spec, n_max, coeff_tol)
    oracle = None
    try:
        oracle = norm_numeric(spec, tol)
    except ToleranceNotMet:
        try:
            oracle = norm_numeric(spec, 1e-6)
        except ToleranceNotMet:
            oracle = None
    partial = float(rec["partial_norm_sq"])
    tail = float(rec["tail_estimate"])
    out = {
        "n_max": int(n_max),
        "partial": partial,
        "tail_estimate": tail,
        "norm_lo": float(rec["norm_lo"]),
        "norm_hi": float(rec["norm_hi"]),
        "coeff_cert_total": float(rec["coeff_cert_total"]),
        "oracle": None if oracle is None else float(oracle),
        "gap": None,
        "gap_rel": None,
    }
    if oracle is not None:
        est = partial + 0.5 * tail
        gap = abs(est - float(oracle) ** 2)
        out["gap"] = gap
        out["gap_rel"] = gap / max(float(oracle) ** 2, 1e-300)
    return out


def crosscheck_json(report: dict, **kwargs) -> str:
    return json.dumps(report, **kwargs)

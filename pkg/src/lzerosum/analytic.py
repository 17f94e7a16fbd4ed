"""Scalar special functions in binary64.

Everything here is vectorised over the complex argument ``s``: pass a
Python complex to get a complex back, or an array to get an array.

Bernoulli numbers use the B_1 = -1/2 convention.  Only even-index numbers
enter the Euler-Maclaurin corrections, so the convention matters only for
callers that expand ``x / (e^x - 1)`` directly.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import AccuracyError, PoleError

__all__ = [
    "MAX_BERNOULLI",
    "bernoulli_numbers",
    "EulerMaclaurinConfig",
    "em_config",
    "hurwitz_zeta",
    "hurwitz_zeta_ds",
    "hurwitz_zeta_with_derivative",
    "riemann_zeta",
    "log_gamma",
    "stieltjes_gamma",
    "stieltjes_gamma_raw",
    "eta_constants",
    "ConstantsTable",
    "constants_table",
]

MAX_BERNOULLI = 400
LOG_2PI = math.log(2 * math.pi)


# ---------------------------------------------------------------------------
# Bernoulli numbers


@functools.lru_cache(maxsize=None)
def _bernoulli_cached(n_max: int) -> tuple[Fraction, ...]:
    B = [Fraction(1)]
    for n in range(1, n_max + 1):
        # sum_{k=0}^{n} C(n+1, k) B_k = 0
        acc = sum((math.comb(n + 1, k) * B[k] for k in range(n)), Fraction(0))
        B.append(-acc / (n + 1))
    return tuple(B)


def bernoulli_numbers(n_max: int) -> list[Fraction]:
    """Exact B_0 .. B_{n_max} from the binomial recurrence (B_1 = -1/2).

    Raises ``OverflowError`` beyond ``MAX_BERNOULLI``; the numerators grow
    super-exponentially and nothing in this package needs more than ~60.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if n_max > MAX_BERNOULLI:
        raise OverflowError(f"Bernoulli numbers capped at index {MAX_BERNOULLI}")
    return list(_bernoulli_cached(n_max))


@functools.lru_cache(maxsize=None)
def _em_coefficients(M: int) -> np.ndarray:
    """B_{2k} / (2k)! for k = 1 .. M+1 as floats."""
    B = bernoulli_numbers(2 * M + 2)
    return np.array([float(B[2 * k] / math.factorial(2 * k)) for k in range(1, M + 2)])


# ---------------------------------------------------------------------------
# Hurwitz zeta by Euler-Maclaurin


@dataclass(frozen=True)
class EulerMaclaurinConfig:
    """Euler-Maclaurin parameters.

    ``shift`` terms are summed directly; ``order`` Bernoulli corrections
    follow.  The truncation estimate is the rigorous remainder bound
    |s + 2M + 1| / (sigma + 2M + 1) times the first omitted correction,
    which needs sigma + 2M + 1 > 0.
    """

    shift: int
    order: int = 12
    target_abs_error: float = 1e-12

    def __post_init__(self):
        if self.shift < 1 or self.order < 1:
            raise ValueError("shift and order must be positive")
        if not self.target_abs_error > 0:
            raise ValueError("target_abs_error must be positive")


def _truncation_bound(s: np.ndarray, a: float, N: int, M: int, deriv: bool) -> float:
    coef = abs(_em_coefficients(M)[M])
    sigma = s.real
    if np.any(sigma + 2 * M + 1 <= 0):
        raise AccuracyError("Euler-Maclaurin bound needs sigma > -(2M+1)")
    Na = N + a
    # P = s (s+1) ... (s+2M) and its s-derivative
    P = np.ones_like(s)
    dP = np.zeros_like(s)
    for j in range(2 * M + 1):
        dP = dP * (s + j) + P
        P = P * (s + j)
    mag = np.abs(P) + (np.abs(dP) + math.log(Na) * np.abs(P) if deriv else 0.0)
    amp = np.abs(s + 2 * M + 1) / (sigma + 2 * M + 1)
    bound = coef * mag * amp * np.exp(-(sigma + 2 * M + 1) * math.log(Na))
    return float(bound.max()) if bound.size else 0.0


def em_config(s, a: float = 1.0, target_abs_error: float = 1e-12, order: int = 12, deriv: bool = True) -> EulerMaclaurinConfig:
    """Smallest shift meeting ``target_abs_error`` for every point of ``s``.

    The search starts from N = max(30, ceil(1.3 |t| / 2 pi) + 10) and grows
    N until the self-estimated truncation error fits the budget.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex)).ravel()
    tmax = float(np.abs(s.imag).max()) if s.size else 0.0
    n0 = max(30, math.ceil(1.3 * tmax / (2 * math.pi)) + 10)
    if _truncation_bound(s, a, n0, order, deriv) <= target_abs_error:
        return EulerMaclaurinConfig(n0, order, target_abs_error)
    lo, hi = n0, 2 * n0
    while _truncation_bound(s, a, hi, order, deriv) > target_abs_error:
        lo, hi = hi, 2 * hi
        if hi > 10**8:
            raise AccuracyError("no Euler-Maclaurin shift reaches the target")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _truncation_bound(s, a, mid, order, deriv) <= target_abs_error:
            hi = mid
        else:
            lo = mid
    return EulerMaclaurinConfig(hi, order, target_abs_error)


_BLOCK = 1 << 21  # shift * points per chunk


def _tail_regularized(u: np.ndarray, L: float):
    """(e^{-uL} - 1)/u and its u-derivative, stable for small u."""
    x = u * L
    small = np.abs(x) < 0.05
    f = np.empty_like(u)
    df = np.empty_like(u)
    big = ~small
    if np.any(big):
        ub = u[big]
        e = np.expm1(-x[big])
        f[big] = e / ub
        df[big] = (-L * (e + 1.0) * ub - e) / (ub * ub)
    if np.any(small):
        # expm1(-x)/x = sum_m (-x)^m / (m+1)!
        xs = x[small]
        fs = np.zeros_like(xs)
        dfs = np.zeros_like(xs)
        prev = np.zeros_like(xs)
        term = np.ones_like(xs)
        fact = 1.0
        for m in range(16):
            fact *= m + 1
            fs += term / fact
            dfs += m * prev / fact
            prev = term
            term = term * (-xs)
        f[small] = -L * fs
        df[small] = L * L * dfs
    return f, df


def _hurwitz_em(s: np.ndarray, a: float, N: int, M: int, want_value: bool, want_deriv: bool, regularized: bool = False):
    """Raw Euler-Maclaurin sums for 1-d complex ``s`` (no checks).

    With ``regularized`` the result is zeta(s, a) - 1/(s-1), finite at s = 1.
    """
    coefs = _em_coefficients(M)
    n = np.arange(N, dtype=float) + a
    logn = np.log(n)
    val = np.zeros(s.shape, dtype=complex)
    der = np.zeros(s.shape, dtype=complex)
    step = max(1, _BLOCK // max(N, 1))
    for i in range(0, s.size, step):
        ss = s[i : i + step]
        pw = np.exp(-np.multiply.outer(logn, ss))
        if want_value:
            val[i : i + step] = pw.sum(axis=0)
        if want_deriv:
            der[i : i + step] = -(logn @ pw)

    Na = N + a
    lNa = math.log(Na)
    pN = np.exp(-s * lNa)  # (N+a)^{-s}
    sm1 = s - 1.0
    if regularized:
        tail, dtail = _tail_regularized(sm1, lNa)
        tail = tail + 0j
    else:
        tail = Na * pN / sm1
        dtail = -lNa * tail - tail / sm1
    if want_value:
        val += tail + 0.5 * pN
    if want_deriv:
        der += dtail - 0.5 * lNa * pN

    P = s.copy()  # s (s+1) ... (s+2k-2)
    dP = np.ones_like(s)
    pk = pN / Na  # (N+a)^{-s-2k+1}
    inv_Na2 = 1.0 / (Na * Na)
    for k in range(1, M + 1):
        c = coefs[k - 1]
        if want_value:
            val += c * P * pk
        if want_deriv:
            der += c * (dP - lNa * P) * pk
        for j in (2 * k - 1, 2 * k):
            dP = dP * (s + j) + P
            P = P * (s + j)
        pk = pk * inv_Na2
    return val, der


def _prepare(s, a):
    if not 0 < a <= 1:
        raise ValueError(f"Hurwitz parameter a={a} outside (0, 1]")
    arr = np.asarray(s, dtype=complex)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr).ravel()
    if not np.all(np.isfinite(flat)):
        raise ValueError("non-finite argument")
    if np.any(flat == 1.0):
        raise PoleError("Hurwitz zeta has a pole at s = 1")
    return arr, scalar, flat


def _resolve_config(flat, a, cfg, deriv):
    if cfg is None:
        return em_config(flat, a, deriv=deriv)
    est = _truncation_bound(flat, a, cfg.shift, cfg.order, deriv)
    if est > cfg.target_abs_error:
        raise AccuracyError(
            f"shift={cfg.shift}, order={cfg.order} gives estimated error {est:.3g} "
            f"> target {cfg.target_abs_error:.3g}"
        )
    return cfg


def _finish(out, arr, scalar):
    if not np.all(np.isfinite(out)):
        raise OverflowError("non-finite Hurwitz zeta value")
    if scalar:
        return complex(out[0])
    return out.reshape(arr.shape)


def hurwitz_zeta(s, a: float = 1.0, cfg: EulerMaclaurinConfig | None = None):
    """zeta(s, a) = sum_{n>=0} (n + a)^{-s}, analytically continued.

    Parameters
    ----------
    s : complex or array_like
        Evaluation point(s); s = 1 raises ``PoleError``.
    a : float
        Shift in (0, 1].
    cfg : EulerMaclaurinConfig, optional
        Fixed parameters.  When given, an estimated truncation error above
        ``cfg.target_abs_error`` raises ``AccuracyError``.  When omitted the
        shift is chosen for an absolute error of 1e-12.
    """
    arr, scalar, flat = _prepare(s, a)
    cfg = _resolve_config(flat, a, cfg, deriv=False)
    val, _ = _hurwitz_em(flat, a, cfg.shift, cfg.order, True, False)
    return _finish(val, arr, scalar)


def hurwitz_zeta_ds(s, a: float = 1.0, cfg: EulerMaclaurinConfig | None = None):
    """d/ds zeta(s, a), from term-wise differentiation of the same expansion."""
    arr, scalar, flat = _prepare(s, a)
    cfg = _resolve_config(flat, a, cfg, deriv=True)
    _, der = _hurwitz_em(flat, a, cfg.shift, cfg.order, False, True)
    return _finish(der, arr, scalar)


def hurwitz_zeta_with_derivative(s, a: float = 1.0, cfg: EulerMaclaurinConfig | None = None):
    """(zeta(s, a), d/ds zeta(s, a)) sharing one power table."""
    arr, scalar, flat = _prepare(s, a)
    cfg = _resolve_config(flat, a, cfg, deriv=True)
    val, der = _hurwitz_em(flat, a, cfg.shift, cfg.order, True, True)
    return _finish(val, arr, scalar), _finish(der, arr, scalar)


def riemann_zeta(s, cfg: EulerMaclaurinConfig | None = None):
    return hurwitz_zeta(s, 1.0, cfg)


# ---------------------------------------------------------------------------
# log Gamma


_STIRLING_R = 12.0
_STIRLING_TERMS = 10


@functools.lru_cache(maxsize=None)
def _stirling_coefficients() -> np.ndarray:
    B = bernoulli_numbers(2 * _STIRLING_TERMS)
    return np.array([float(B[2 * j] / (2 * j * (2 * j - 1))) for j in range(1, _STIRLING_TERMS + 1)])


def log_gamma(s):
    """Principal branch of log Gamma(s).

    Stirling's series is applied at s + k with Re(s + k) >= 1/2 and
    |s + k| >= 12, then log Gamma(s) = log Gamma(s + k) - sum log(s + j).
    The branch cut is the negative real axis.
    """
    arr = np.asarray(s, dtype=complex)
    scalar = arr.ndim == 0
    z = np.atleast_1d(arr).ravel()
    if not np.all(np.isfinite(z)):
        raise ValueError("non-finite argument")
    x, y = z.real, z.imag
    if np.any((y == 0) & (x <= 0) & (x == np.round(x))):
        raise PoleError("log Gamma has poles at the non-positive integers")
    need = np.sqrt(np.maximum(_STIRLING_R**2 - y * y, 0.0))
    k = np.maximum(np.ceil(np.maximum(0.5, need) - x), 0).astype(np.int64)
    w = z + k
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for c in _stirling_coefficients()[::-1]:
        series = series * inv2 + c
    out = (w - 0.5) * np.log(w) - w + 0.5 * LOG_2PI + series * inv
    kmax = int(k.max()) if k.size else 0
    for m in range(kmax):
        sel = k > m
        out[sel] -= np.log(z[sel] + m)
    if scalar:
        return complex(out[0])
    return out.reshape(arr.shape)


# ---------------------------------------------------------------------------
# Stieltjes constants and eta_k


def _log_power_over_x_derivative(k: int, m: int, x: float) -> float:
    """m-th derivative of log(x)^k / x for k in {0, 1}."""
    base = (-1) ** m * math.factorial(m) / x ** (m + 1)
    if k == 0:
        return base
    harmonic = math.fsum(1.0 / j for j in range(1, m + 1))
    return base * (math.log(x) - harmonic)


def stieltjes_gamma(k: int, n: int = 100, terms: int = 10) -> float:
    """Stieltjes constant gamma_k (k = 0 or 1).

    Euler-Maclaurin tail correction of the defining limit
    sum_{m<=n} log^k m / m - log^{k+1} n / (k+1).
    """
    if k not in (0, 1):
        raise ValueError("only gamma_0 and gamma_1 are supported")
    B = bernoulli_numbers(2 * terms)
    partial = math.fsum(math.log(m) ** k / m for m in range(1, n + 1))
    ln = math.log(n)
    value = partial - ln ** (k + 1) / (k + 1) - 0.5 * ln**k / n
    corr = [
        float(B[2 * j] / math.factorial(2 * j)) * _log_power_over_x_derivative(k, 2 * j - 1, n)
        for j in range(1, terms + 1)
    ]
    return value - math.fsum(corr)


def stieltjes_gamma_raw(k: int, n: int = 10**6) -> float:
    """The unaccelerated defining limit at finite n (a slow cross-check)."""
    m = np.arange(1, n + 1, dtype=float)
    terms = np.log(m) ** k / m
    return math.fsum(terms) - math.log(n) ** (k + 1) / (k + 1)


def eta_constants(k_max: int = 1, gammas=None, *, literal: bool = False) -> list[float]:
    """Laurent coefficients eta_k of zeta'/zeta(s) + 1/(s-1) at s = 1.

    eta_k = (-1)^k { (k+1)/k! g_k + sum_{n<k} (-1)^n / (k-n-1)! eta_n g_{k-n-1} }

    ``literal=True`` swaps (-1)^n for (-1)^(n-1), a sign variant that does
    not reproduce the Laurent expansion; it is kept so the two can be
    compared side by side.
    """
    if k_max not in (0, 1):
        raise ValueError("only eta_0 and eta_1 are supported")
    if gammas is None:
        gammas = [stieltjes_gamma(0), stieltjes_gamma(1)]
    eta: list[float] = []
    for k in range(k_max + 1):
        inner = (k + 1) / math.factorial(k) * gammas[k]
        for n in range(k):
            sign = (-1) ** (n - 1) if literal else (-1) ** n
            inner += sign / math.factorial(k - n - 1) * eta[n] * gammas[k - n - 1]
        eta.append((-1) ** k * inner)
    return eta


@dataclass(frozen=True)
class ConstantsTable:
    gamma0: float
    gamma1: float
    eta: tuple[float, float]
    bernoulli: tuple[Fraction, ...]

    def as_dict(self) -> dict:
        return {
            "gamma0": self.gamma0,
            "gamma1": self.gamma1,
            "eta0": self.eta[0],
            "eta1": self.eta[1],
            "bernoulli": [str(b) for b in self.bernoulli],
        }


@functools.lru_cache(maxsize=1)
def constants_table(b_max: int = 60) -> ConstantsTable:
    """Computed once per process; later calls return the frozen table."""
    g0 = stieltjes_gamma(0)
    g1 = stieltjes_gamma(1)
    eta = eta_constants(1, [g0, g1])
    return ConstantsTable(g0, g1, (eta[0], eta[1]), tuple(bernoulli_numbers(b_max)))

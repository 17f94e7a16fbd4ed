"""Dirichlet L-functions in the critical strip.

Production values come from the Hurwitz decomposition

    L(s, chi) = q^{-s} sum_{a mod q} chi(a) zeta(s, a/q)

with principal characters routed through zeta(s) prod_{p|q} (1 - p^{-s}).
For non-principal characters the 1/(s-1) poles of the Hurwitz terms cancel
exactly, so each term is evaluated with its pole removed; this keeps the
sum stable near (and at) s = 1.

The approximate functional equation and the truncated Dirichlet series are
independent cross-check paths only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import analytic
from .analytic import constants_table, log_gamma
from .characters import DirichletCharacter, gauss_sum, prime_divisors
from .errors import AccuracyError, NearZeroError, NotPrimitiveError, PoleError, RealityError

__all__ = [
    "DEFAULT_TARGET",
    "LOG_FLOOR",
    "LEvaluation",
    "DeltaFactor",
    "l_function",
    "l_value",
    "l_derivative",
    "l_log_derivative",
    "epsilon_factor",
    "delta_factor",
    "log_delta",
    "afe_value",
    "partial_sum_value",
    "theta",
    "rotated_Z",
    "log_completed",
    "laurent_check_principal",
    "laurent_closed_form_principal",
]

DEFAULT_TARGET = 1e-11
LOG_FLOOR = 1e-12
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class LEvaluation:
    s: complex
    value: complex
    derivative: complex | None
    method: str
    abs_error_bound: float


@dataclass(frozen=True)
class DeltaFactor:
    s: complex
    value: complex
    epsilon_chi: complex
    kappa: int


# ---------------------------------------------------------------------------
# Hurwitz path


def _euler_factor(primes, s):
    E = np.ones_like(s)
    G = np.zeros_like(s)
    for p in primes:
        ps = np.exp(-s * math.log(p))
        E = E * (1.0 - ps)
        G = G + math.log(p) * ps / (1.0 - ps)
    return E, G  # E and E'/E


def _blocks(s: np.ndarray, size: int = 512):
    order = np.argsort(np.abs(s.imag), kind="stable")
    for i in range(0, s.size, size):
        yield order[i : i + size]


def l_function(chi: DirichletCharacter, s, *, derivative: bool = False, target: float = DEFAULT_TARGET):
    """Vectorised L(s, chi) (and L'(s, chi)) with an absolute error bound.

    Returns ``(value, derivative_or_None, bound)``; arrays when ``s`` is an
    array, scalars otherwise.
    """
    arr = np.asarray(s, dtype=complex)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr).ravel()
    if not np.all(np.isfinite(flat)):
        raise ValueError("non-finite argument")
    q = chi.modulus
    val = np.empty(flat.shape, complex)
    der = np.empty(flat.shape, complex) if derivative else None
    bnd = np.empty(flat.shape, float)

    if chi.is_principal:
        if np.any(flat == 1.0):
            raise PoleError("L(s, chi_0) has a pole at s = 1")
        primes = prime_divisors(q) if q > 1 else []
        for idx in _blocks(flat):
            ss = flat[idx]
            cfg = analytic.em_config(ss, 1.0, target / 4, deriv=derivative)
            z, dz = analytic._hurwitz_em(ss, 1.0, cfg.shift, cfg.order, True, derivative)
            E, G = _euler_factor(primes, ss)
            val[idx] = z * E
            if derivative:
                der[idx] = dz * E + z * E * G
            rounding = 8 * _EPS * cfg.shift * (1.0 + np.abs(z))
            bnd[idx] = cfg.target_abs_error * 2 + rounding
    else:
        units = [int(a) for a in range(1, q + 1) if chi.log_table[a % q] >= 0]
        chis = chi.values[np.array(units) % q]
        logq = math.log(q)
        for idx in _blocks(flat):
            ss = flat[idx]
            scale = np.exp(-ss * logq)
            sigma_min = float(ss.real.min())
            per = target * q ** min(sigma_min, 0.5) / (len(units) * (1.0 + logq))
            acc = np.zeros(ss.shape, complex)
            dacc = np.zeros(ss.shape, complex)
            worst = 0.0
            for a, c in zip(units, chis):
                cfg = analytic.em_config(ss, a / q, per, deriv=derivative)
                z, dz = analytic._hurwitz_em(ss, a / q, cfg.shift, cfg.order, True, derivative, regularized=True)
                acc += c * z
                if derivative:
                    dacc += c * dz
                worst = max(worst, cfg.shift)
            val[idx] = scale * acc
            if derivative:
                der[idx] = scale * (dacc - logq * acc)
            rounding = 8 * _EPS * worst * len(units) * np.abs(scale) * (1.0 + np.abs(acc))
            bnd[idx] = np.abs(scale) * per * len(units) * (1.0 + logq) + rounding

    if not np.all(np.isfinite(val)) or (derivative and not np.all(np.isfinite(der))):
        raise OverflowError("non-finite L-function value")
    if scalar:
        return complex(val[0]), (complex(der[0]) if derivative else None), float(bnd[0])
    shape = arr.shape
    return val.reshape(shape), (der.reshape(shape) if derivative else None), bnd.reshape(shape)


def l_value(chi: DirichletCharacter, s: complex, target: float = DEFAULT_TARGET) -> LEvaluation:
    v, _, b = l_function(chi, complex(s), target=target)
    return LEvaluation(complex(s), v, None, "hurwitz", b)


def l_derivative(chi: DirichletCharacter, s: complex, target: float = DEFAULT_TARGET) -> LEvaluation:
    """L'(s, chi); ``value`` holds L(s, chi) and ``derivative`` holds L'."""
    v, d, b = l_function(chi, complex(s), derivative=True, target=target)
    return LEvaluation(complex(s), v, d, "hurwitz", b)


def l_log_derivative(chi: DirichletCharacter, s: complex, floor: float = LOG_FLOOR, target: float = DEFAULT_TARGET):
    """L'/L(s, chi) and its propagated error bound.

    Raises ``NearZeroError`` when |L(s, chi)| is at or below ``floor``.
    """
    v, d, b = l_function(chi, complex(s), derivative=True, target=target)
    if abs(v) <= floor:
        raise NearZeroError(f"|L(s, chi)| = {abs(v):.3g} is below the floor {floor:.3g}", floor=floor, value=abs(v))
    ratio = d / v
    err = (b + abs(ratio) * b) / abs(v)
    return ratio, err


# ---------------------------------------------------------------------------
# functional equation


def _require_primitive(chi: DirichletCharacter):
    if not chi.is_primitive:
        raise NotPrimitiveError(
            f"character {chi.label} has conductor {chi.conductor}; use primitive_inducing() first"
        )


def epsilon_factor(chi: DirichletCharacter) -> complex:
    """tau(chi) / (i^kappa sqrt(q)), a unit complex number for primitive chi."""
    _require_primitive(chi)
    return gauss_sum(chi).value / ((1j) ** chi.kappa * math.sqrt(chi.modulus))


def _log_sin(z: np.ndarray) -> np.ndarray:
    """A branch of log sin z that never overflows."""
    out = np.empty_like(z)
    up = z.imag >= 0
    with np.errstate(divide="ignore"):
        zu = z[up]
        out[up] = -1j * zu + np.log(0.5j) + np.log1p(-np.exp(2j * zu))
        zd = z[~up]
        out[~up] = 1j * zd + np.log(-0.5j) + np.log1p(-np.exp(-2j * zd))
    return out


def log_delta(chi: DirichletCharacter, s) -> np.ndarray:
    """A branch of log Delta(s, chi) (vectorised); value = exp of the result."""
    _require_primitive(chi)
    arr = np.asarray(s, dtype=complex)
    flat = np.atleast_1d(arr).ravel()
    nearest = np.round(flat.real)
    if np.any((nearest >= 1) & (np.abs(flat - nearest) < 1e-6)):
        raise PoleError("Delta(s, chi) is not evaluated within 1e-6 of a positive integer")
    q = chi.modulus
    eps = epsilon_factor(chi)
    out = (
        cmath.log(eps)
        + flat * math.log(2.0)
        + (flat - 1.0) * math.log(math.pi)
        + (0.5 - flat) * math.log(q)
        + log_gamma(1.0 - flat)
        + _log_sin(0.5 * math.pi * (flat + chi.kappa))
    )
    return out.reshape(arr.shape) if arr.ndim else out[0]


def delta_factor(s: complex, chi: DirichletCharacter) -> DeltaFactor:
    """Delta(s, chi) = eps(chi) 2^s pi^{s-1} q^{1/2-s} Gamma(1-s) sin(pi (s+kappa)/2)."""
    lg = log_delta(chi, complex(s))
    with np.errstate(over="raise"):
        value = complex(np.exp(lg))
    if not cmath.isfinite(value):
        raise OverflowError("Delta(s, chi) overflows")
    return DeltaFactor(complex(s), value, epsilon_factor(chi), chi.kappa)


# ---------------------------------------------------------------------------
# cross-check paths


def _dirichlet_partial(chi: DirichletCharacter, s: complex, n_max: int, conj: bool = False, shift: complex = 0.0):
    if n_max < 1:
        return 0j
    n = np.arange(1, n_max + 1)
    c = chi.values[n % chi.modulus]
    if conj:
        c = np.conj(c)
    terms = c * np.exp(-(s + shift) * np.log(n))
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def afe_value(chi: DirichletCharacter, s: complex, x: float | None = None, y: float | None = None) -> LEvaluation:
    """Approximate functional equation with 2 pi x y = t.

    sum_{n<=x} chi(n) n^{-s} + Delta(s, chi) sum_{n<=y} conj(chi(n)) n^{s-1}

    ``abs_error_bound`` is the envelope
    sqrt(q) (y^{-sigma} + x^{sigma-1} (q t)^{1/2-sigma}) log 2t with
    constant 1; it is a size indication, not a guarantee.  Omitting x and y
    uses the balanced choice x = y = sqrt(t / 2 pi).
    """
    s = complex(s)
    sigma, t = s.real, s.imag
    if not 0.0 <= sigma <= 1.0:
        raise ValueError("the approximate functional equation needs 0 <= sigma <= 1")
    if t <= 0:
        raise ValueError("the approximate functional equation needs t > 0")
    if x is None and y is None:
        x = y = math.sqrt(t / (2 * math.pi))
    elif x is None:
        x = t / (2 * math.pi * y)
    elif y is None:
        y = t / (2 * math.pi * x)
    if abs(2 * math.pi * x * y - t) > 1e-9 * t:
        raise ValueError(f"2 pi x y = {2 * math.pi * x * y} does not match t = {t}")
    if x < 1 or y < 1:
        raise ValueError("x and y must be at least 1")
    q = chi.modulus
    first = _dirichlet_partial(chi, s, int(math.floor(x)))
    second = _dirichlet_partial(chi, 1.0 - s, int(math.floor(y)), conj=True)
    value = first + delta_factor(s, chi).value * second
    envelope = math.sqrt(q) * (y**-sigma + x ** (sigma - 1) * (q * t) ** (0.5 - sigma)) * math.log(2 * t)
    return LEvaluation(s, value, None, "afe", envelope)


def partial_sum_value(chi: DirichletCharacter, s: complex) -> LEvaluation:
    """sum_{n <= q t} chi(n) n^{-s} with envelope q (q t)^{-sigma}, for sigma > 1."""
    s = complex(s)
    if s.real <= 1:
        raise ValueError("the truncated Dirichlet series needs sigma > 1")
    q = chi.modulus
    t = abs(s.imag)
    X = max(1, int(math.floor(q * max(t, 1.0))))
    value = _dirichlet_partial(chi, s, X)
    return LEvaluation(s, value, None, "partial_sum", q * (q * max(t, 1.0)) ** (-s.real))


# ---------------------------------------------------------------------------
# critical line


def theta(chi: DirichletCharacter, t) -> np.ndarray:
    """Phase with exp(i theta(t)) L(1/2 + it, chi) real.

    theta(t) = Im log Gamma((1/2 + it + kappa)/2) + (t/2) log(q/pi) - arg(eps)/2
    """
    _require_primitive(chi)
    t = np.asarray(t, dtype=float)
    q, k = chi.modulus, chi.kappa
    half_arg = 0.5 * cmath.phase(epsilon_factor(chi))
    return np.imag(log_gamma((0.5 + 1j * t + k) / 2)) + 0.5 * t * math.log(q / math.pi) - half_arg


def rotated_Z(chi: DirichletCharacter, t, target: float = 1e-10, check: bool = True):
    """Real-valued rotation of L(1/2 + it, chi); zeros on the line are sign changes.

    Equals eps^{-1/2} (q/pi)^{(s+kappa)/2} Gamma((s+kappa)/2) L(s, chi) at
    s = 1/2 + it divided by the positive modulus of the Gamma-side factor,
    so the sign is unchanged and nothing underflows at large t.  A global
    sign flip (the branch of eps^{1/2}) does not move zeros.
    """
    _require_primitive(chi)
    tt = np.asarray(t, dtype=float)
    L, _, _ = l_function(chi, 0.5 + 1j * tt, target=target)
    rot = np.exp(1j * theta(chi, tt)) * L
    if check:
        resid = np.abs(rot.imag)
        bad = resid > 1e-6 * (1.0 + np.abs(rot.real))
        if np.any(bad):
            i = int(np.flatnonzero(np.atleast_1d(bad))[0])
            raise RealityError(
                f"rotated value not real at t={np.atleast_1d(tt)[i]}: residue {np.atleast_1d(resid)[i]:.3g}"
            )
    out = rot.real
    return float(out) if np.ndim(out) == 0 else out


def rotated_Z_residue(chi: DirichletCharacter, t, target: float = 1e-10):
    """(Z(t), |imaginary residue|) without the reality check."""
    tt = np.asarray(t, dtype=float)
    L, _, _ = l_function(chi, 0.5 + 1j * tt, target=target)
    rot = np.exp(1j * theta(chi, tt)) * L
    return rot.real, np.abs(rot.imag)


def log_completed(chi: DirichletCharacter, s, target: float = 1e-9) -> np.ndarray:
    """A branch of log of the entire completed function.

    (q/pi)^{(s+kappa)/2} Gamma((s+kappa)/2) L(s, chi), times s(s-1) for q = 1.
    Only the imaginary part modulo 2 pi is meaningful across points.
    """
    _require_primitive(chi)
    s = np.asarray(s, dtype=complex)
    L, _, _ = l_function(chi, s, target=target)
    q, k = chi.modulus, chi.kappa
    with np.errstate(divide="ignore"):
        out = 0.5 * (s + k) * math.log(q / math.pi) + log_gamma(0.5 * (s + k)) + np.log(L)
    if q == 1:
        out = out + np.log(s) + np.log(s - 1.0)
    return out


# ---------------------------------------------------------------------------
# Laurent data at s = 1


def laurent_check_principal(q: int, radius: float = 1e-2, samples: int = 64) -> list[float]:
    """Fitted Laurent coefficients of L'(s, chi_0) and L'/L(s, chi_0) at s = 1.

    Returns ``[c'_{-2}, c'_{-1}, c'_0, g_{-1}, g_0, g_1]`` where c' are the
    coefficients of L' and g those of L'/L.  The fit projects samples on the
    circle |s - 1| = radius onto each power, which is the least-squares
    solution of the Vandermonde system for equispaced nodes.
    """
    from .characters import principal_character

    chi0 = principal_character(q)
    ang = 2 * math.pi * (np.arange(samples) + 0.5) / samples
    w = radius * np.exp(1j * ang)
    v, d, _ = l_function(chi0, 1.0 + w, derivative=True, target=1e-13)
    g = d / v

    def coef(f, k):
        return np.mean(f * w ** (-k))

    raw = [coef(d, -2), coef(d, -1), coef(d, 0), coef(g, -1), coef(g, 0), coef(g, 1)]
    # aliasing check: the highest resolved power should be negligible
    alias = max(abs(coef(d, samples // 2 - 3)), abs(coef(g, samples // 2 - 2))) * radius ** (samples // 2 - 3)
    for c in raw:
        if abs(c.imag) > 1e-7 * (1.0 + abs(c.real)) or alias > 1e-9:
            raise AccuracyError(f"ill-conditioned Laurent fit at radius {radius}")
    return [float(c.real) for c in raw]


def laurent_closed_form_principal(q: int) -> list[float]:
    """Closed-form values of the coefficients returned by laurent_check_principal.

    zeta(s) = 1/(s-1) + gamma_0 - gamma_1 (s-1) + ..., and
    E(s) = prod_{p|q} (1 - p^{-s}) expanded at 1 as E0 + E1 u + E2 u^2.
    """
    ct = constants_table()
    primes = prime_divisors(q) if q > 1 else []
    E0 = math.prod(1 - 1 / p for p in primes)
    S = math.fsum(math.log(p) / (p - 1) for p in primes)
    S2 = math.fsum(p * math.log(p) ** 2 / (p - 1) ** 2 for p in primes)
    E1 = E0 * S
    E2 = 0.5 * E0 * (S * S - S2)
    c0 = ct.gamma0
    c1 = -ct.gamma1
    dL = [-E0, 0.0, E2 + c0 * E1 + c1 * E0]
    logder = [-1.0, ct.eta[0] + S, ct.eta[1] - S2]
    return dL + logder

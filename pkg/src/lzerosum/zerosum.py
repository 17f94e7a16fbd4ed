"""Sums of L'(rho, chi) over critical zeros against their asymptotic main term."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic
from .characters import DirichletCharacter, euler_phi, gauss_sum, prime_divisors
from .errors import NotPrimitiveError
from .lfunc import l_function
from .zeros import ScanConfig, ZeroList, scan_zeros, snap_height, verify_completeness

__all__ = [
    "AsymptoticConstants",
    "ExceptionalZeroSpec",
    "ComparisonRow",
    "ComparisonReport",
    "constants",
    "a3_term",
    "main_term",
    "empirical_sum",
    "compare",
    "envelope",
    "unconditional_envelope",
]


@dataclass(frozen=True)
class AsymptoticConstants:
    q: int
    a1: float
    a2: float
    euler_log_sum: float
    euler_log2_sum: float
    gamma0: float
    gamma1: float


@dataclass(frozen=True)
class ExceptionalZeroSpec:
    """A (possibly hypothetical) real zero beta of L(s, omega), omega quadratic."""

    omega: DirichletCharacter
    beta: float

    def __post_init__(self):
        if not self.omega.is_real:
            raise ValueError(f"omega must be real-valued; {self.omega.label} is not")
        if self.omega.is_principal:
            raise ValueError("omega must be non-principal")
        if not 0 < self.beta < 1:
            raise ValueError("beta must lie in (0, 1)")


def constants(q: int) -> AsymptoticConstants:
    """a1 and a2 for modulus q; the prime sums run over distinct p | q."""
    if q < 1:
        raise ValueError("q must be a positive integer")
    tab = analytic.constants_table()
    g0, g1 = tab.gamma0, tab.gamma1
    ps = prime_divisors(q) if q > 1 else []
    S = math.fsum(math.log(p) / (p - 1) for p in ps)
    S2 = math.fsum(p * math.log(p) ** 2 / (p - 1) ** 2 for p in ps)
    a1 = S + g0 - 1
    a2 = S * S / 2 + (g0 - 1) * S - 1.5 * S2 + 1 - g0 - g0 * g0 - g1
    return AsymptoticConstants(q, a1, a2, S, S2, g0, g1)


def a3_term(spec: ExceptionalZeroSpec | None, chi: DirichletCharacter, q: int, T: float) -> complex:
    """Contribution of an exceptional zero; exactly 0 when ``spec`` is None."""
    if spec is None:
        return 0j
    om = spec.omega
    if om.modulus != q or chi.modulus != q:
        raise ValueError("omega and chi must both be characters mod q")
    if spec.beta < 0.5:
        raise ValueError(f"beta={spec.beta} < 1/2 is not an exceptional zero")
    sign = om(-1) * chi(-1)
    taus = complex(gauss_sum(chi.conj())) * complex(gauss_sum(om.conj() * chi))
    _, dL, _ = l_function(om, complex(spec.beta), derivative=True)
    growth = (q * T / (2 * math.pi)) ** spec.beta
    return complex(sign * taus / (q * euler_phi(q)) * dL / spec.beta * growth)


def main_term(q: int, T: float, c: AsymptoticConstants | None = None, a3: complex = 0j):
    """Main term of the zero sum at height T (a float unless ``a3`` is nonzero)."""
    c = c or constants(q)
    x = q * T / (2 * math.pi)
    lg = math.log(x)
    m = T / (4 * math.pi) * lg * lg + c.a1 * T / (2 * math.pi) * lg + c.a2 * T / (2 * math.pi)
    return m + a3 if a3 != 0 else m


def _derivatives_at_zeros(chi, zl: ZeroList, target: float = 1e-10) -> np.ndarray:
    if len(zl) == 0:
        return np.zeros(0, complex)
    s = 0.5 + 1j * zl.gammas
    _, d, _ = l_function(chi, s, derivative=True, target=target)
    bad = ~np.isfinite(d)
    if np.any(bad):
        raise ArithmeticError(f"L' failed at gamma={zl.gammas[bad][0]!r}")
    return d


def _csum(values) -> complex:
    v = np.asarray(values, complex)
    return complex(math.fsum(v.real), math.fsum(v.imag))


def empirical_sum(chi: DirichletCharacter, zeros: ZeroList, cfg=None) -> complex:
    """Sum of L'(1/2 + i gamma, chi) over the list, in ascending gamma, compensated."""
    if not chi.is_primitive:
        raise NotPrimitiveError(f"{chi.label} is not primitive")
    if zeros.character != chi:
        raise ValueError("zero list belongs to a different character")
    return _csum(_derivatives_at_zeros(chi, zeros))


def envelope(q: int, T: float) -> float:
    x = q * T
    return math.sqrt(x) * math.log(x) ** 3.5


def unconditional_envelope(T: float, c: float = 0.1) -> float:
    return T * math.exp(-c * math.sqrt(math.log(T)))


@dataclass(frozen=True)
class ComparisonRow:
    T_requested: float
    T: float  # snapped to a zero-gap midpoint
    n_zeros: int
    empirical_sum: complex
    main_term: float
    remainder: complex
    envelope_ratio: float  # |R| / (sqrt(qT) log^{7/2} qT)
    unconditional_ratio: float  # |R| / (T exp(-0.1 sqrt(log T)))
    relative_remainder: float  # |R| / M
    imag_fraction: float  # |Im sum| / (1 + |M|)


@dataclass(frozen=True)
class ComparisonReport:
    q: int
    label: str
    rows: tuple[ComparisonRow, ...]
    envelope_constant: float | None  # least-squares C in |R| ~ C * envelope
    growth_exponent: float | None  # slope of log|R| against log(qT)
    a3: complex = 0j

    @property
    def T_grid(self) -> list[float]:
        return [r.T for r in self.rows]

    @property
    def imag_fraction(self) -> list[float]:
        return [r.imag_fraction for r in self.rows]


def compare(
    chi: DirichletCharacter,
    T_grid,
    cfg: ScanConfig | None = None,
    exceptional: ExceptionalZeroSpec | None = None,
    certify: bool = True,
) -> ComparisonReport:
    """Empirical zero sums against the main term over a grid of heights."""
    if not chi.is_primitive:
        raise NotPrimitiveError(f"{chi.label} is not primitive")
    grid = [float(t) for t in T_grid]
    if not grid:
        raise ValueError("empty T grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("T grid must be strictly increasing")
    if grid[0] <= 0:
        raise ValueError("T values must be positive")
    cfg = cfg or ScanConfig()
    q = chi.modulus
    c = constants(q)

    top = grid[-1] + max(2.0, 16 * math.pi / math.log(q * grid[-1] + 3))
    zl = scan_zeros(chi, cfg.t_min, top, cfg)
    while not np.any(zl.gammas > grid[-1]):
        top += 4.0
        zl = scan_zeros(chi, cfg.t_min, top, cfg)
    deriv = _derivatives_at_zeros(chi, zl)
    g = zl.gammas

    rows = []
    a3_last = 0j
    for T in grid:
        Ts = snap_height(zl, T)
        n = int(np.sum(g <= Ts))
        if certify:
            sub = ZeroList(chi, zl.t_min, Ts, zl.zeros[:n])
            verify_completeness(sub)
        emp = _csum(deriv[:n])
        a3 = a3_term(exceptional, chi, q, Ts)
        a3_last = a3
        M = main_term(q, Ts, c)
        M_full = M + a3
        R = emp - M_full
        rows.append(
            ComparisonRow(
                T_requested=T,
                T=Ts,
                n_zeros=n,
                empirical_sum=emp,
                main_term=M,
                remainder=complex(R),
                envelope_ratio=abs(R) / envelope(q, Ts),
                unconditional_ratio=abs(R) / unconditional_envelope(Ts),
                relative_remainder=abs(R) / abs(M) if M != 0 else math.inf,
                imag_fraction=abs(emp.imag) / (1 + abs(M)),
            )
        )

    C = slope = None
    if len(rows) > 1:
        env = np.array([envelope(q, r.T) for r in rows])
        absR = np.array([abs(r.remainder) for r in rows])
        C = float(np.dot(absR, env) / np.dot(env, env))
        if np.all(absR > 0):
            slope = float(np.polyfit(np.log(q * np.array([r.T for r in rows])), np.log(absR), 1)[0])
    return ComparisonReport(q, chi.label, tuple(rows), C, slope, a3_last)

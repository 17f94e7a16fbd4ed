"""Critical-line zeros of primitive Dirichlet L-functions.

Zeros are located as sign changes of the rotated function Z(t) on a grid
whose step follows the local zero density 1/log(q(t+2)), then refined by
bisection.  Completeness is certified independently by the winding number
of the completed function around the rectangle [-1/2-d, 3/2+d] x [0, T].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .characters import DirichletCharacter
from .errors import MeshError, NotPrimitiveError, ZeroCountMismatch
from .lfunc import log_completed, rotated_Z

__all__ = [
    "ScanConfig",
    "ZeroRecord",
    "ZeroList",
    "scan_zeros",
    "refine_zero",
    "count_zeros_argument_principle",
    "verify_completeness",
    "snap_height",
    "zeros_up_to",
    "density_violations",
]

# contour offset; chosen so that no dyadic mesh point on the bottom edge
# lands on s = 0 or s = 1
CONTOUR_DELTA = 0.0173


@dataclass(frozen=True)
class ScanConfig:
    grid_factor: float = 8.0
    refine_tol: float = 1e-9
    t_min: float = 0.0

    def __post_init__(self):
        if self.grid_factor < 4:
            raise ValueError("grid_factor must be at least 4")
        if not self.refine_tol > 0:
            raise ValueError("refine_tol must be positive")


@dataclass(frozen=True)
class ZeroRecord:
    gamma: float
    residual_halfwidth: float
    z_sign_left: int
    z_sign_right: int
    bracket: tuple[float, float] = field(default=(math.nan, math.nan), compare=False)
    z_left: float = field(default=math.nan, compare=False)
    z_right: float = field(default=math.nan, compare=False)


@dataclass(frozen=True)
class ZeroList:
    character: DirichletCharacter
    t_min: float
    t_max: float
    zeros: tuple[ZeroRecord, ...]
    certified_count: int | None = None

    def __post_init__(self):
        g = [z.gamma for z in self.zeros]
        if any(b <= a for a, b in zip(g, g[1:])):
            raise ValueError("zero ordinates must be strictly increasing")
        if self.certified_count is not None and self.certified_count != len(self.zeros):
            raise ValueError("certified_count disagrees with the number of zeros")

    def __len__(self) -> int:
        return len(self.zeros)

    @property
    def gammas(self) -> np.ndarray:
        return np.array([z.gamma for z in self.zeros], dtype=float)

    def up_to(self, T: float) -> "ZeroList":
        kept = tuple(z for z in self.zeros if z.gamma <= T)
        cert = len(kept) if self.certified_count is not None and T <= self.t_max else None
        return replace(self, zeros=kept, t_max=min(T, self.t_max), certified_count=cert)


def _require_primitive(chi: DirichletCharacter):
    if not chi.is_primitive:
        raise NotPrimitiveError(f"zeros are only computed for primitive characters, not {chi.label}")


def _grid(q: int, t0: float, t1: float, factor: float) -> np.ndarray:
    pts = [t0]
    t = t0
    while True:
        t += 1.0 / (factor * math.log(q * (t + 2.0)))
        if t >= t1:
            break
        pts.append(t)
    pts.append(t1)
    return np.array(pts)


def _bisect(chi, lo, hi, zlo, zhi, tol):
    """Vectorised bisection; every bracket must have a sign change."""
    lo, hi = lo.astype(float).copy(), hi.astype(float).copy()
    zlo, zhi = zlo.astype(float).copy(), zhi.astype(float).copy()
    while True:
        active = 0.5 * (hi - lo) > tol
        if not np.any(active):
            break
        mid = 0.5 * (lo[active] + hi[active])
        zm = np.atleast_1d(rotated_Z(chi, mid, target=1e-12))
        left = np.sign(zm) == np.sign(zlo[active])
        idx = np.flatnonzero(active)
        exact = zm == 0
        lo[idx[left]] = mid[left]
        zlo[idx[left]] = zm[left]
        right = ~left
        hi[idx[right]] = mid[right]
        zhi[idx[right]] = zm[right]
        if np.any(exact):
            lo[idx[exact]] = hi[idx[exact]] = mid[exact]
    return lo, hi, zlo, zhi


def _records(lo, hi, zlo, zhi):
    out = []
    for a, b, za, zb in zip(lo, hi, zlo, zhi):
        if za == zb:
            gamma = 0.5 * (a + b)
        else:
            gamma = a - za * (b - a) / (zb - za)  # secant point, stays inside [a, b]
            gamma = min(max(gamma, a), b)
        out.append(
            ZeroRecord(
                float(gamma),
                float(0.5 * (b - a)),
                int(np.sign(za)) or -int(np.sign(zb)),
                int(np.sign(zb)) or -int(np.sign(za)),
                (float(a), float(b)),
                float(za),
                float(zb),
            )
        )
    return out


def _vertex_value(t, z) -> float:
    """Extremal value of the parabola through three samples."""
    h1, h2 = t[1] - t[0], t[2] - t[1]
    d1, d2 = (z[1] - z[0]) / h1, (z[2] - z[1]) / h2
    curv = (d2 - d1) / (h1 + h2)
    if curv == 0:
        return float(z[1])
    slope = d1 + curv * h1
    return float(z[1] - slope * slope / (4 * curv))


def _suspicious_minima(t, z):
    """Interior grid points where |Z| dips without a sign change."""
    a = np.abs(z)
    i = np.arange(1, len(z) - 1)
    if i.size == 0:
        return i
    same = (np.sign(z[i - 1]) == np.sign(z[i])) & (np.sign(z[i + 1]) == np.sign(z[i]))
    dip = (a[i] < a[i - 1]) & (a[i] < a[i + 1])
    # vertex of the parabola through the three samples
    h1 = t[i] - t[i - 1]
    h2 = t[i + 1] - t[i]
    d1 = (z[i] - z[i - 1]) / h1
    d2 = (z[i + 1] - z[i]) / h2
    curv = (d2 - d1) / (h1 + h2)
    slope = d1 + curv * h1  # derivative at t[i]
    with np.errstate(divide="ignore", invalid="ignore"):
        vertex = z[i] - slope * slope / (4 * curv)
    crosses = np.sign(vertex) != np.sign(z[i])
    shallow = a[i] < 0.1 * np.maximum(a[i - 1], a[i + 1])
    return i[same & dip & (crosses | shallow)]


def scan_zeros(chi: DirichletCharacter, t0: float, t1: float, cfg: ScanConfig | None = None) -> ZeroList:
    """All sign changes of Z on (t0, t1], refined to ``cfg.refine_tol``.

    Raises ``MeshError`` if a dip of |Z| below 1e-6 survives a 16x local
    refinement without a sign change (a possible multiple zero).
    """
    _require_primitive(chi)
    cfg = cfg or ScanConfig()
    if not 0 <= t0 <= t1:
        raise ValueError("need 0 <= t0 <= t1")
    if t0 == t1:
        return ZeroList(chi, t0, t1, ())
    t = _grid(chi.modulus, t0, t1, cfg.grid_factor)
    z = np.asarray(rotated_Z(chi, t, target=1e-10))

    brackets = []
    for i in _suspicious_minima(t, z):
        fine_t = np.linspace(t[i - 1], t[i + 1], 33)
        fine_z = np.asarray(rotated_Z(chi, fine_t, target=1e-12))
        ch = np.flatnonzero(np.sign(fine_z[:-1]) * np.sign(fine_z[1:]) < 0)
        if ch.size == 0:
            j = int(np.clip(np.argmin(np.abs(fine_z)), 1, len(fine_z) - 2))
            v = _vertex_value(fine_t[j - 1 : j + 2], fine_z[j - 1 : j + 2])
            if abs(v) < 1e-6 or np.sign(v) != np.sign(fine_z[j]):
                raise MeshError(
                    f"|Z| dips to {v:.3g} near t={fine_t[j]:.6f} without a sign change (possible multiple zero)"
                )
        for j in ch:
            brackets.append((fine_t[j], fine_t[j + 1], fine_z[j], fine_z[j + 1]))

    zero_pts = np.flatnonzero(z == 0)
    ch = np.flatnonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0)
    for j in ch:
        brackets.append((t[j], t[j + 1], z[j], z[j + 1]))
    for j in zero_pts:
        if 0 < j < len(t) - 1:
            brackets.append((t[j - 1], t[j + 1], z[j - 1], z[j + 1]))
        elif j == len(t) - 1 and t[j] > t0:
            brackets.append((t[j], t[j], 0.0, 0.0))

    if not brackets:
        return ZeroList(chi, t0, t1, ())
    b = np.array(sorted(set(brackets)))
    lo, hi, zlo, zhi = _bisect(chi, b[:, 0], b[:, 1], b[:, 2], b[:, 3], cfg.refine_tol)
    recs = [r for r in _records(lo, hi, zlo, zhi) if t0 < r.gamma <= t1]
    recs.sort(key=lambda r: r.gamma)
    return ZeroList(chi, t0, t1, tuple(recs))


def refine_zero(chi: DirichletCharacter, bracket: tuple[float, float], tol: float = 1e-9) -> ZeroRecord:
    """Bisect a sign-changing bracket of Z down to half-width ``tol``."""
    _require_primitive(chi)
    a, b = float(bracket[0]), float(bracket[1])
    if not a < b:
        raise ValueError("bracket must satisfy a < b")
    za, zb = np.asarray(rotated_Z(chi, np.array([a, b]), target=1e-12))
    if np.sign(za) * np.sign(zb) > 0:
        raise ValueError(f"Z has the same sign at both ends of ({a}, {b})")
    lo, hi, zlo, zhi = _bisect(chi, np.array([a]), np.array([b]), np.array([za]), np.array([zb]), tol)
    return _records(lo, hi, zlo, zhi)[0]


# ---------------------------------------------------------------------------
# argument principle


def _phase(chi, s):
    return np.imag(log_completed(chi, s))


def _edge_winding(chi, start: complex, end: complex, h0: float, min_step: float, max_jump: float) -> float:
    """Continuous change of arg along the segment start -> end."""
    length = abs(end - start)
    n = max(2, int(math.ceil(length / h0)) + 1)
    u = np.linspace(0.0, 1.0, n)
    ph = _phase(chi, start + u * (end - start))
    total = 0.0
    # segments as (u_a, u_b, phase_a, phase_b); refine offending ones
    ua, ub, pa, pb = u[:-1], u[1:], ph[:-1], ph[1:]
    while ua.size:
        d = np.mod(pb - pa + math.pi, 2 * math.pi) - math.pi
        bad = np.abs(d) >= max_jump
        total += float(np.sum(d[~bad]))
        if not np.any(bad):
            break
        ua, ub, pa, pb = ua[bad], ub[bad], pa[bad], pb[bad]
        if np.min(ub - ua) * length < min_step:
            where = start + 0.5 * (ua[0] + ub[0]) * (end - start)
            raise MeshError(f"phase jump {d[bad][0]:.3f} unresolved near s={where:.6f}")
        um = 0.5 * (ua + ub)
        pm = _phase(chi, start + um * (end - start))
        ua, ub, pa, pb = (
            np.concatenate([ua, um]),
            np.concatenate([um, ub]),
            np.concatenate([pa, pm]),
            np.concatenate([pm, pb]),
        )
    return total


def count_zeros_argument_principle(
    chi: DirichletCharacter,
    T: float,
    delta: float = CONTOUR_DELTA,
    max_jump: float = math.pi / 4,
    min_step: float = 1e-7,
) -> int:
    """Number of zeros with 0 < gamma <= T from the winding of the completed function.

    The completed function (q/pi)^{(s+kappa)/2} Gamma((s+kappa)/2) L(s, chi)
    (times s(s-1) when q = 1) is entire and zero-free off the critical
    strip, so its winding around the rectangle counts every zero in
    0 < sigma < 1, 0 < t <= T.  Each edge is meshed adaptively until all
    phase increments are below ``max_jump`` (< pi/2).
    """
    _require_primitive(chi)
    if T <= 0:
        return 0
    q = chi.modulus
    h0 = min(0.1, 1.0 / (4 * math.log(q * (T + 2))))
    sl, sr = -0.5 - delta, 1.5 + delta
    corners = [complex(sl, 0), complex(sr, 0), complex(sr, T), complex(sl, T)]
    total = 0.0
    for a, b in zip(corners, corners[1:] + corners[:1]):
        total += _edge_winding(chi, a, b, h0, min_step, max_jump)
    w = total / (2 * math.pi)
    n = round(w)
    if abs(w - n) > 0.05:
        raise MeshError(f"winding number {w:.4f} is not close to an integer")
    return int(n)


def _ap_between(chi, t0, t1, cache):
    def c(T):
        if T not in cache:
            cache[T] = count_zeros_argument_principle(chi, T)
        return cache[T]

    return c(t1) - (c(t0) if t0 > 0 else 0)


def verify_completeness(zl: ZeroList) -> ZeroList:
    """Attach the argument-principle count, or raise on disagreement.

    On mismatch the error names the smallest interval between consecutive
    scanned zeros where the counts first diverge.
    """
    chi = zl.character
    if zl.t_max <= zl.t_min:
        return replace(zl, certified_count=0)
    cache: dict[float, int] = {}
    n = _ap_between(chi, zl.t_min, zl.t_max, cache)
    if n == len(zl):
        return replace(zl, certified_count=n)

    g = zl.gammas
    heights = [zl.t_min] + [0.5 * (a + b) for a, b in zip(g, g[1:])] + [zl.t_max]
    lo, hi = 0, len(heights) - 1
    # invariant: counts agree at heights[lo], disagree at heights[hi]
    while hi - lo > 1:
        mid = (lo + hi) // 2
        h = heights[mid]
        if _ap_between(chi, zl.t_min, h, cache) == int(np.sum(g <= h)):
            lo = mid
        else:
            hi = mid
    a, b = heights[lo], heights[hi]
    found = int(np.sum((g > a) & (g <= b)))
    expected = _ap_between(chi, a, b, cache) if a > 0 else _ap_between(chi, 0, b, cache)
    raise ZeroCountMismatch(
        f"{chi.label}: argument principle counts {n} zeros in ({zl.t_min}, {zl.t_max}], scan found {len(zl)}; "
        f"first disagreement in ({a:.6f}, {b:.6f}] (expected {expected}, found {found})",
        interval=(a, b),
        expected=expected,
        found=found,
    )


# ---------------------------------------------------------------------------
# helpers shared with the zero-sum pipeline


def snap_height(zl: ZeroList, T: float) -> float:
    """Midpoint of the gap between consecutive zeros that contains T.

    ``zl`` must extend beyond T (at least one zero above it).
    """
    g = zl.gammas
    above = np.flatnonzero(g > T)
    if above.size == 0:
        raise ValueError(f"zero list ends at {zl.t_max}; scan past T={T} before snapping")
    k = int(above[0])
    lower = g[k - 1] if k > 0 else zl.t_min
    return float(0.5 * (lower + g[k]))


def zeros_up_to(chi: DirichletCharacter, T: float, cfg: ScanConfig | None = None, certify: bool = True):
    """Scan past T, snap T to a zero-gap midpoint, and certify the list there.

    Returns ``(snapped_T, certified ZeroList on (0, snapped_T])``.
    """
    cfg = cfg or ScanConfig()
    margin = max(2.0, 4 * 2 * math.pi / math.log(chi.modulus * (T + 2) / (2 * math.pi) + math.e))
    zl = scan_zeros(chi, cfg.t_min, T + margin, cfg)
    while not np.any(zl.gammas > T):
        margin *= 2
        zl = scan_zeros(chi, cfg.t_min, T + margin, cfg)
    Ts = snap_height(zl, T)
    sub = ZeroList(chi, zl.t_min, Ts, tuple(z for z in zl.zeros if z.gamma <= Ts))
    if certify:
        sub = verify_completeness(sub)
    return Ts, sub


def density_violations(zl: ZeroList, factor: float = 3.0) -> list[tuple[float, int, int]]:
    """Unit windows (t, t+1] holding more than ceil(factor log(q(t+2))) zeros.

    Returns ``(t, count, limit)`` triples; an empty list means no alarm.
    """
    g = zl.gammas
    q = zl.character.modulus
    out = []
    for t in np.arange(math.floor(zl.t_min), math.ceil(zl.t_max)):
        cnt = int(np.sum((g > t) & (g <= t + 1)))
        lim = math.ceil(factor * math.log(q * (t + 2)))
        if cnt > lim:
            out.append((float(t), cnt, lim))
    return out

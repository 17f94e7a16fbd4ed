import math

import mpmath
import numpy as np
import pytest

import lzerosum.zeros as zmod
from lzerosum.characters import character, induce, primitive_characters, principal_character
from lzerosum.errors import MeshError, NotPrimitiveError, ZeroCountMismatch
from lzerosum.lfunc import rotated_Z
from lzerosum.zeros import (
    ScanConfig,
    ZeroList,
    count_zeros_argument_principle,
    density_violations,
    refine_zero,
    scan_zeros,
    snap_height,
    verify_completeness,
    zeros_up_to,
)

ZETA = principal_character(1)
CHI4 = character(4, 1)


def uniform_scan(chi, t0, t1, step, tol=1e-11):
    """Independent oracle: uniform grid, plain scalar bisection."""
    t = np.arange(t0, t1 + step / 2, step)
    z = rotated_Z(chi, t)
    out = []
    for i in np.flatnonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0):
        a, b, za = t[i], t[i + 1], z[i]
        while b - a > tol:
            m = 0.5 * (a + b)
            zm = rotated_Z(chi, m)
            if np.sign(zm) == np.sign(za):
                a, za = m, zm
            else:
                b = m
        out.append(0.5 * (a + b))
    return np.array(out)


def test_first_zeta_zeros():
    zl = scan_zeros(ZETA, 0, 30)
    assert len(zl) == 3
    ref = [float(mpmath.zetazero(k).imag) for k in (1, 2, 3)]
    assert np.max(np.abs(zl.gammas - ref)) < 2e-9
    assert np.max(np.abs(zl.gammas - [14.1347251, 21.0220396, 25.0108576])) < 1e-7
    # finer uniform grid finds the same zeros
    fine = uniform_scan(ZETA, 0, 30, step=1 / (10 * 8 * math.log(32)))
    assert np.max(np.abs(fine - zl.gammas)) < 2e-9


def test_zeta_count_to_100():
    zl = scan_zeros(ZETA, 0, 100)
    assert len(zl) == 29
    assert count_zeros_argument_principle(ZETA, 100) == 29
    assert count_zeros_argument_principle(ZETA, 14) == 0


def test_chi4_lowest_zero():
    zl = scan_zeros(CHI4, 0, 15)
    fine = uniform_scan(CHI4, 0, 15, step=0.002)
    assert len(fine) == len(zl)
    assert np.max(np.abs(fine - zl.gammas)) < 2e-9
    assert abs(zl.gammas[0] - 6.02) < 5e-3


def test_mod3_two_method_agreement():
    chi = character(3, 1)
    assert count_zeros_argument_principle(chi, 7) == len(scan_zeros(chi, 0, 7))


def test_refine_zero_examples():
    rec = refine_zero(ZETA, (14.1, 14.2), 1e-9)
    assert abs(rec.gamma - 14.134725142) < 1e-9
    assert rec.residual_halfwidth <= 1e-9
    assert rec.z_sign_left == -rec.z_sign_right
    with pytest.raises(ValueError):
        refine_zero(ZETA, (14.2, 14.3))
    loose = refine_zero(ZETA, (14.1, 14.2), 1e-6)
    tight = refine_zero(ZETA, (14.1, 14.2), 1e-12)
    assert abs(loose.gamma - tight.gamma) <= 1e-6


def test_record_invariants():
    for chi in [ZETA, CHI4, character(5, 1), character(12, 3)]:
        zl = scan_zeros(chi, 0, 80)
        assert np.all(np.diff(zl.gammas) > 0)
        for r in zl.zeros:
            assert r.residual_halfwidth <= 1e-9
            assert r.z_sign_left * r.z_sign_right < 0
            a, b = r.bracket
            assert a <= r.gamma <= b
            zg = abs(rotated_Z(chi, r.gamma, target=1e-12))
            assert zg <= abs(r.z_left) and zg <= abs(r.z_right)


def test_grid_step_follows_density():
    for q in [1, 7]:
        t = zmod._grid(q, 0.0, 300.0, 8.0)
        steps = np.diff(t)
        limit = 1.0 / (8.0 * np.log(q * (t[:-1] + 2)))
        assert np.all(steps <= limit + 1e-12)


def test_verify_consistent_and_empty():
    zl = scan_zeros(ZETA, 0, 60)
    cert = verify_completeness(zl)
    assert cert.certified_count == len(zl) == len(cert.zeros)
    empty = verify_completeness(ZeroList(ZETA, 5.0, 5.0, ()))
    assert empty.certified_count == 0 and len(empty) == 0
    assert len(scan_zeros(ZETA, 5.0, 5.0)) == 0


def test_verify_localizes_deleted_zero():
    zl = scan_zeros(ZETA, 0, 60)
    missing = zl.zeros[6]
    broken = ZeroList(ZETA, zl.t_min, zl.t_max, zl.zeros[:6] + zl.zeros[7:])
    with pytest.raises(ZeroCountMismatch) as exc:
        verify_completeness(broken)
    a, b = exc.value.interval
    assert a < missing.gamma <= b
    # the interval is bounded by gap midpoints of the surviving list, so it
    # holds at most one surviving zero besides the gap
    g = broken.gammas
    assert np.sum((g > a) & (g <= b)) <= 1
    assert b - a < zl.zeros[8].gamma - zl.zeros[4].gamma
    assert exc.value.expected == exc.value.found + 1


def test_verify_with_positive_tmin():
    zl = scan_zeros(CHI4, 20.0, 60.0)
    assert verify_completeness(zl).certified_count == len(zl)


def test_certified_count_must_match():
    zl = scan_zeros(ZETA, 0, 30)
    with pytest.raises(ValueError):
        ZeroList(ZETA, 0, 30, zl.zeros, certified_count=2)


def test_conjugate_character_zeros_are_reflections():
    chi = character(5, 1)  # complex, odd
    assert not chi.is_real
    T = 60.0
    ours = scan_zeros(chi.conj(), 0, T).gammas
    # zeros of chi below the real axis, found on a uniform grid at negative heights
    neg = -uniform_scan(chi, -T, 0.0, step=0.005)[::-1]
    assert len(neg) == len(ours)
    assert np.max(np.abs(neg - ours)) < 2e-9


def test_real_character_zero_lists_coincide():
    chi = character(5, 2)
    assert chi.is_real and chi.conj() == chi
    a = scan_zeros(chi, 0, 50).gammas
    b = scan_zeros(chi.conj(), 0, 50).gammas
    assert np.array_equal(a, b)


def test_density_alarm_quiet():
    for chi in [ZETA, character(7, 1), character(12, 3)]:
        zl = scan_zeros(chi, 0, 200)
        assert density_violations(zl) == []


def test_snap_height():
    zl = scan_zeros(ZETA, 0, 40)
    g = zl.gammas
    Ts = snap_height(zl, 22.0)
    assert Ts == pytest.approx(0.5 * (g[1] + g[2]))
    with pytest.raises(ValueError):
        snap_height(zl, 39.9)
    Ts, cert = zeros_up_to(ZETA, 100.0)
    assert g[0] < Ts and len(cert) == 29 and cert.certified_count == 29
    assert cert.t_max == Ts


def test_scan_config_and_primitivity():
    with pytest.raises(ValueError):
        ScanConfig(grid_factor=3)
    with pytest.raises(NotPrimitiveError):
        scan_zeros(induce(CHI4, 8), 0, 10)
    with pytest.raises(NotPrimitiveError):
        count_zeros_argument_principle(principal_character(6), 10)


def test_mesh_failure_raises():
    with pytest.raises(MeshError):
        count_zeros_argument_principle(ZETA, 30, max_jump=1e-6, min_step=1e-3)


class _FakeZ:
    def __init__(self, f):
        self.f = f

    def __call__(self, chi, t, target=1e-10, check=True):
        t = np.asarray(t, float)
        out = self.f(t)
        return float(out) if out.ndim == 0 else out


def test_double_zero_is_refused(monkeypatch):
    monkeypatch.setattr(zmod, "rotated_Z", _FakeZ(lambda t: (t - 5.0) ** 2 + 1e-9))
    with pytest.raises(MeshError):
        scan_zeros(ZETA, 0, 10)


def test_close_pair_found_by_local_refinement(monkeypatch):
    # two zeros 0.02 apart between coarse grid points: no sign change on the coarse grid
    a, b = 5.05, 5.07
    monkeypatch.setattr(zmod, "rotated_Z", _FakeZ(lambda t: (t - a) * (t - b)))
    t = zmod._grid(1, 0.0, 10.0, 8.0)
    z = (t - a) * (t - b)
    assert not np.any(np.sign(z[:-1]) * np.sign(z[1:]) < 0)
    zl = scan_zeros(ZETA, 0, 10)
    assert np.allclose(zl.gammas, [a, b], atol=1e-9)

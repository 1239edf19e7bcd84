"""Numerically hot inner loops: Mattis-Bardeen conductivity integrals and the
per-frequency ABCD chain of the loaded line.

All kernels are JIT-compiled with numba when it is importable; set the
environment variable ``TWPASIM_NUMBA=0`` before import to force the plain
interpreted fallback (same source, no decoration). ``benchmarks/bench_kernels.py``
times the two paths against each other.
"""

import cmath
import math
import os

import numpy as np

try:
    from numba import njit as _numba_njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba_njit = None

NUMBA_ENABLED = _numba_njit is not None and os.environ.get("TWPASIM_NUMBA", "1") != "0"


def _jit(func):
    if NUMBA_ENABLED:
        return _numba_njit(cache=True)(func)
    return func


@_jit
def _fermi(x):
    # overflow-safe Fermi-Dirac occupation 1/(exp(x)+1)
    if x > 40.0:
        return math.exp(-x)
    if x < -40.0:
        return 1.0
    return 1.0 / (math.exp(x) + 1.0)


@_jit
def _mb_integrand(fid, x, w, tt, eps):
    """Integrands of the two conductivity integrals, selected by ``fid``.

    1: sigma1 with the substitution E = cosh(x) (removes the sqrt(E^2-1) root)
    2: sigma2 upper piece, E = cos(x) (removes the sqrt(1-E^2) root)
    3: sigma2 lower piece, E = cosh(x) - w (removes the sqrt((E+w)^2-1) root)
    4: sigma1 on the raw variable with +eps regularization under both roots
    5: sigma2 on the raw variable with +eps regularization under both roots

    w is the photon energy and tt the temperature, both in units of the gap.
    tt <= 0 selects the exact zero-temperature occupation factors.
    """
    if fid == 1:
        e = math.cosh(x)
        ep = e + w
        if tt <= 0.0:
            df = 0.0
        else:
            df = _fermi(e / tt) - _fermi(ep / tt)
        return df * (e * ep + 1.0) / math.sqrt(ep * ep - 1.0)
    if fid == 2:
        e = math.cos(x)
        ep = e + w
        if tt <= 0.0:
            occ = 1.0
        else:
            occ = 1.0 - 2.0 * _fermi(ep / tt)
        return occ * (e * ep + 1.0) / math.sqrt(ep * ep - 1.0)
    if fid == 3:
        ep = math.cosh(x)
        e = ep - w
        if tt <= 0.0:
            occ = 1.0
        else:
            occ = 1.0 - 2.0 * _fermi(ep / tt)
        return occ * (e * ep + 1.0) / math.sqrt(1.0 - e * e)
    if fid == 4:
        e = x
        ep = e + w
        if tt <= 0.0:
            df = 0.0
        else:
            df = _fermi(e / tt) - _fermi(ep / tt)
        den = math.sqrt(e * e - 1.0 + eps) * math.sqrt(ep * ep - 1.0 + eps)
        return df * (e * ep + 1.0) / den
    e = x
    ep = e + w
    if tt <= 0.0:
        occ = 1.0
    else:
        occ = 1.0 - 2.0 * _fermi(ep / tt)
    den = math.sqrt(1.0 - e * e + eps) * math.sqrt(ep * ep - 1.0 + eps)
    return occ * (e * ep + 1.0) / den


@_jit
def _adaptive_simpson(fid, w, tt, eps, a, b, rtol, max_depth):
    """Adaptive Simpson quadrature by interval bisection.

    A 32-panel composite pass sets the absolute tolerance scale; panels are
    then bisected until the Richardson error estimate meets the tolerance
    apportioned by panel width. Panels at max_depth (or on stack exhaustion)
    are accepted with their extrapolated value.
    """
    span = b - a
    if span <= 0.0:
        return 0.0

    n_seed = 32
    cap = 4096
    st_a = np.empty(cap)
    st_b = np.empty(cap)
    st_fa = np.empty(cap)
    st_fm = np.empty(cap)
    st_fb = np.empty(cap)
    st_s = np.empty(cap)
    st_d = np.empty(cap, dtype=np.int64)

    h = span / n_seed
    coarse = 0.0
    for i in range(n_seed):
        x0 = a + i * h
        x2 = b if i == n_seed - 1 else x0 + h
        x1 = 0.5 * (x0 + x2)
        f0 = _mb_integrand(fid, x0, w, tt, eps)
        f1 = _mb_integrand(fid, x1, w, tt, eps)
        f2 = _mb_integrand(fid, x2, w, tt, eps)
        s = (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)
        st_a[i] = x0
        st_b[i] = x2
        st_fa[i] = f0
        st_fm[i] = f1
        st_fb[i] = f2
        st_s[i] = s
        st_d[i] = 0
        coarse += s
    atol = abs(coarse) * rtol + 1e-300

    sp = n_seed
    total = 0.0
    while sp > 0:
        sp -= 1
        pa = st_a[sp]
        pb = st_b[sp]
        fa = st_fa[sp]
        fm = st_fm[sp]
        fb = st_fb[sp]
        s = st_s[sp]
        d = st_d[sp]
        pm = 0.5 * (pa + pb)
        xlm = 0.5 * (pa + pm)
        xrm = 0.5 * (pm + pb)
        flm = _mb_integrand(fid, xlm, w, tt, eps)
        frm = _mb_integrand(fid, xrm, w, tt, eps)
        sl = (pm - pa) / 6.0 * (fa + 4.0 * flm + fm)
        sr = (pb - pm) / 6.0 * (fm + 4.0 * frm + fb)
        err = sl + sr - s
        if abs(err) <= 15.0 * atol * (pb - pa) / span or d >= max_depth or sp >= cap - 2:
            total += sl + sr + err / 15.0
        else:
            st_a[sp] = pa
            st_b[sp] = pm
            st_fa[sp] = fa
            st_fm[sp] = flm
            st_fb[sp] = fm
            st_s[sp] = sl
            st_d[sp] = d + 1
            sp += 1
            st_a[sp] = pm
            st_b[sp] = pb
            st_fa[sp] = fm
            st_fm[sp] = frm
            st_fb[sp] = fb
            st_s[sp] = sr
            st_d[sp] = d + 1
            sp += 1
    return total


@_jit
def sigma1_sub(w, tt, rtol):
    """sigma1/sigma_n for w < 2 via the cosh substitution.

    The quasiparticle integral runs from the gap edge up to the energy where
    the thermal occupation difference is below exp(-30).
    """
    e_max = 1.0 + max(30.0 * tt, 10.0 * w)
    u_max = math.acosh(e_max)
    val = _adaptive_simpson(1, w, tt, 0.0, 0.0, u_max, rtol, 48)
    return 2.0 / w * val


@_jit
def sigma2_sub(w, tt, rtol):
    """sigma2/sigma_n for w < 2, interval split at its midpoint so each half
    carries one inverse-square-root endpoint, removed by substitution."""
    mid = 1.0 - 0.5 * w
    theta_max = math.acos(mid)
    v_max = math.acosh(mid + w)
    upper = _adaptive_simpson(2, w, tt, 0.0, 0.0, theta_max, rtol, 48)
    lower = _adaptive_simpson(3, w, tt, 0.0, 0.0, v_max, rtol, 48)
    return (upper + lower) / w


@_jit
def sigma1_reg(w, tt, eps, rtol):
    """Cross-check mode: sigma1/sigma_n with +eps regularization under the roots."""
    e_max = 1.0 + max(30.0 * tt, 10.0 * w)
    return 2.0 / w * _adaptive_simpson(4, w, tt, eps, 1.0, e_max, rtol, 52)


@_jit
def sigma2_reg(w, tt, eps, rtol):
    """Cross-check mode: sigma2/sigma_n with +eps regularization under the roots."""
    return _adaptive_simpson(5, w, tt, eps, 1.0 - w, 1.0, rtol, 52) / w


@_jit
def abcd_chain_s21(gamma, z0, beta, d, n_stubs, l0, la, n_cells, z_env):
    """S21 of the full device at one frequency.

    The unit cell is a leading half segment followed by ``n_stubs`` pairs of
    (shunt stub, full segment); stub lengths follow a one-period sinusoid.
    The cell is raised to ``n_cells`` by repeated squaring.

    gamma/z0 are the line's propagation constant and characteristic impedance;
    ``beta`` is the phase constant used inside the stub tan() (complex dtype,
    imaginary part zero in the default real-beta mode).
    """
    gd = gamma * d
    ch = cmath.cosh(gd)
    sh = cmath.sinh(gd)
    lb = z0 * sh
    lc = sh / z0
    gh = gamma * (0.5 * d)
    ca = cmath.cosh(gh)
    cb = z0 * cmath.sinh(gh)
    cc = cmath.sinh(gh) / z0
    cd = ca

    two_over_z0 = 2.0 / z0
    for i in range(1, n_stubs + 1):
        ls = l0 + la * math.sin(2.0 * math.pi * i / n_stubs)
        y = 1j * two_over_z0 * cmath.tan(beta * ls)
        # cell := cell @ stub, stub = [[1, 0], [y, 1]]
        ca = ca + cb * y
        cc = cc + cd * y
        # cell := cell @ line(d)
        na = ca * ch + cb * lc
        nb = ca * lb + cb * ch
        nc = cc * ch + cd * lc
        nd = cc * lb + cd * ch
        ca = na
        cb = nb
        cc = nc
        cd = nd

    # cell ** n_cells by repeated squaring
    ra = 1.0 + 0.0j
    rb = 0.0j
    rc = 0.0j
    rd = 1.0 + 0.0j
    ma = ca
    mb = cb
    mc = cc
    md = cd
    n = n_cells
    while n > 0:
        if n & 1:
            ta = ra * ma + rb * mc
            tb = ra * mb + rb * md
            tc = rc * ma + rd * mc
            td = rc * mb + rd * md
            ra = ta
            rb = tb
            rc = tc
            rd = td
        n >>= 1
        if n > 0:
            ta = ma * ma + mb * mc
            tb = ma * mb + mb * md
            tc = mc * ma + md * mc
            td = mc * mb + md * md
            ma = ta
            mb = tb
            mc = tc
            md = td

    return 2.0 / (ra + rb / z_env + rc * z_env + rd)

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Bessel kernels, a line-for-line port of ``_pykernels``."""
from libc.math cimport sqrt, fabs, cos, sin, exp, log, M_PI

NAME = "compiled"

cdef double EPS = 2.220446049250313e-16
cdef double EULER_GAMMA = 0.5772156649015329
cdef double J_SERIES_MAX = 5.0
cdef double J_HANKEL_MIN = 50.0
cdef double K_SERIES_MAX = 2.0
cdef double K_ASYMP_MIN = 25.0


cdef inline double _hankel_start(int l) nogil:
    cdef double h = 1.5 * l * l
    return h if h > J_HANKEL_MIN else J_HANKEL_MIN


cdef double _j_series(int l, double x, double* err) nogil:
    cdef double q = 0.25 * x * x
    cdef double t = 1.0, s, tmax
    cdef int i, k = 0
    for i in range(1, l + 1):
        t *= 0.5 * x / i
    s = t
    tmax = fabs(t)
    while True:
        k += 1
        t *= -q / (k * (k + l))
        s += t
        if fabs(t) > tmax:
            tmax = fabs(t)
        if fabs(t) <= EPS * 0.1 * fabs(s) or t == 0.0:
            break
    err[0] = 2.0 * EPS * tmax * sqrt(k + 1.0) + fabs(t)
    return s


cdef double _j_hankel(int l, double x, double* err) nogil:
    cdef double mu = 4.0 * l * l
    cdef double a = 1.0, p = 1.0, q = 0.0, last = 1.0, tk, chi, amp
    cdef int k = 0
    while k < 200:
        k += 1
        tk = a * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x)
        if fabs(tk) > fabs(a) and k > 1:
            break
        a = tk
        last = fabs(a)
        if k % 4 == 1:
            q += a
        elif k % 4 == 2:
            p -= a
        elif k % 4 == 3:
            q -= a
        else:
            p += a
        if last < 1e-17:
            break
    chi = x - (2 * l + 1) * M_PI / 4.0
    amp = sqrt(2.0 / (M_PI * x))
    err[0] = amp * (last + 8.0 * EPS * (1.0 + x * EPS))
    return amp * (p * cos(chi) - q * sin(chi))


cdef int _miller_start(int l, double x) nogil:
    cdef int n = l + 1
    cdef int nx = <int>x + 1
    cdef int m
    if nx > n:
        n = nx
    m = n + 20 + <int>sqrt(40.0 * n)
    return m + (m & 1)


cdef int _j_miller(int l, double x, double* out) nogil:
    # out[0..2] = J_{l-1}, J_l, J_{l+1}; returns the start order
    cdef int m = _miller_start(l, x)
    cdef double jp = 0.0, jc = 1e-30, jm
    cdef double total = 2.0 * jc
    cdef double lo = 0.0, mid = 0.0, hi = 0.0
    cdef int n, idx
    if m == l + 1:
        hi = jc
    for n in range(m, 0, -1):
        jm = (2.0 * n / x) * jc - jp
        jp = jc
        jc = jm
        idx = n - 1
        if fabs(jc) > 1e250:
            jc *= 1e-250
            jp *= 1e-250
            total *= 1e-250
            lo *= 1e-250
            mid *= 1e-250
            hi *= 1e-250
        if idx == l + 1:
            hi = jc
        elif idx == l:
            mid = jc
        elif idx == l - 1:
            lo = jc
        if idx & 1 == 0:
            if idx == 0:
                total += jc
            else:
                total += 2.0 * jc
    out[0] = lo / total
    out[1] = mid / total
    out[2] = hi / total
    return m


cdef double _jn(int l, double x, double* err) nogil:
    cdef double out[3]
    cdef int m
    if x == 0.0:
        err[0] = 0.0
        return 1.0 if l == 0 else 0.0
    if x <= J_SERIES_MAX:
        return _j_series(l, x, err)
    if x >= _hankel_start(l):
        return _j_hankel(l, x, err)
    if l == 0:
        m = _j_miller(1, x, out)
        err[0] = 4.0 * EPS * sqrt(<double>m) * (fabs(out[0]) if fabs(out[0]) > 1.0 else 1.0)
        return out[0]
    m = _j_miller(l, x, out)
    err[0] = 4.0 * EPS * sqrt(<double>m) * (fabs(out[1]) if fabs(out[1]) > 1.0 else 1.0)
    return out[1]


cdef void _j_triple_pos(int l, double x, double* out) nogil:
    cdef double e
    if x == 0.0:
        out[0] = 1.0 if l == 1 else 0.0
        out[1] = 0.0
        out[2] = 0.0
        return
    if x <= J_SERIES_MAX:
        out[0] = _j_series(l - 1, x, &e)
        out[1] = _j_series(l, x, &e)
        out[2] = _j_series(l + 1, x, &e)
        return
    if x >= _hankel_start(l + 1):
        out[0] = _j_hankel(l - 1, x, &e)
        out[1] = _j_hankel(l, x, &e)
        out[2] = _j_hankel(l + 1, x, &e)
        return
    _j_miller(l, x, out)


cdef void _jn_triple(int l, double x, double* out) nogil:
    cdef double t[3]
    if l == 0:
        _j_triple_pos(1, x, t)
        out[0] = -t[1]
        out[1] = t[0]
        out[2] = t[1]
        return
    _j_triple_pos(l, x, out)


cdef void _k01_series(double x, double* k0, double* k1) nogil:
    cdef double q = 0.25 * x * x
    cdef double lg = log(0.5 * x) + EULER_GAMMA
    cdef double t0 = 1.0, t1 = 1.0, i0 = 1.0, i1 = 1.0
    cdef double s0 = 0.0, s1 = 1.0, h = 0.0
    cdef int k = 0
    while True:
        k += 1
        h += 1.0 / k
        t0 *= q / (<double>k * k)
        t1 *= q / (<double>k * (k + 1))
        i0 += t0
        i1 += t1
        s0 += h * t0
        s1 += (h + h + 1.0 / (k + 1)) * t1
        if t0 < EPS * 0.01 * i0 and t1 < EPS * 0.01 * i1:
            break
    i1 *= 0.5 * x
    k0[0] = -lg * i0 + s0
    k1[0] = 1.0 / x + lg * i1 - 0.25 * x * s1


cdef void _k01_cf2(double x, double* k0, double* k1) nogil:
    cdef double b = 2.0 * (1.0 + x)
    cdef double d = 1.0 / b
    cdef double h = d, delh = d
    cdef double q1 = 0.0, q2 = 1.0, a1 = 0.25
    cdef double q = a1, c = a1, a = -a1
    cdef double s = 1.0 + q * delh
    cdef double qnew, dels
    cdef int i
    for i in range(2, 20000):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if fabs(dels / s) < EPS * 0.5:
            break
    h = a1 * h
    k0[0] = sqrt(M_PI / (2.0 * x)) * exp(-x) / s
    k1[0] = k0[0] * (x + 0.5 - h) / x


cdef double _k_asymp(int nu, double x) nogil:
    cdef double mu = 4.0 * nu * nu
    cdef double a = 1.0, s = 1.0, tk
    cdef int k
    for k in range(1, 200):
        tk = a * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x)
        if fabs(tk) > fabs(a) and k > 1:
            break
        a = tk
        s += a
        if fabs(a) < 1e-17 * fabs(s):
            break
    return sqrt(M_PI / (2.0 * x)) * exp(-x) * s


cdef void _k01(double x, double* k0, double* k1) nogil:
    if x <= K_SERIES_MAX:
        _k01_series(x, k0, k1)
    elif x < K_ASYMP_MIN:
        _k01_cf2(x, k0, k1)
    else:
        k0[0] = _k_asymp(0, x)
        k1[0] = _k_asymp(1, x)


cdef void _kn_triple(int l, double x, double* out) nogil:
    cdef double k0, k1, kp, km, kc, kn
    cdef int n
    _k01(x, &k0, &k1)
    if l == 0:
        out[0] = k1
        out[1] = k0
        out[2] = k1
        return
    kp = k0
    km = k0
    kc = k1
    for n in range(1, l + 1):
        kn = km + (2.0 * n / x) * kc
        kp = km
        km = kc
        kc = kn
    out[0] = kp
    out[1] = km
    out[2] = kc


cdef double _kn(int l, double x, double* err) nogil:
    cdef double k0, k1, v, km, kc, kn
    cdef int n
    _k01(x, &k0, &k1)
    if l == 0:
        v = k0
    else:
        km = k0
        kc = k1
        for n in range(1, l):
            kn = km + (2.0 * n / x) * kc
            km = kc
            kc = kn
        v = kc
    err[0] = (8.0 + l) * EPS * fabs(v)
    return v


cdef double _dispersion_point(int l, int kind, double neff, double a, double k0,
                              double n1, double n2) nogil:
    cdef double n1s = n1 * n1, n2s = n2 * n2, ns = neff * neff
    cdef double u = a * k0 * sqrt(n1s - ns)
    cdef double w = a * k0 * sqrt(ns - n2s)
    cdef double jt[3]
    cdef double kt[3]
    cdef double r, te_a, te_b, tm_a, tm_b, te, tm
    cdef double djd, q, x1, x2, t1, t2
    _jn_triple(l, u, jt)
    _kn_triple(l, w, kt)
    if l == 0:
        r = kt[0] / kt[1]
        te_a = w * jt[2]
        te_b = u * jt[1] * r
        tm_a = n1s * w * jt[2]
        tm_b = n2s * u * jt[1] * r
        te = (te_a + te_b) / (fabs(te_a) + fabs(te_b))
        tm = (tm_a + tm_b) / (fabs(tm_a) + fabs(tm_b))
        if kind == 1:
            return te
        if kind == 2:
            return tm
        return te * tm
    djd = 0.5 * (jt[0] - jt[2])
    q = -0.5 * (kt[0] + kt[2]) / kt[1]
    x1 = djd * w + q * u * jt[1]
    x2 = n1s * djd * w + n2s * q * u * jt[1]
    t1 = u * u * w * w * x1 * x2
    t2 = (<double>l) * l * jt[1] * jt[1] * (u * u + w * w) * (n1s * w * w + n2s * u * u)
    return (t1 - t2) / (fabs(t1) + fabs(t2))


def jn(int l, double x):
    cdef double e
    cdef double v = _jn(l, x, &e)
    return v, e


def kn(int l, double x):
    cdef double e
    cdef double v = _kn(l, x, &e)
    return v, e


def jn_triple(int l, double x):
    cdef double out[3]
    _jn_triple(l, x, out)
    return out[0], out[1], out[2]


def kn_triple(int l, double x):
    cdef double out[3]
    _kn_triple(l, x, out)
    return out[0], out[1], out[2]


def jn_fill(int l, const double[::1] xs, double[::1] out):
    cdef Py_ssize_t i
    cdef double e
    with nogil:
        for i in range(xs.shape[0]):
            out[i] = _jn(l, xs[i], &e)


def kn_fill(int l, const double[::1] xs, double[::1] out):
    cdef Py_ssize_t i
    cdef double e
    with nogil:
        for i in range(xs.shape[0]):
            out[i] = _kn(l, xs[i], &e)


def dispersion_point(int l, int kind, double neff, double a, double k0,
                     double n1, double n2):
    return _dispersion_point(l, kind, neff, a, k0, n1, n2)


def dispersion_fill(int l, int kind, const double[::1] neffs, double a, double k0,
                    double n1, double n2, double[::1] out):
    cdef Py_ssize_t i
    with nogil:
        for i in range(neffs.shape[0]):
            out[i] = _dispersion_point(l, kind, neffs[i], a, k0, n1, n2)

"""Pure-Python Bessel kernels.

Reference fallback for the compiled ``_ckernels`` module; both expose the
same functions with the same semantics.  No argument validation happens
here, callers in :mod:`fibercavity.specfun` do that.
"""
import math

NAME = "python"

EPS = 2.220446049250313e-16
EULER_GAMMA = 0.5772156649015329

# regime switch-over points, fixed against the mpmath oracle
J_SERIES_MAX = 5.0
J_HANKEL_MIN = 50.0
K_SERIES_MAX = 2.0
K_ASYMP_MIN = 25.0


def _hankel_start(l):
    return max(J_HANKEL_MIN, 1.5 * l * l)


def _j_series(l, x):
    q = 0.25 * x * x
    t = 1.0
    for i in range(1, l + 1):
        t *= 0.5 * x / i
    s = t
    tmax = abs(t)
    k = 0
    while True:
        k += 1
        t *= -q / (k * (k + l))
        s += t
        if abs(t) > tmax:
            tmax = abs(t)
        if abs(t) <= EPS * 0.1 * abs(s) or t == 0.0:
            break
    err = 2.0 * EPS * tmax * (k + 1) ** 0.5 + abs(t)
    return s, err


def _j_hankel(l, x):
    mu = 4.0 * l * l
    a = 1.0
    p = 1.0
    q = 0.0
    k = 0
    last = 1.0
    while k < 200:
        k += 1
        tk = a * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(tk) > abs(a) and k > 1:
            break
        a = tk
        last = abs(a)
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
    chi = x - (2 * l + 1) * math.pi / 4.0
    amp = math.sqrt(2.0 / (math.pi * x))
    v = amp * (p * math.cos(chi) - q * math.sin(chi))
    err = amp * (last + 8.0 * EPS * (1.0 + x * EPS))
    return v, err


def _miller_start(l, x):
    n = max(l + 1, int(x) + 1)
    m = n + 20 + int(math.sqrt(40.0 * n))
    return m + (m & 1)


def _j_miller(l, x):
    """Return J_{l-1}, J_l, J_{l+1} by backward recurrence (l >= 1)."""
    m = _miller_start(l, x)
    jp = 0.0
    jc = 1e-30
    total = 2.0 * jc
    lo = mid = hi = 0.0
    if m == l + 1:
        hi = jc
    for n in range(m, 0, -1):
        jm = (2.0 * n / x) * jc - jp
        jp = jc
        jc = jm
        idx = n - 1
        if abs(jc) > 1e250:
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
            total += jc if idx == 0 else 2.0 * jc
    return lo / total, mid / total, hi / total, m


def jn_triple(l, x):
    """J_{l-1}(x), J_l(x), J_{l+1}(x) for l >= 0, using J_{-1} = -J_1."""
    if l == 0:
        j0, j1, _, _ = _j_triple_pos(1, x)
        return -j1, j0, j1
    a, b, c, _ = _j_triple_pos(l, x)
    return a, b, c


def _j_triple_pos(l, x):
    if x == 0.0:
        return (1.0 if l == 1 else 0.0), 0.0, 0.0, 0.0
    if x <= J_SERIES_MAX:
        a, ea = _j_series(l - 1, x)
        b, eb = _j_series(l, x)
        c, _ = _j_series(l + 1, x)
        return a, b, c, eb
    if x >= _hankel_start(l + 1):
        a, _ = _j_hankel(l - 1, x)
        b, eb = _j_hankel(l, x)
        c, _ = _j_hankel(l + 1, x)
        return a, b, c, eb
    a, b, c, m = _j_miller(l, x)
    return a, b, c, 4.0 * EPS * math.sqrt(m) * max(1.0, abs(b))


def jn(l, x):
    """Return (J_l(x), error estimate) for integer l >= 0, x >= 0."""
    if x == 0.0:
        return (1.0 if l == 0 else 0.0), 0.0
    if x <= J_SERIES_MAX:
        return _j_series(l, x)
    if x >= _hankel_start(l):
        return _j_hankel(l, x)
    if l == 0:
        b, _, _, m = _j_miller(1, x)
        return b, 4.0 * EPS * math.sqrt(m) * max(1.0, abs(b))
    _, b, _, m = _j_miller(l, x)
    return b, 4.0 * EPS * math.sqrt(m) * max(1.0, abs(b))


def _k01_series(x):
    q = 0.25 * x * x
    lg = math.log(0.5 * x) + EULER_GAMMA
    # I0, I1 and the harmonic-number sums
    t0 = 1.0
    t1 = 1.0
    i0 = 1.0
    i1 = 1.0
    s0 = 0.0
    s1 = 1.0  # H_0 + H_1
    h = 0.0
    k = 0
    while True:
        k += 1
        h += 1.0 / k
        t0 *= q / (k * k)
        t1 *= q / (k * (k + 1))
        i0 += t0
        i1 += t1
        s0 += h * t0
        s1 += (h + h + 1.0 / (k + 1)) * t1
        if t0 < EPS * 0.01 * i0 and t1 < EPS * 0.01 * i1:
            break
    i1 *= 0.5 * x
    k0 = -lg * i0 + s0
    k1 = 1.0 / x + lg * i1 - 0.25 * x * s1
    return k0, k1


def _k01_cf2(x):
    # Steed's method on the Temme continued fraction, order zero
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
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
        if abs(dels / s) < EPS * 0.5:
            break
    h = a1 * h
    k0 = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def _k_asymp(nu, x):
    mu = 4.0 * nu * nu
    a = 1.0
    s = 1.0
    for k in range(1, 200):
        tk = a * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(tk) > abs(a) and k > 1:
            break
        a = tk
        s += a
        if abs(a) < 1e-17 * abs(s):
            break
    return math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) * s


def _k01(x):
    if x <= K_SERIES_MAX:
        return _k01_series(x)
    if x < K_ASYMP_MIN:
        return _k01_cf2(x)
    return _k_asymp(0, x), _k_asymp(1, x)


def kn_triple(l, x):
    """K_{l-1}(x), K_l(x), K_{l+1}(x) for l >= 0, using K_{-1} = K_1."""
    k0, k1 = _k01(x)
    if l == 0:
        return k1, k0, k1
    kp, km, kc = k0, k0, k1
    for n in range(1, l + 1):
        kp, km, kc = km, kc, km + (2.0 * n / x) * kc
    return kp, km, kc


def kn(l, x):
    """Return (K_l(x), error estimate) for integer l >= 0, x > 0."""
    k0, k1 = _k01(x)
    if l == 0:
        v = k0
    else:
        km, kc = k0, k1
        for n in range(1, l):
            km, kc = kc, km + (2.0 * n / x) * kc
        v = kc
    return v, (8.0 + l) * EPS * abs(v)


def jn_fill(l, xs, out):
    for i in range(len(xs)):
        out[i] = jn(l, xs[i])[0]


def kn_fill(l, xs, out):
    for i in range(len(xs)):
        out[i] = kn(l, xs[i])[0]


def dispersion_point(l, kind, neff, a, k0, n1, n2):
    """Scaled, regularized dispersion residual at one trial index.

    ``kind`` 0 is the hybrid determinant, 1 the TE factor, 2 the TM factor.
    The value lies in [-1, 1] and is continuous between guided roots.
    """
    n1s = n1 * n1
    n2s = n2 * n2
    ns = neff * neff
    u = a * k0 * math.sqrt(n1s - ns)
    w = a * k0 * math.sqrt(ns - n2s)
    jm, j, jp = jn_triple(l, u)
    km, k, kp = kn_triple(l, w)
    if kind == 1 or kind == 2 or l == 0:
        r = km / k if l == 0 else 0.0
        if l == 0:
            te_a = w * jp
            te_b = u * j * r
            tm_a = n1s * w * jp
            tm_b = n2s * u * j * r
            te = (te_a + te_b) / (abs(te_a) + abs(te_b))
            tm = (tm_a + tm_b) / (abs(tm_a) + abs(tm_b))
            if kind == 1:
                return te
            if kind == 2:
                return tm
            return te * tm
    djd = 0.5 * (jm - jp)
    q = -0.5 * (km + kp) / k
    x1 = djd * w + q * u * j
    x2 = n1s * djd * w + n2s * q * u * j
    t1 = u * u * w * w * x1 * x2
    t2 = l * l * j * j * (u * u + w * w) * (n1s * w * w + n2s * u * u)
    return (t1 - t2) / (abs(t1) + abs(t2))


def dispersion_fill(l, kind, neffs, a, k0, n1, n2, out):
    for i in range(len(neffs)):
        out[i] = dispersion_point(l, kind, neffs[i], a, k0, n1, n2)

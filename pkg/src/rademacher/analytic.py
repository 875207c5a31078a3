"""Modular functions, cycle integrals of j_m and numeric identity checks.

Double precision is used for evaluating q-series at points well inside the
upper half-plane.  Cycle integrals are different: along a closed geodesic
``j_m`` reaches size ``exp(2 pi m Y)`` while the integral is of size
``m^(5/4)``, so the quadrature runs in mpmath with a working precision
chosen from the maximal reduced height ``Y``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import mpmath

from .errors import DomainTooLow, NonPositiveImaginaryPart, PoleProximity, TruncationTooSmall
from .modular_group import Mat2, fixed_points, require_normalized

TWO_PI_I = 2j * math.pi


# -- exact q-expansions ----------------------------------------------------

@lru_cache(maxsize=8)
def divisor_sums(k: int, M: int) -> tuple[int, ...]:
    """``sigma_k(n)`` for ``0 <= n <= M`` (index 0 unused)."""
    s = [0] * (M + 1)
    for d in range(1, M + 1):
        dk = d ** k
        for n in range(d, M + 1, d):
            s[n] += dk
    return tuple(s)


def _mul(a: Sequence[int], b: Sequence[int], M: int) -> list[int]:
    out = [0] * (M + 1)
    for i, ai in enumerate(a[:M + 1]):
        if ai:
            for j, bj in enumerate(b[:M + 1 - i]):
                out[i + j] += ai * bj
    return out


def _inv(a: Sequence[int], M: int) -> list[int]:
    """Inverse of an integer series with constant term 1."""
    assert a[0] == 1
    out = [0] * (M + 1)
    out[0] = 1
    for n in range(1, M + 1):
        out[n] = -sum(a[k] * out[n - k] for k in range(1, min(n, len(a) - 1) + 1))
    return out


@lru_cache(maxsize=8)
def e4_coeffs(M: int) -> tuple[int, ...]:
    s3 = divisor_sums(3, M)
    return (1,) + tuple(240 * s3[n] for n in range(1, M + 1))


@lru_cache(maxsize=8)
def e6_coeffs(M: int) -> tuple[int, ...]:
    s5 = divisor_sums(5, M)
    return (1,) + tuple(-504 * s5[n] for n in range(1, M + 1))


@lru_cache(maxsize=8)
def delta_coeffs(M: int) -> tuple[int, ...]:
    """Coefficients of ``prod (1 - q^n)^24``, so that ``Delta = q * (...)``."""
    eta = [0] * (M + 1)
    # Euler's pentagonal number theorem
    k = 0
    while True:
        for g in ((k * (3 * k - 1)) // 2, (k * (3 * k + 1)) // 2):
            if g <= M:
                eta[g] = (-1) ** k
        if (k * (3 * k - 1)) // 2 > M:
            break
        k += 1
    out, base, e = [1] + [0] * M, eta, 24
    while e:
        if e & 1:
            out = _mul(out, base, M)
        base = _mul(base, base, M)
        e >>= 1
    return tuple(out)


@lru_cache(maxsize=8)
def j_coeffs(M: int) -> tuple[int, ...]:
    """``c[k]`` is the coefficient of ``q^(k-1)`` in ``j``, for ``0 <= k <= M+1``."""
    N = M + 1
    e4 = e4_coeffs(N)
    num = _mul(_mul(e4, e4, N), e4, N)
    return tuple(_mul(num, _inv(delta_coeffs(N), N), N))


def _laurent_power(c: Sequence[int], k: int, N: int) -> list[int]:
    """Coefficients of ``(q j)^k`` up to ``q^N``."""
    out = [1] + [0] * N
    for _ in range(k):
        out = _mul(out, c, N)
    return out


def faber_polynomial(m: int, M: int) -> list[int]:
    """Integer coefficients ``[p_0, ..., p_m]`` with ``sum p_k j^k = q^-m + O(q)``.

    Found by peeling: start from ``j^m`` and subtract multiples of lower
    powers of ``j`` until the principal part is ``q^-m`` and the constant
    term vanishes.
    """
    if M < m + 1:
        raise TruncationTooSmall(f"need M >= m + 1, got M = {M}, m = {m}")
    if m == 0:
        return [1]
    c = j_coeffs(M + m)
    # series of j^k stored as coefficients of q^(i-k)
    pows = {k: _laurent_power(c, k, m + M) for k in range(m + 1)}
    cur = [0] * (2 * m + M + 1)  # index i -> q^(i - m)
    for i, v in enumerate(pows[m]):
        cur[i] += v
    poly = [0] * (m + 1)
    poly[m] = 1
    for k in range(m - 1, -1, -1):
        coef = cur[m - k]  # coefficient of q^-k
        if coef:
            poly[k] -= coef
            for i, v in enumerate(pows[k]):
                idx = i - k + m
                if idx < len(cur):
                    cur[idx] -= coef * v
    return poly


def faber_qexp(m: int, M: int) -> dict[int, int]:
    """q-expansion ``{n: coeff}`` of ``j_m`` for ``-m <= n <= M``."""
    poly = faber_polynomial(m, M)
    c = j_coeffs(M + m)
    out: dict[int, int] = {}
    for k, pk in enumerate(poly):
        if not pk:
            continue
        for i, v in enumerate(_laurent_power(c, k, m + M)):
            n = i - k
            if n <= M:
                out[n] = out.get(n, 0) + pk * v
    return {n: out.get(n, 0) for n in range(-m, M + 1)}


@dataclass(frozen=True)
class QSeries:
    """Truncated q-series ``sum coeffs[n] q^(n + offset)``."""

    coeffs: tuple
    offset: int = 0

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1 + self.offset

    def __call__(self, z: complex) -> complex:
        _check_upper(z)
        q = cmath.exp(TWO_PI_I * z)
        acc = 0j
        for a in reversed(self.coeffs):
            acc = acc * q + a
        return acc * q ** self.offset


def _check_upper(z):
    if complex(z).imag <= 0:
        raise NonPositiveImaginaryPart(f"Im(z) must be positive, got {z}")


# -- double-precision evaluation -------------------------------------------

def e2_series(M: int) -> QSeries:
    s1 = divisor_sums(1, M)
    return QSeries((1,) + tuple(-24 * s1[n] for n in range(1, M + 1)))


def jm_from_j(jval, mmax: int, c: Sequence[int]):
    """``[j_0, ..., j_mmax]`` at a point where ``j = jval``.

    Uses ``sum j_m(tau) p^m = -p j'(p) / (p j(p) - j(tau) p)`` with ``p = e(z)``.
    """
    num = [(1 - k) * c[k] for k in range(mmax + 1)]
    den = [c[k] for k in range(mmax + 1)]
    if mmax >= 1:
        den[1] = c[1] - jval
    h = [num[0]]
    for n in range(1, mmax + 1):
        acc = num[n]
        for k in range(1, n + 1):
            acc -= den[k] * h[n - k]
        h.append(acc)
    return h


def eval_modular(fn: str, z: complex, M: int = 100, m: int = 0) -> complex:
    """Evaluate ``fn`` in {E2, E2star, Delta, logDelta, eta, j, jprime, j_m}."""
    _check_upper(z)
    z = complex(z)
    q = cmath.exp(TWO_PI_I * z)
    if fn == "E2":
        return e2_series(M)(z)
    if fn == "E2star":
        return e2_series(M)(z) - 3 / (math.pi * z.imag)
    if fn == "Delta":
        return q * QSeries(delta_coeffs(M))(z)
    if fn == "logDelta":
        return TWO_PI_I * z + 24 * sum(cmath.log(1 - q ** n) for n in range(1, M + 1))
    if fn == "eta":
        return cmath.exp(TWO_PI_I * z / 24) * math.prod(1 - q ** n for n in range(1, M + 1))
    e4 = QSeries(e4_coeffs(M))(z)
    delta = q * QSeries(delta_coeffs(M))(z)
    if fn == "j":
        return e4 ** 3 / delta
    if fn == "jprime":
        # q dj/dq = -E4^2 E6 / Delta
        return -e4 * e4 * QSeries(e6_coeffs(M))(z) / delta
    if fn in ("j_m", "jm"):
        return jm_from_j(e4 ** 3 / delta, m, j_coeffs(max(m, 1)))[m]
    raise ValueError(f"unknown modular function {fn!r}")


# -- high-precision j on the fundamental domain ----------------------------

def reduce_to_fundamental(z):
    """Move ``z`` into the standard fundamental domain (mpmath or complex)."""
    while True:
        x = z.real - mpmath.floor(z.real + mpmath.mpf(1) / 2)
        z = mpmath.mpc(x, z.imag)
        if abs(z) < 1:
            z = -1 / z
        else:
            return z


def _j_mp(z, dps: int):
    """``j(z)`` for ``z`` in the fundamental domain at the current precision."""
    y = float(z.imag)
    K = int(dps * math.log(10) / (2 * math.pi * y)) + 8
    q = mpmath.exp(2j * mpmath.pi * z)
    e4 = e4_coeffs(K)
    dl = delta_coeffs(K)
    E4 = mpmath.polyval(list(reversed(e4)), q)
    D = mpmath.polyval(list(reversed(dl)), q)
    return E4 ** 3 / (q * D)


@dataclass
class CycleIntegralTable:
    gamma: Mat2
    values: list
    nodes: int
    method: str
    dps: int
    max_height: float
    error_estimate: list = field(default_factory=list)


def _geodesic_setup(gamma: Mat2):
    w, wp = fixed_points(gamma)
    xi = gamma.c * w + gamma.d
    return w.to_mpf(mpmath.mp.dps + 10), wp.to_mpf(mpmath.mp.dps + 10), xi.to_mpf(mpmath.mp.dps + 10)


def _tau(t, w, wp):
    e = 1j * mpmath.exp(t)
    return (w * e + wp) / (e + 1)


def geodesic_max_height(gamma: Mat2, samples: int = 256) -> float:
    """Largest imaginary part of reduced points along the closed geodesic."""
    with mpmath.workdps(20):
        w, wp, xi = _geodesic_setup(gamma)
        L = 2 * mpmath.log(xi)
        return max(float(reduce_to_fundamental(_tau(L * k / samples, w, wp)).imag) for k in range(samples))


def precision_for(mmax: int, height: float) -> int:
    return 30 + int(math.ceil(mmax * 2 * math.pi * height / math.log(10) * 1.1))


def cycle_integral_table(gamma: Mat2, mmax: int, nodes: int = 256, method: str = "trapezoid",
                         dps: Optional[int] = None, rtol: float = 1e-10,
                         max_nodes: int = 1 << 15) -> CycleIntegralTable:
    """``val~_m(gamma)`` for ``0 <= m <= mmax``.

    The geodesic is ``tau(t) = M_gamma (i e^t)`` for ``0 <= t <= 2 log xi``,
    along which ``-sqrt(D) dtau / Q(tau, 1)`` pulls back to ``dt``.  The
    integrand is periodic in ``t``, so the periodic trapezoid rule converges
    geometrically.  Starting from ``nodes`` points the rule is refined by
    doubling until two successive sums agree to ``rtol`` (relative to
    ``max(1, |value|)``); ``error_estimate`` holds the last difference.
    ``method="gauss"`` uses a single fixed Gauss-Legendre rule instead.
    """
    require_normalized(gamma)
    Y = geodesic_max_height(gamma)
    dps = dps or precision_for(mmax, Y)
    c = j_coeffs(max(mmax, 1) + 1)
    with mpmath.workdps(dps):
        w, wp, xi = _geodesic_setup(gamma)
        L = 2 * mpmath.log(xi)

        def values_at(t):
            return jm_from_j(_j_mp(reduce_to_fundamental(_tau(t, w, wp)), dps), mmax, c)

        if method == "gauss":
            gl = mpmath.calculus.quadrature.GaussLegendre(mpmath.mp)
            degree = max(1, int(math.ceil(math.log2(nodes / 3))) + 1)
            sums = [mpmath.mpc(0)] * (mmax + 1)
            for x, wt in gl.calc_nodes(degree, mpmath.mp.prec):
                for m, v in enumerate(values_at((x + 1) * L / 2)):
                    sums[m] += wt * L / 2 * v
            values = [float(v.real) for v in sums]
            return CycleIntegralTable(gamma, values, nodes, method, dps, Y,
                                      [float(abs(v.imag)) for v in sums])
        if method != "trapezoid":
            raise ValueError(f"unknown quadrature method {method!r}")
        n = nodes
        raw = [mpmath.mpc(0)] * (mmax + 1)
        for k in range(n):
            for m, v in enumerate(values_at(L * k / n)):
                raw[m] += v
        prev = [r * L / n for r in raw]
        while True:
            # nested refinement: only the midpoints are new
            for k in range(n):
                for m, v in enumerate(values_at(L * (2 * k + 1) / (2 * n))):
                    raw[m] += v
            n *= 2
            cur = [r * L / n for r in raw]
            err = [abs(a - b) for a, b in zip(cur, prev)]
            done = all(e <= rtol * max(1, abs(v)) for e, v in zip(err, cur))
            prev = cur
            if done or n >= max_nodes:
                break
        values = [float(v.real) for v in cur]
        err = [float(e) for e in err]
    return CycleIntegralTable(gamma, values, n, method, dps, Y, err)


@lru_cache(maxsize=64)
def _cached_table(gamma: Mat2, mmax: int, nodes: int) -> CycleIntegralTable:
    return cycle_integral_table(gamma, mmax, nodes)


def cycle_integral(gamma: Mat2, m: int, nodes: int = 256) -> float:
    return _cached_table(gamma, m, nodes).values[m]


def val_table(gamma: Mat2, mmax: int, nodes: int = 256) -> list[float]:
    return _cached_table(gamma, mmax, nodes).values


# -- F_gamma and G_gamma -----------------------------------------------------

def effective_truncation(z: complex, M: int, tol: float = 1e-18) -> int:
    """Smallest useful order: beyond it ``|q|^m (m+1)^2`` is below ``tol``."""
    aq = math.exp(-2 * math.pi * complex(z).imag)
    m = 1
    while m < M and aq ** m * (m + 1) ** 2 >= tol:
        m += 1
    return m


def f_gamma(gamma: Mat2, z: complex, M: int = 200, nodes: int = 256) -> complex:
    """``F_gamma(z) = sum_m val~_m(gamma) q^m`` truncated at order ``M``."""
    _check_upper(z)
    vals = val_table(gamma, effective_truncation(z, M), nodes)
    q = cmath.exp(TWO_PI_I * complex(z))
    acc = 0j
    for v in reversed(vals):
        acc = acc * q + v
    return acc


def g_gamma(gamma: Mat2, z: complex, M: int = 200, nodes: int = 256) -> complex:
    """Primitive ``val~_0 z + (2 pi i)^-1 sum_{m>=1} val~_m q^m / m`` of ``F_gamma``."""
    _check_upper(z)
    z = complex(z)
    vals = val_table(gamma, effective_truncation(z, M), nodes)
    q = cmath.exp(TWO_PI_I * z)
    s = sum(v / m * q ** m for m, v in enumerate(vals) if m)
    return vals[0] * z + s / TWO_PI_I


def _mobius_c(g: Mat2, z: complex) -> complex:
    return (g.a * z + g.b) / (g.c * z + g.d)


def cocycle_rhs(gamma: Mat2, sigma: Mat2, z: complex) -> complex:
    """``sqrt(D) sum sgn(Q)/Q(z,1)`` over class forms straddling ``sigma^-1 oo``."""
    from .qforms import enumerate_straddling
    from .symbols_hyperbolic import cusp_of, gamma_class

    if sigma.c == 0:
        return 0j
    D = gamma.trace ** 2 - 4
    forms = enumerate_straddling(gamma_class(gamma), cusp_of(sigma))
    return math.sqrt(D) * sum(f.sgn / f(complex(z), 1) for f in forms)


def verify_cocycle(gamma: Mat2, sigma: Mat2, z: complex, M: int = 200, nodes: int = 256,
                   min_height: float = 0.8) -> tuple[complex, complex, float]:
    """Return ``(lhs, rhs, |lhs - rhs|)`` for the weight-2 cocycle of ``F_gamma``."""
    z = complex(z)
    sz = _mobius_c(sigma, z)
    if z.imag < min_height or sz.imag < min_height:
        raise DomainTooLow(f"Im z = {z.imag:.3f}, Im(sigma z) = {sz.imag:.3f}; need >= {min_height}")
    lhs = f_gamma(gamma, sz, M, nodes) / (sigma.c * z + sigma.d) ** 2 - f_gamma(gamma, z, M, nodes)
    rhs = cocycle_rhs(gamma, sigma, z)
    return lhs, rhs, abs(lhs - rhs)


@dataclass
class IntegralTrend:
    partials: list
    exact: int


def verify_integral_psi(gamma: Mat2, sigma: Mat2, n_max: int = 4, M: int = 400,
                        z0: complex = 1j, nodes: int = 256) -> IntegralTrend:
    """Partial values ``4 Re int_{sigma^n z0}^{sigma^(n+1) z0} F_gamma dz / (2 pi i)``.

    Each integral is pulled back by ``sigma^n`` to the fixed path
    ``z0 -> sigma z0``; the modular defect ``r_gamma(sigma^n, u)`` integrates
    in closed form to logarithms of ``u - w`` and ``u - w'`` over the forms
    straddling ``sigma^-n oo``.
    """
    from .qforms import enumerate_straddling, roots
    from .symbols_hyperbolic import cusp_of, gamma_class, psi_hyp_first

    z0 = complex(z0)
    z1 = _mobius_c(sigma, z0)
    base = g_gamma(gamma, z1, M, nodes) - g_gamma(gamma, z0, M, nodes)
    cls = gamma_class(gamma)
    partials = []
    for n in range(n_max + 1):
        sn = sigma ** n
        total = base
        if sn.c != 0:
            for f in enumerate_straddling(cls, cusp_of(sn)):
                w, wp = (float(r) for r in roots(f))
                total += (cmath.log(z1 - w) - cmath.log(z1 - wp)) - (cmath.log(z0 - w) - cmath.log(z0 - wp))
        partials.append(2 / math.pi * total.imag)
    return IntegralTrend(partials, psi_hyp_first(gamma, sigma).psi)


def classical_integral_partials(sigma: Mat2, n_max: int = 3, terms: int = 400, z0=None) -> list[float]:
    """``Re int E2 dz`` over ``sigma^n z0 -> sigma^(n+1) z0`` with ``z0`` atop the axis."""
    if z0 is None:
        w, wp = (float(r) for r in fixed_points(sigma))
        z0 = complex((w + wp) / 2, (w - wp) / 2)
    out = []
    a = complex(z0)
    for _ in range(n_max + 1):
        b = _mobius_c(sigma, a)
        # enough terms that |q|^N is negligible at the lower endpoint
        n_terms = max(terms, int(40 / (2 * math.pi * min(a.imag, b.imag))) + 1)
        dl = eval_modular("logDelta", b, n_terms) - eval_modular("logDelta", a, n_terms)
        out.append(dl.imag / (2 * math.pi))
        a = b
    return out


def elliptic_limit_object(z: complex, tau: complex, M: int = 100, threshold: float = 1e-8) -> complex:
    """``j'(z)/(j(tau) - j(z)) - E2*(z)``."""
    den = eval_modular("j", tau, M) - eval_modular("j", z, M)
    if abs(den) < threshold:
        raise PoleProximity(f"|j(tau) - j(z)| = {abs(den):.3g} is too small")
    return eval_modular("jprime", z, M) / den - eval_modular("E2star", z, M)


def fourier_coefficient(f, m: int, y: float, samples: int = 64) -> complex:
    """Trapezoid extraction of the ``q^m`` coefficient of ``f`` at height ``y``."""
    acc = 0j
    for k in range(samples):
        x = k / samples
        acc += f(complex(x, y)) * cmath.exp(-TWO_PI_I * m * complex(x, y))
    return acc / samples


def e2star_modularity_gap(g: Mat2, z: complex, M: int = 150) -> float:
    gz = _mobius_c(g, complex(z))
    return abs(eval_modular("E2star", gz, M) / (g.c * z + g.d) ** 2 - eval_modular("E2star", z, M))


def xi_of(gamma: Mat2) -> float:
    w, _ = fixed_points(gamma)
    return float(gamma.c * w + gamma.d)

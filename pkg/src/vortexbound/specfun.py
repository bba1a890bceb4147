"""Special-function kernel.

Self-contained implementations of the functions the matching analysis
rests on: the confluent hypergeometric (Kummer) function and its
derivative with respect to the first parameter, generalized Laguerre
polynomials, the lower incomplete gamma function, the phase of
Gamma(1 + i*lam), and the modified Bessel function of the second kind
of imaginary order together with its transition-point asymptotics.

K_{i*lam}(x) is evaluated from the real integral

    K_{i*lam}(x) = int_0^inf exp(-x*cosh t) * cos(lam*t) dt ,

truncated where the integrand is below tolerance and subdivided at the
cosine zeros t_k = (k + 1/2)*pi/lam (plus dyadic decay points of the
exponential factor), with fixed-order Gauss-Legendre on each panel.
The same kernel with cosh(nu*t) covers real orders, which the
no-bound-state regime and the K_{1/2} closed-form check need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma

from .errors import AccuracyError, ValidationError

EULER_GAMMA = float(np.euler_gamma)

# 6^(1/3) * Gamma(2/3) / Gamma(1/3): prefactor of the transition-point
# asymptotics of -(ln K_{i*lam})'(lam).
BETA_TRANSITION = 6.0 ** (1.0 / 3.0) * math.gamma(2.0 / 3.0) / math.gamma(1.0 / 3.0)


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation control for the Kummer series."""

    rel_tol: float = 1e-15
    max_terms: int = 600

    def __post_init__(self):
        if not 0.0 < self.rel_tol <= 1e-6:
            raise ValidationError(f"SeriesPolicy.rel_tol must be in (0, 1e-6], got {self.rel_tol}")
        if self.max_terms < 200:
            raise ValidationError(f"SeriesPolicy.max_terms must be >= 200, got {self.max_terms}")


@dataclass(frozen=True)
class QuadraturePolicy:
    """Control for the semi-infinite cosh-kernel quadrature.

    t_max = None lets each call place the cutoff where
    exp(-x*cosh(t)) (times the cosh weight of the derivative kernel)
    has decayed below abs_tol for the smallest argument requested.
    """

    abs_tol: float = 1e-300
    rel_tol: float = 1e-12
    t_max: float | None = None
    gauss_order: int = 48

    def __post_init__(self):
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise ValidationError("QuadraturePolicy tolerances must be positive")
        if self.gauss_order < 8:
            raise ValidationError("QuadraturePolicy.gauss_order must be >= 8")


DEFAULT_SERIES = SeriesPolicy()
DEFAULT_QUAD = QuadraturePolicy()


def pochhammer(a, m):
    """Rising factorial (a)_m = a (a+1) ... (a+m-1); (a)_0 = 1."""
    if m < 0 or m != int(m):
        raise ValidationError(f"pochhammer order must be a non-negative integer, got {m}")
    out = 1.0
    for k in range(int(m)):
        out *= a + k
    return out


def chf_m(a, b, x, policy: SeriesPolicy = DEFAULT_SERIES):
    """Kummer function M(a, b; x) by direct series summation.

    `a` may be a scalar or an ndarray (the matching scan varies the
    first parameter along an energy grid); `b` and `x` are scalars.
    Negative-integer `a` truncates the series to a polynomial exactly.
    Stops once the term has stayed below rel_tol * |partial sum| for
    three consecutive terms, which guards against the alternating
    regime at a < 0.
    """
    if float(b) <= 0.0 and float(b) == int(b):
        raise ValidationError(f"chf_m: b must not be a non-positive integer, got b={b}")
    a_arr = np.asarray(a, dtype=float)
    scalar = a_arr.ndim == 0
    # extended precision: terms can exceed the sum by ~1e3 at x ~ 20, and
    # the recurrence noise would otherwise break the 1e-12 identities
    a_ext = np.atleast_1d(a_arr).astype(np.longdouble)
    b_ext = np.longdouble(b)
    x_ext = np.longdouble(x)

    total = np.ones_like(a_ext)
    term = np.ones_like(a_ext)
    quiet = np.zeros(a_ext.shape, dtype=int)
    for m in range(policy.max_terms):
        term = term * (a_ext + m) / (b_ext + m) * (x_ext / (m + 1.0))
        total = total + term
        small = np.abs(term) <= policy.rel_tol * np.maximum(np.abs(total), 1e-300)
        quiet = np.where(small, quiet + 1, 0)
        if np.all(quiet >= 3):
            break
    else:
        raise AccuracyError(
            f"chf_m series did not converge within {policy.max_terms} terms "
            f"(a={a!r}, b={b}, x={x})")
    out = total.astype(float)
    return float(out[0]) if scalar else out


def chf_m_prime(a, b, x, policy: SeriesPolicy = DEFAULT_SERIES):
    """dM/dx = (a/b) M(a+1, b+1; x)."""
    a_arr = np.asarray(a, dtype=float)
    return (a_arr / b) * chf_m(a_arr + 1.0, b + 1.0, x, policy)


def laguerre(n, beta, x):
    """Generalized Laguerre polynomial L_n^(beta)(x), stable upward recurrence."""
    if n < 0 or n != int(n):
        raise ValidationError(f"laguerre degree must be a non-negative integer, got {n}")
    n = int(n)
    lm1, l = 0.0, 1.0
    for k in range(n):
        lm1, l = l, ((2 * k + 1 + beta - x) * l - (k + beta) * lm1) / (k + 1.0)
    return l


def lower_inc_gamma_fact(beta, x):
    """(beta, x)! = gamma(beta+1, x) = int_0^x t^beta e^-t dt.

    Integer beta uses the finite closed form
    (l, x)!/l! = 1 - e^-x sum_{k<=l} x^k/k!; otherwise the standard
    ascending series gamma(s, x) = x^s e^-x sum_n x^n / (s)_{n+1}.
    """
    if beta < 0:
        raise ValidationError(f"lower_inc_gamma_fact requires beta >= 0, got {beta}")
    if x < 0:
        raise ValidationError(f"lower_inc_gamma_fact requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if beta == int(beta):
        ell = int(beta)
        partial = 0.0
        term = 1.0
        for k in range(ell + 1):
            if k > 0:
                term *= x / k
            partial += term
        return math.factorial(ell) * (1.0 - math.exp(-x) * partial)
    s = beta + 1.0
    term = 1.0 / s
    total = term
    for n in range(1, 1000):
        term *= x / (s + n)
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    else:
        raise AccuracyError(f"incomplete-gamma series stalled at beta={beta}, x={x}")
    return x ** s * math.exp(-x) * total


def _mtilde0(beta, x):
    # dM/da at a=0, b=beta+1: sum_m x^(m+1) / ((m+1) (beta+2)_m) / (beta+1)
    term = x
    total = term
    for m in range(1, 2000):
        term *= x * m / ((m + 1.0) * (beta + 1.0 + m))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total / (beta + 1.0)


def chf_m_da(n, beta, x):
    """First-parameter derivative of the Kummer function at a = -n, b = beta+1.

    n = 0 sums the explicit series; n = 1 uses its closed form in terms
    of the incomplete gamma function; n >= 2 climbs the three-term
    recurrence whose right-hand side is a Laguerre combination.
    """
    if n < 0 or n != int(n):
        raise ValidationError(f"chf_m_da requires non-negative integer n, got {n}")
    if beta < 0 or x < 0:
        raise ValidationError("chf_m_da requires beta >= 0 and x >= 0")
    n = int(n)
    m0 = _mtilde0(beta, x)
    if n == 0:
        return m0
    if x == 0.0:
        return 0.0
    incg = lower_inc_gamma_fact(beta, x)
    m1 = (-x / (beta + 1.0) + incg / (x ** beta * math.exp(-x)) + (1.0 + beta - x) * m0) / (beta + 1.0)
    if n == 1:
        return m1
    prev2, prev1 = m0, m1
    for k in range(2, n + 1):
        rhs = 0.0
        for j in range(3):  # binom(2, j) (-1)^j (k-j)!/(beta+1)_{k-j} L_{k-j}
            coeff = (1.0, -2.0, 1.0)[j]
            rhs += coeff * math.factorial(k - j) / pochhammer(beta + 1.0, k - j) \
                * laguerre(k - j, beta, x)
        cur = ((2 * k + beta - x - 1.0) * prev1 - (k - 1.0) * prev2 + rhs) / (beta + k)
        prev2, prev1 = prev1, cur
    return prev1


def arg_gamma_phase(lam):
    """phi(lam) = arg Gamma(1 + i lam), continuous branch with phi(0) = 0."""
    if lam < 0:
        raise ValidationError(f"arg_gamma_phase requires lam >= 0, got {lam}")
    # loggamma is the analytic continuation, so its imaginary part is
    # already the continuous branch.
    return float(loggamma(complex(1.0, lam)).imag)


def arg_gamma_phase_series(lam):
    """Small-argument series of phi(lam); |lam| < 1 for fast convergence."""
    from scipy.special import zeta

    total = -EULER_GAMMA * lam
    for k in range(1, 60):
        term = -((-1.0) ** k) * (zeta(2 * k + 1) / (2 * k + 1)) * lam ** (2 * k + 1)
        total += term
        if abs(term) < 1e-17:
            break
    return total


def arg_gamma_phase_stirling(lam):
    """Large-argument form pi/4 + lam (ln lam - 1), error O(1/lam)."""
    return math.pi / 4.0 + lam * (math.log(lam) - 1.0)


# ---------------------------------------------------------------------------
# cosh-kernel quadrature for K of imaginary (and real) order
# ---------------------------------------------------------------------------

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _panel_edges(lam, x_min, nu_real, policy):
    """Split [0, t_max]: cosine zeros (imaginary order) + dyadic decay points."""
    big = -math.log(policy.abs_tol) if policy.abs_tol > 0 else 700.0
    big = min(big, 700.0)
    if policy.t_max is not None:
        t_max = policy.t_max
    else:
        # decay target: x*cosh(t) - nu*t - ln cosh(t) > big; fixed-point iterate
        t_max = 2.0
        for _ in range(6):
            arg = (big + nu_real * t_max + math.log1p(math.cosh(t_max))) / x_min
            t_max = math.asinh(arg) if arg > 1e8 else math.acosh(max(arg, 1.0 + 1e-12))
        t_max = max(t_max, 1.0)
    edges = {0.0, t_max}
    if lam > 0.0:
        k = 0
        while True:
            t = (k + 0.5) * math.pi / lam
            if t >= t_max:
                break
            edges.add(t)
            k += 1
    v = 1.0
    while v / x_min <= math.cosh(t_max):
        if v / x_min > 1.0:
            edges.add(math.acosh(v / x_min))
        v *= 2.0
    return np.array(sorted(edges))


def _cosh_kernel(order, x, policy, deriv, imaginary):
    """Vectorized int_0^inf e^{-x cosh t} w(t) dt with w = cos(lam t) or cosh(nu t).

    deriv=True inserts -cosh(t) (differentiation under the integral).
    Returns an array matching x's shape; error-checks by comparing two
    Gauss orders and raises AccuracyError if they disagree.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0.0):
        raise ValidationError("Bessel-K argument must be > 0")
    lam = order if imaginary else 0.0
    nu = 0.0 if imaginary else order
    edges = _panel_edges(lam, float(xs.min()), nu, policy)

    def run(n_gl):
        nodes, weights = _gauss(n_gl)
        out = np.zeros_like(xs)
        for a, b in zip(edges[:-1], edges[1:]):
            t = 0.5 * (b - a) * nodes + 0.5 * (b + a)
            w = 0.5 * (b - a) * weights
            ch = np.cosh(t)
            f = np.exp(-np.outer(xs, ch))
            if deriv:
                f = -f * ch
            wfac = np.cos(lam * t) if imaginary else np.cosh(nu * t)
            out += f @ (w * wfac)
        return out

    coarse = run(policy.gauss_order)
    fine = run(policy.gauss_order + 16)
    # relative to the array amplitude: pointwise relative error is
    # meaningless next to the oscillation zeros of K
    scale = max(float(np.max(np.abs(fine))), 1e-300)
    err = float(np.max(np.abs(fine - coarse))) / scale
    if err > max(policy.rel_tol * 50.0, 1e-13):
        raise AccuracyError(
            f"cosh-kernel quadrature stalled (order={order}, est. rel err {err:.2e})",
            achieved=err)
    return fine


def bessel_k_imag(lam, x, policy: QuadraturePolicy = DEFAULT_QUAD):
    """K_{i*lam}(x), real-valued, for lam >= 0 and x > 0 (x may be an array)."""
    if lam < 0:
        raise ValidationError("bessel_k_imag requires lam >= 0 (K is even in lam)")
    out = _cosh_kernel(lam, x, policy, deriv=False, imaginary=True)
    return float(out[0]) if np.ndim(x) == 0 else out


def bessel_k_imag_dx(lam, x, policy: QuadraturePolicy = DEFAULT_QUAD):
    """d/dx K_{i*lam}(x) = -int_0^inf e^{-x cosh t} cosh(t) cos(lam t) dt."""
    if lam < 0:
        raise ValidationError("bessel_k_imag_dx requires lam >= 0")
    out = _cosh_kernel(lam, x, policy, deriv=True, imaginary=True)
    return float(out[0]) if np.ndim(x) == 0 else out


def bessel_k_real(nu, x, policy: QuadraturePolicy = DEFAULT_QUAD):
    """K_nu(x) for real nu >= 0 through the same kernel (cosh weight)."""
    if nu < 0:
        raise ValidationError("bessel_k_real requires nu >= 0")
    out = _cosh_kernel(nu, x, policy, deriv=False, imaginary=False)
    return float(out[0]) if np.ndim(x) == 0 else out


def bessel_k_real_dx(nu, x, policy: QuadraturePolicy = DEFAULT_QUAD):
    """d/dx K_nu(x) for real nu >= 0."""
    if nu < 0:
        raise ValidationError("bessel_k_real_dx requires nu >= 0")
    out = _cosh_kernel(nu, x, policy, deriv=True, imaginary=False)
    return float(out[0]) if np.ndim(x) == 0 else out


def bessel_k_imag_small_x(lam, x):
    """Leading small-argument form: -sqrt(pi/(lam sinh(pi lam))) sin(lam ln(x/2) - phi)."""
    if lam <= 0:
        raise ValidationError("small-argument form needs lam > 0")
    amp = math.sqrt(math.pi / (lam * math.sinh(math.pi * lam)))
    return -amp * math.sin(lam * math.log(x / 2.0) - arg_gamma_phase(lam))


def k_transition(lam, policy: QuadraturePolicy = DEFAULT_QUAD):
    """(K1, K2) at the transition point x = lam.

    K1 = -(ln K_{i lam})'(lam) from quadrature; K2 follows exactly from
    the Wronskian-type identity K2 = -K1/lam + K1^2.
    """
    if lam <= 0:
        raise ValidationError("k_transition requires lam > 0")
    k = bessel_k_imag(lam, lam, policy)
    dk = bessel_k_imag_dx(lam, lam, policy)
    k1 = -dk / k
    k2 = -k1 / lam + k1 * k1
    return k1, k2


def k_transition_asymptotic(lam):
    """beta * lam^(-1/3) * (1 + 1/(4 lam)), beta = 6^(1/3) Gamma(2/3)/Gamma(1/3)."""
    if lam <= 0:
        raise ValidationError("k_transition_asymptotic requires lam > 0")
    return BETA_TRANSITION * lam ** (-1.0 / 3.0) * (1.0 + 0.25 / lam)


def bessel_k_asymptotic_pair(lam):
    """Stationary-phase values of (K_{i lam}(lam), K'_{i lam}(lam)) for lam >= 1."""
    if lam < 1.0:
        raise ValidationError("bessel_k_asymptotic_pair is stated for lam >= 1")
    pref = math.exp(-math.pi * lam / 2.0) / (2.0 * math.sqrt(3.0))
    k = pref * 6.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0) * lam ** (-1.0 / 3.0)
    dk = -pref * 6.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0) * lam ** (-2.0 / 3.0) \
        * (1.0 + 0.25 / lam)
    return k, dk

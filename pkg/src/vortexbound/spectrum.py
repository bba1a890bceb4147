"""Per-channel analysis: exact matching, shallow ladder, deep states.

Inside the crossover radius the radial solution is
r^l exp(-a g r^2/4) M(-eps/(2 a g) + (l+1)/2, l+1; a g r^2/2); outside
it is K_{i lam_l}(q r) with lam_l = sqrt(gamma_alpha^2 - l^2) and
q = sqrt(gamma^2 - eps).  Eigenvalues are the roots in q of the
log-derivative mismatch at r_alpha.

Near q = 0 the roots form a ladder, log-periodic in q with period
pi/lam_l.  The closed shallow form

    E_{p,l}/(n0 g12) = 1 - Lambda_l^2 exp(-2 pi p / lam_l)

holds with p the true radial label provided the phase theta is taken on
its continuous branch: the Kummer factor evaluated at the band edge
(q -> 0) crosses zero at a discrete set of gamma_alpha, each crossing
marking one state leaving the ladder for the deep region, and the
arctangent must not wrap there.  We track those crossings explicitly;
`ladder_offset` below is their count.  The published per-l branch
conventions (theta_0 near pi/2, theta_{l>=1} near -a_l lam_l, plus a
Kronecker-delta pi in Lambda) are reproduced by `theta_ell`, and both
bookkeepings give the identical Lambda_l.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from . import specfun
from .errors import SolverError, ValidationError
from .model import ModelParams, energy_views

DEEP = "deep"
SHALLOW = "shallow"
EXACT_MATCH = "exact-match"
NUMERIC = "numeric"


@dataclass(frozen=True)
class Channel:
    """Angular-momentum channel quantities (only exists for gamma_alpha > l)."""

    ell: int
    lambda_ell: float
    delta_ell: float
    n_deep: int


@dataclass(frozen=True)
class NoBoundStates:
    """Marker for channels with gamma_alpha <= l: the matching has no roots."""

    ell: int
    gamma_alpha: float


@dataclass(frozen=True)
class BoundState:
    ell: int
    p: int
    eps: float
    q: float
    kind: str  # deep / shallow / exact-match / numeric
    e_over_n0g12: float
    e_over_hbar_omega: float
    physical: bool


def make_channel(ell: int, params: ModelParams) -> Channel | NoBoundStates:
    """Channel data, or the no-bound-states marker when gamma_alpha <= l."""
    if ell < 0 or ell != int(ell):
        raise ValidationError(f"ell must be a non-negative integer, got {ell}")
    ga = params.gamma_alpha
    if ga <= ell:
        return NoBoundStates(ell=int(ell), gamma_alpha=ga)
    lam = math.sqrt(ga * ga - ell * ell)
    delta = ga - ell
    # -1 < delta - 2 n_deep < 1, half-open at the lower edge
    n_deep = max(0, math.floor((delta + 1.0) / 2.0))
    return Channel(ell=int(ell), lambda_ell=lam, delta_ell=delta, n_deep=n_deep)


def is_physical_q(q: float, params: ModelParams) -> bool:
    """Turning-point criterion: q^2 > gamma^2 / (alpha R)^2, strict."""
    return q * q > (params.gamma_alpha / params.r_trap) ** 2


# ---------------------------------------------------------------------------
# band-edge Kummer factor and the ladder bookkeeping
# ---------------------------------------------------------------------------

def _edge_chf(ga: float, ell: int) -> float:
    """M((l+1-gamma_alpha)/2, l+1; gamma_alpha): the q -> 0 Kummer factor."""
    return specfun.chf_m((ell + 1.0 - ga) / 2.0, ell + 1.0, ga)


@lru_cache(maxsize=None)
def _edge_chf_zeros(ell: int, ga_max_key: int) -> tuple[float, ...]:
    ga_max = float(ga_max_key)
    grid = np.linspace(ell + 1e-9, ga_max, max(200, int(80 * (ga_max - ell))))
    vals = np.array([_edge_chf(g, ell) for g in grid])
    zeros = []
    for i in range(len(grid) - 1):
        if np.sign(vals[i]) != np.sign(vals[i + 1]):
            zeros.append(brentq(_edge_chf, grid[i], grid[i + 1], args=(ell,), xtol=1e-13))
    return tuple(zeros)


def ladder_offset(ell: int, gamma_alpha: float) -> int:
    """Number of states that have left the shallow ladder in this channel."""
    key = int(math.ceil(gamma_alpha)) + 1
    zeros = _edge_chf_zeros(ell, key)
    return int(np.searchsorted(zeros, gamma_alpha))


def _theta_continuous(ell: int, gamma_alpha: float) -> float:
    """atan2 branch of Eq.-style arctan, kept continuous across edge-CHF zeros."""
    lam = math.sqrt(gamma_alpha ** 2 - ell ** 2)
    delta = gamma_alpha - ell
    a = -delta / 2.0 + 0.5
    b = ell + 1.0
    m = specfun.chf_m(a, b, gamma_alpha)
    mp = specfun.chf_m_prime(a, b, gamma_alpha)
    th = math.atan2(lam, delta - 2.0 * gamma_alpha * mp / m)
    return th - math.pi * ladder_offset(ell, gamma_alpha)


def theta_ell(channel: Channel, params: ModelParams) -> float:
    """Phase theta_l on the published per-l branch.

    theta_0 starts at pi/2 for small gamma_alpha; theta_{l>=1} starts at
    -a_l lam_l.  The branch is fixed so that -(lam/r_alpha) cot(theta)
    is the q -> 0 limit of the region-1 log-derivative (cot is blind to
    the pi shift between this convention and the internal uniform one).
    """
    th = _theta_continuous(channel.ell, params.gamma_alpha)
    return th if channel.ell == 0 else th - math.pi


def lambda_ell(channel: Channel, params: ModelParams) -> float:
    """Amplitude Lambda_l of the shallow ladder.

    Equals (sqrt(2)/gamma_alpha) exp(-((1-delta_{l0}) pi + theta_l - phi_l)/lam);
    written via the continuous branch the Kronecker term drops out.
    """
    th = _theta_continuous(channel.ell, params.gamma_alpha)
    ph = specfun.arg_gamma_phase(channel.lambda_ell)
    return (math.sqrt(2.0) / params.gamma_alpha) * math.exp(-(th - ph) / channel.lambda_ell)


# ---------------------------------------------------------------------------
# log-derivatives at the crossover radius
# ---------------------------------------------------------------------------

def region1_log_deriv(eps, ell: int, params: ModelParams):
    """(ln R1)'(r_alpha) for the inner (harmonic-core) solution.

    Vectorized over eps; CHF evaluated at gamma_alpha irrespective of eps.
    """
    eps = np.asarray(eps, dtype=float)
    ag = params.alpha * params.gamma
    ra = params.r_alpha
    ga = params.gamma_alpha
    a = -eps / (2.0 * ag) + (ell + 1.0) / 2.0
    b = ell + 1.0
    m = specfun.chf_m(a, b, ga)
    mp = specfun.chf_m_prime(a, b, ga)
    out = ell / ra - 0.5 * ag * ra + ag * ra * mp / m
    return out if out.ndim else float(out)


def region2_log_deriv(q, ell: int, params: ModelParams,
                      policy: specfun.QuadraturePolicy = specfun.DEFAULT_QUAD):
    """q K'(q r_alpha)/K(q r_alpha); imaginary order above threshold, real below.

    At a zero of K the value is +-inf (the bracketing scanner works with
    the pole-free cross-multiplied mismatch instead).
    """
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0):
        raise ValidationError("region2_log_deriv requires q > 0")
    ga = params.gamma_alpha
    x = q * params.r_alpha
    order2 = ga * ga - ell * ell
    if order2 > 0:
        lam = math.sqrt(order2)
        k = specfun.bessel_k_imag(lam, x, policy)
        dk = specfun.bessel_k_imag_dx(lam, x, policy)
    else:
        nu = math.sqrt(-order2)
        k = specfun.bessel_k_real(nu, x, policy)
        dk = specfun.bessel_k_real_dx(nu, x, policy)
    with np.errstate(divide="ignore"):
        out = q * np.asarray(dk) / np.asarray(k)
    return out if out.ndim else float(out)


def matching_mismatch(q, ell: int, params: ModelParams):
    """F(q) = region1 - region2 (log-derivative continuity residual)."""
    eps = params.gamma2 - np.asarray(q, dtype=float) ** 2
    return region1_log_deriv(eps, ell, params) - region2_log_deriv(q, ell, params)


def _mismatch_numerator(q, ell: int, params: ModelParams,
                        policy: specfun.QuadraturePolicy = specfun.DEFAULT_QUAD):
    """Pole-free form of the mismatch: F(q) * M * K, vectorized over q.

    Multiplying out the Kummer and Bessel denominators removes the
    spurious sign changes at their zeros, so every sign change of this
    function is a genuine eigenvalue.
    """
    q = np.asarray(q, dtype=float)
    eps = params.gamma2 - q ** 2
    ag = params.alpha * params.gamma
    ra = params.r_alpha
    ga = params.gamma_alpha
    a = -eps / (2.0 * ag) + (ell + 1.0) / 2.0
    b = ell + 1.0
    m = specfun.chf_m(a, b, ga)
    mplus = specfun.chf_m(a + 1.0, b + 1.0, ga)
    x = q * ra
    lam = math.sqrt(ga * ga - ell * ell)
    k = specfun.bessel_k_imag(lam, x, policy)
    dk = specfun.bessel_k_imag_dx(lam, x, policy)
    amp = ell / ra - 0.5 * ag * ra
    return (amp * m + ag * ra * (a / b) * mplus) * k - q * dk * m


def find_states_exact(channel: Channel, params: ModelParams, q_min: float,
                      policy: specfun.QuadraturePolicy = specfun.DEFAULT_QUAD
                      ) -> list[BoundState]:
    """All matching roots on (q_min, gamma), labeled p = 0, 1, ... by falling q.

    Scan grid: 40 points per pi/lam period, uniform in ln q, plus a
    uniform refinement of the top decade where the deep roots sit.  If
    two roots land closer than half a ladder period the scan is redone
    locally at 4x density.
    """
    g = params.gamma
    if not 0.0 < q_min < g:
        raise ValidationError(f"q_min must lie in (0, gamma), got {q_min}")
    lam = channel.lambda_ell
    q_hi = g * (1.0 - 1e-9)
    span = math.log(q_hi / q_min)
    n_log = max(64, int(40.0 * span * lam / math.pi))
    grid = np.exp(np.linspace(math.log(q_min), math.log(q_hi), n_log))
    top = np.linspace(0.1 * g, q_hi, 400)
    grid = np.unique(np.concatenate([grid, top]))

    roots = _scan_roots(grid, channel.ell, params, policy)
    # auto-refine if two roots share (nearly) one ladder rung
    if len(roots) >= 2:
        lnr = np.log(np.array(sorted(roots)))
        if np.any(np.diff(lnr) < 0.5 * math.pi / lam):
            fine = np.exp(np.linspace(math.log(q_min), math.log(q_hi), 4 * n_log))
            fine = np.unique(np.concatenate([fine, np.linspace(0.1 * g, q_hi, 1600)]))
            roots = _scan_roots(fine, channel.ell, params, policy)

    states = []
    for p, q in enumerate(sorted(roots, reverse=True)):
        eps = params.gamma2 - q * q
        v1, v2 = energy_views(eps, params)
        states.append(BoundState(ell=channel.ell, p=p, eps=eps, q=q, kind=EXACT_MATCH,
                                 e_over_n0g12=v1, e_over_hbar_omega=v2,
                                 physical=is_physical_q(q, params)))
    return states


def _scan_roots(grid, ell, params, policy):
    vals = _mismatch_numerator(grid, ell, params, policy)
    roots = []
    sign = np.sign(vals)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        f = lambda q: float(_mismatch_numerator(np.array([q]), ell, params, policy)[0])
        root = brentq(f, grid[i], grid[i + 1], xtol=1e-300, rtol=1e-12, maxiter=200)
        roots.append(root)
    return roots


def shallow_spectrum(channel: Channel, params: ModelParams, p_max: int) -> list[BoundState]:
    """Closed-form shallow ladder for p = n_deep .. p_max.

    States whose formula value falls outside the bound window
    (0, gamma^2) are dropped: there the log-periodic form has left its
    domain of validity.
    """
    lam = channel.lambda_ell
    big_lambda = lambda_ell(channel, params)
    out = []
    for p in range(channel.n_deep, p_max + 1):
        frac = 1.0 - big_lambda ** 2 * math.exp(-2.0 * math.pi * p / lam)
        eps = params.gamma2 * frac
        if not 0.0 < eps < params.gamma2:
            continue
        q = math.sqrt(params.gamma2 - eps)
        v1, v2 = energy_views(eps, params)
        out.append(BoundState(ell=channel.ell, p=p, eps=eps, q=q, kind=SHALLOW,
                              e_over_n0g12=v1, e_over_hbar_omega=v2,
                              physical=is_physical_q(q, params)))
    return out


def deep_spectrum(channel: Channel, params: ModelParams,
                  exact_transition: bool = False) -> BoundState | None:
    """Closed-form p = 0 deep state, or None when the channel has none.

    E/(hbar omega) = (l+1)(1 - Omega_l)
                     + ((ga^2 + l^2)/(2 ga) - (Delta - lam K_l)/(ga K_l^2)) Omega_l.

    K_l defaults to its stationary-phase asymptotic form;
    exact_transition switches to the quadrature value for error studies.
    """
    if channel.n_deep < 1:
        return None
    ga = params.gamma_alpha
    lam = channel.lambda_ell
    ell = channel.ell
    if exact_transition:
        kl, _ = specfun.k_transition(lam)
    else:
        kl = specfun.k_transition_asymptotic(lam)
    omega_l = big_omega_ell(channel, params)
    e_hw = (ell + 1.0) * (1.0 - omega_l) + (
        (ga * ga + ell * ell) / (2.0 * ga)
        - (channel.delta_ell - lam * kl) / (ga * kl * kl)) * omega_l
    eps = params.alpha * params.gamma * e_hw
    if not 0.0 < eps < params.gamma2:
        return None
    q = math.sqrt(params.gamma2 - eps)
    v1, v2 = energy_views(eps, params)
    return BoundState(ell=ell, p=0, eps=eps, q=q, kind=DEEP,
                      e_over_n0g12=v1, e_over_hbar_omega=v2,
                      physical=is_physical_q(q, params))


def big_omega_ell(channel: Channel, params: ModelParams) -> float:
    """Omega_l of the deep-state formula (asymptotic K_l built in)."""
    ga = params.gamma_alpha
    lam = channel.lambda_ell
    ell = channel.ell
    incg = specfun.lower_inc_gamma_fact(float(ell), ga)
    beta2 = specfun.BETA_TRANSITION ** 2
    return 1.0 / (1.0 + (1.0 / beta2) * lam ** (5.0 / 3.0) / (lam + 0.5)
                  * incg / (ga ** (ell + 1) * math.exp(-ga)))


def big_omega_0(params: ModelParams) -> float:
    """l = 0 specialization: (1 + ga^(2/3)/beta^2 (e^ga - 1)/(ga + 1/2))^-1."""
    ga = params.gamma_alpha
    beta2 = specfun.BETA_TRANSITION ** 2
    return 1.0 / (1.0 + ga ** (2.0 / 3.0) / beta2 * math.expm1(ga) / (ga + 0.5))


# margin on the deep criterion Delta - 2p > 1: boundary states are
# ill-approximated, hand those to the exact matcher in auto mode.
DEEP_MARGIN = 0.1

EXACT = "exact"
CLOSED_FORM = "closed"
AUTO = "auto"


def assemble_spectrum(params: ModelParams, ell_max: int, p_max: int,
                      method: str = AUTO) -> list[BoundState]:
    """Unified spectrum across channels, sorted by (ell, p).

    exact: every state from the matching roots.  closed: deep formula
    for p < n_deep (p = 0 only; no closed form exists deeper), shallow
    ladder above.  auto: closed forms where trusted (deep needs
    Delta - 2p > 1 + margin), exact matching otherwise.
    """
    if method not in (EXACT, CLOSED_FORM, AUTO):
        raise ValidationError(f"unknown method {method!r}")
    out: list[BoundState] = []
    for ell in range(ell_max + 1):
        ch = make_channel(ell, params)
        if isinstance(ch, NoBoundStates):
            continue
        q_min = params.gamma_alpha / params.r_trap
        if method == EXACT:
            out.extend(s for s in find_states_exact(ch, params, q_min) if s.p <= p_max)
            continue
        closed = _closed_channel(ch, params, p_max)
        if method == CLOSED_FORM:
            out.extend(closed)
            continue
        # auto: replace untrusted entries by exact roots
        deep_ok = ch.n_deep >= 1 and ch.delta_ell > 1.0 + DEEP_MARGIN
        need_exact = [s.p for s in closed if s.kind == DEEP and not deep_ok]
        missing = [p for p in range(min(ch.n_deep, p_max + 1)) if p >= 1]
        need_exact.extend(missing)  # deep p >= 1 has no closed form
        if need_exact:
            exact = {s.p: s for s in find_states_exact(ch, params, q_min)}
            merged = [exact.get(s.p, s) if s.p in need_exact else s for s in closed]
            for p in missing:
                if p in exact and all(s.p != p for s in merged):
                    merged.append(exact[p])
            out.extend(merged)
        else:
            out.extend(closed)
    return sorted(out, key=lambda s: (s.ell, s.p))


def _closed_channel(ch: Channel, params: ModelParams, p_max: int) -> list[BoundState]:
    states = []
    deep = deep_spectrum(ch, params)
    if deep is not None and deep.p <= p_max:
        states.append(deep)
    states.extend(shallow_spectrum(ch, params, p_max))
    return states

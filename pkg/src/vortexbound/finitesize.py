"""Finite-size physicality gate, bound-state onsets, and the regime diagram.

A putative bound state is physical only if its classical turning point
fits inside the trap: 1 - E/(n0 g12) > xi^2/(alpha R)^2.  Setting the
shallow-ladder level p exactly on that boundary gives a threshold
equation in lam_l for each (p, l); solving it over a range of trap
radii and fitting 1/lam = c (ln R/xi - ln r) reproduces the published
coefficient table.  The regime diagram counts fitted onset curves lying
below a given (R/xi, gamma^2) point, with the +-l degeneracy of two for
l >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from . import specfun
from .errors import SolverError, ValidationError
from .model import DEFAULT_ALPHA, ModelParams
from .spectrum import BoundState, Channel, lambda_ell, make_channel

# Curves drawn in the published regime diagram, per angular momentum.
# The diagram's counting convention (verified against its worked example
# 3 + 2 x 2 = 7 at R/xi = 1000, gamma^2 = 2.4) corresponds to the onset
# curves of the radial labels p = 1..5 of each l = 0..2 channel.
REGIME_ELLS = (0, 1, 2)
REGIME_CURVES_PER_ELL = 5
_REGIME_P0 = 1


@dataclass(frozen=True)
class OnsetFit:
    """Linear fit 1/lam* = c (ln(R/xi) - ln r) for the onset of state (p, l)."""

    ell: int
    p: int
    c: float
    ln_inv_r: float
    residual: float  # max relative deviation of the fit over the R grid

    def lambda_star(self, r_over_xi: float) -> float:
        return 1.0 / (self.c * (math.log(r_over_xi) + self.ln_inv_r))

    def onset_gamma2(self, r_over_xi: float, alpha: float = DEFAULT_ALPHA) -> float:
        lam = self.lambda_star(r_over_xi)
        return alpha * alpha * (self.ell * self.ell + lam * lam)


@dataclass(frozen=True)
class RegimeCell:
    r_over_xi: float
    gamma2: float
    n_states: int


def is_physical(state: BoundState, params: ModelParams) -> bool:
    """Eq.-41 gate: strict inequality, threshold states are unphysical."""
    return 1.0 - state.e_over_n0g12 > 1.0 / (params.alpha * params.r_trap) ** 2


def a_ell(ell: int) -> float:
    """a_l = (1 + 1/l) M(1/2, l+1; l) / M(3/2, l+2; l), the small-lam theta slope."""
    if ell < 1:
        raise ValidationError(f"a_ell requires ell >= 1, got {ell}")
    return (1.0 + 1.0 / ell) * specfun.chf_m(0.5, ell + 1.0, float(ell)) \
        / specfun.chf_m(1.5, ell + 2.0, float(ell))


def onset_gamma2_analytic(ell: int, r_over_xi: float, p: int = 0,
                          alpha: float = DEFAULT_ALPHA) -> float:
    """Leading-order closed form of the critical gamma^2 for the (p=0, l) onset.

    gamma^2_c = alpha^2 l^2 + c_{0,l}^-2 / ln(R/(r_{0,l} xi))^2 with
    c_{0,l} = (1/pi) sqrt(6/5), r_{0,l} = e^(gamma_E - a_l) sqrt(3 l^2/5)
    for l >= 1, and c_{0,0} = (3 pi/2 - gamma_E)^-1 sqrt(6/5),
    r_{0,0} = e^(gamma_E) sqrt(3 gamma_E^2/5).
    """
    if p != 0:
        raise ValidationError("the closed-form onset is known for p = 0 only")
    ge = specfun.EULER_GAMMA
    if ell == 0:
        c0 = math.sqrt(6.0 / 5.0) / (1.5 * math.pi - ge)
        r0 = math.exp(ge) * math.sqrt(3.0 * ge * ge / 5.0)
    else:
        c0 = math.sqrt(6.0 / 5.0) / math.pi
        r0 = math.exp(ge - a_ell(ell)) * math.sqrt(3.0 * ell * ell / 5.0)
    return alpha * alpha * ell * ell + c0 ** (-2) / math.log(r_over_xi / r0) ** 2


def _threshold(lam: float, ell: int, p: int, r_over_xi: float, alpha: float) -> float:
    """ln Lambda_l(lam) - pi p / lam + ln(alpha R / xi): zero at the onset.

    Equivalent to the shallow level p sitting exactly on the turning-point
    boundary, Lambda_l^2 exp(-2 pi p/lam) = (xi/(alpha R))^2.
    """
    ga = math.hypot(lam, ell)
    params = ModelParams(gamma2=(alpha * ga) ** 2, alpha=alpha, r_trap=max(r_over_xi, 2.0))
    ch = Channel(ell=ell, lambda_ell=lam, delta_ell=ga - ell, n_deep=0)
    return math.log(lambda_ell(ch, params)) - math.pi * p / lam \
        + math.log(alpha * r_over_xi)


def solve_onset(ell: int, p: int, r_over_xi: float,
                alpha: float = DEFAULT_ALPHA) -> float:
    """lam* at which the state (p, l) reaches the physicality boundary.

    Newton from the leading-order seed; if that strays, falls back to a
    scan-and-bisect on the first sign change from small lam.
    """
    if not 2.0 <= r_over_xi <= 1e7:
        raise ValidationError(f"r_over_xi out of supported range: {r_over_xi}")
    logr = math.log(r_over_xi)
    seed = math.pi * (p + (0.5 if ell == 0 else 1.0)) / (logr + 1.0)
    lam = seed
    f = lambda x: _threshold(x, ell, p, r_over_xi, alpha)
    try:
        cur = f(lam)
        for _ in range(60):
            h = 1e-7 * max(lam, 1e-3)
            slope = (f(lam + h) - cur) / h
            step = cur / slope
            nxt = lam - step
            if not 0.0 < nxt < 20.0:
                raise SolverError("newton left the domain")
            lam, cur = nxt, f(nxt)
            if abs(step) < 1e-12:
                return lam
        raise SolverError("newton stalled")
    except (SolverError, ValidationError, ZeroDivisionError, OverflowError):
        return _bisect_onset(f, ell, p, r_over_xi)


def _bisect_onset(f, ell, p, r_over_xi):
    grid = np.linspace(1e-3, 12.0, 3000)
    prev = f(grid[0])
    for i in range(1, len(grid)):
        cur = f(grid[i])
        if math.copysign(1.0, prev) != math.copysign(1.0, cur):
            return brentq(f, grid[i - 1], grid[i], xtol=1e-13, rtol=1e-14)
        prev = cur
    raise SolverError(
        f"onset equation has no root for ell={ell}, p={p}, R/xi={r_over_xi}")


def default_r_grid(n: int = 40) -> np.ndarray:
    """Log-spaced trap radii covering the fitted range 50 < R/xi < 3000."""
    return np.exp(np.linspace(math.log(50.0), math.log(3000.0), n))


def fit_onset(ell: int, p: int, r_grid=None, alpha: float = DEFAULT_ALPHA) -> OnsetFit:
    """Least-squares line through (ln(R/xi), 1/lam*) for the (p, l) onset."""
    if r_grid is None:
        r_grid = default_r_grid()
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.size < 3:
        raise ValidationError("fit_onset needs at least 3 radii")
    x = np.log(r_grid)
    y = np.array([1.0 / solve_onset(ell, p, r, alpha) for r in r_grid])
    if np.ptp(x) <= 0:
        raise SolverError("degenerate radius grid: fit is singular")
    c, b = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(y - (c * x + b)) / np.abs(y)))
    return OnsetFit(ell=ell, p=p, c=float(c), ln_inv_r=float(b / c), residual=resid)


def onset_table(ell_max: int = 2, p_max: int = 4, r_grid=None,
                alpha: float = DEFAULT_ALPHA) -> list[OnsetFit]:
    """Fits for every channel/state of the published coefficient table."""
    return [fit_onset(ell, p, r_grid, alpha)
            for ell in range(ell_max + 1) for p in range(p_max + 1)]


@lru_cache(maxsize=None)
def _regime_fits(alpha: float = DEFAULT_ALPHA) -> tuple[OnsetFit, ...]:
    fits = []
    for ell in REGIME_ELLS:
        for j in range(REGIME_CURVES_PER_ELL):
            fits.append(fit_onset(ell, _REGIME_P0 + j, alpha=alpha))
    return tuple(fits)


def regime_count(r_over_xi: float, gamma2: float,
                 alpha: float = DEFAULT_ALPHA) -> int:
    """Bound-state count of the published regime diagram at one point.

    Counts fitted onset curves below gamma2, weighting l >= 1 curves by
    the +-l degeneracy of two.
    """
    if r_over_xi <= 1.0 or gamma2 <= 0.0:
        raise ValidationError("regime_count needs r_over_xi > 1 and gamma2 > 0")
    total = 0
    for fit in _regime_fits(alpha):
        if gamma2 > fit.onset_gamma2(r_over_xi, alpha):
            total += 1 if fit.ell == 0 else 2
    return total


def regime_grid(r_range, gamma2_range, nx: int = 200, ny: int = 200,
                alpha: float = DEFAULT_ALPHA) -> list[RegimeCell]:
    """regime_count sampled on a log-r x linear-gamma2 grid."""
    r_lo, r_hi = r_range
    g_lo, g_hi = gamma2_range
    if r_lo <= 1.0 or g_lo <= 0.0 or r_hi <= r_lo or g_hi <= g_lo:
        raise ValidationError("regime_grid ranges must be positive and increasing")
    rs = np.exp(np.linspace(math.log(r_lo), math.log(r_hi), nx))
    gs = np.linspace(g_lo, g_hi, ny)
    fits = _regime_fits(alpha)
    # vectorized: per radius, threshold per curve, then count curves below
    cells = []
    weights = np.array([1 if f.ell == 0 else 2 for f in fits])
    for r in rs:
        thresholds = np.array([f.onset_gamma2(r, alpha) for f in fits])
        counts = (gs[:, None] > thresholds[None, :]) @ weights
        cells.extend(RegimeCell(r_over_xi=float(r), gamma2=float(g), n_states=int(c))
                     for g, c in zip(gs, counts))
    return cells

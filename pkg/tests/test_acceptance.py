"""Acceptance gate: one test per criterion, each at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
PASS lines and timings.
"""

import json
import math
import time

import numpy as np
import pytest

from vortexbound import (cli, finitesize, fullnumeric, model, specfun, spectrum,
                         vortex)

ALPHA = model.DEFAULT_ALPHA

TABLE_C = {
    0: [0.7251, 0.2365, 0.1357, 0.0932, 0.0706],
    1: [0.3248, 0.1674, 0.1130, 0.0843, 0.0663],
    2: [0.3133, 0.1554, 0.1042, 0.0786, 0.0629],
}
TABLE_LNINVR = {
    0: [1.0826, 0.2642, 0.2493, 0.4039, 0.5555],
    1: [1.0191, 0.6487, 0.4144, 0.3376, 0.3721],
    2: [0.1441, 0.2474, 0.2653, 0.2562, 0.2713],
}


def _report(num, label, t0, budget):
    elapsed = time.time() - t0
    print(f"\nACCEPTANCE {num}: PASS - {label} [{elapsed:.1f}s / budget {budget}]")
    assert elapsed < budget


def test_criterion_1_special_function_identities():
    t0 = time.time()
    # CHF-Laguerre equivalence to 1e-12
    for n in range(11):
        for beta in (0.0, 1.0, 2.0, 5.0):
            for x in (0.0, 1.3, 6.0, 14.0, 20.0):
                lhs = specfun.chf_m(-float(n), beta + 1.0, x)
                rhs = math.factorial(n) / specfun.pochhammer(beta + 1.0, n) \
                    * specfun.laguerre(n, beta, x)
                assert abs(lhs - rhs) <= 1e-12 * max(abs(rhs), 1.0)
    # incomplete-gamma recurrence to 1e-12
    for beta in np.linspace(0.5, 6.0, 12):
        for x in np.linspace(0.1, 20.0, 12):
            lhs = beta * specfun.lower_inc_gamma_fact(beta - 1.0, x)
            rhs = x ** beta * math.exp(-x) + specfun.lower_inc_gamma_fact(beta, x)
            assert abs(lhs - rhs) <= 1e-12 * max(abs(rhs), 1.0)
    # first-parameter derivative vs central finite differences to 1e-5
    h = 1e-6
    for n in range(5):
        for beta in (0.0, 1.5, 3.0):
            for x in (0.5, 2.5, 10.0):
                fd = (specfun.chf_m(-n + h, beta + 1.0, x)
                      - specfun.chf_m(-n - h, beta + 1.0, x)) / (2 * h)
                got = specfun.chf_m_da(n, beta, x)
                assert abs(got - fd) <= 1e-5 * max(abs(fd), 1e-3)
    # small-argument Bessel-K form to 1e-4 absolute at x = 1e-3
    for lam in (0.5, 1.0, 2.0, 3.0):
        ref = specfun.bessel_k_imag_small_x(lam, 1e-3)
        assert abs(specfun.bessel_k_imag(lam, 1e-3) - ref) < 1e-4
    _report(1, "special-function identities", t0, 10.0)


def test_criterion_2_asymptotics():
    t0 = time.time()
    assert abs(specfun.BETA_TRANSITION - 0.918) <= 1e-3
    for lam in np.linspace(1.0, 3.3, 24):
        k1, _ = specfun.k_transition(float(lam))
        asym = specfun.k_transition_asymptotic(float(lam))
        assert abs(asym / k1 - 1.0) <= 0.02, f"K1 asymptotics off at lam={lam}"
    _report(2, "transition-point asymptotics", t0, 30.0)


def test_criterion_3_nonexistence():
    t0 = time.time()
    rng = np.random.default_rng(2024)
    for trial in range(50):
        ell = int(rng.integers(1, 7))
        ga = ell * float(rng.uniform(0.15, 1.0))
        params = model.ModelParams(gamma2=(ALPHA * ga) ** 2)
        qs = np.linspace(params.gamma * 1e-4, params.gamma * 0.9999, 10000)
        r1 = spectrum.region1_log_deriv(params.gamma2 - qs ** 2, ell, params)
        assert np.all(r1 > 0.0), f"region1 not positive (trial {trial})"
        nu = math.sqrt(ell * ell - ga * ga) if ell > ga else 0.0
        x = qs * params.r_alpha
        k = specfun.bessel_k_real(nu, x)
        dk = specfun.bessel_k_real_dx(nu, x)
        r2 = qs * dk / k
        assert np.all(r2 < 0.0), f"region2 not negative (trial {trial})"
        mism = r1 - r2
        assert np.all(mism > 0.0), f"mismatch changed sign (trial {trial})"
    _report(3, "no bound states for gamma_alpha <= l (50 random channels)", t0, 60.0)


def test_criterion_4_cross_method_agreement():
    t0 = time.time()
    profile = vortex.variational_profile(ALPHA)
    checked = 0
    for gamma2 in (2.0, 4.0, 6.0):
        params = model.ModelParams(gamma2=gamma2, r_trap=1000.0)
        for ell in (0, 1, 2):
            ch = spectrum.make_channel(ell, params)
            if isinstance(ch, spectrum.NoBoundStates):
                continue
            roots = spectrum.find_states_exact(ch, params, params.gamma_alpha / 1000.0)
            problem = fullnumeric.EigenProblem(profile=profile, gamma2=gamma2,
                                               ell=ell, r_max=1000.0, n_grid=600000)
            drift = fullnumeric.require_converged(problem, tol=1e-6,
                                                  n_states=len(roots))
            assert np.all(drift < 1e-6)
            numeric = fullnumeric.radial_eigensolve(
                fullnumeric.EigenProblem(profile=profile, gamma2=gamma2, ell=ell,
                                         r_max=1000.0, n_grid=1200000),
                len(roots))
            for s, eps_num in zip(roots, numeric):
                assert abs(s.eps - eps_num) < 1e-4, \
                    f"g2={gamma2} l={ell} p={s.p}: {s.eps} vs {eps_num}"
                checked += 1
    assert checked >= 20
    _report(4, f"matching vs eigensolver on {checked} states, |d eps| < 1e-4", t0, 300.0)


def test_criterion_5_closed_form_accuracy():
    t0 = time.time()
    params = model.ModelParams(gamma2=6.0, r_trap=1000.0)
    for ell in (0, 1):
        ch = spectrum.make_channel(ell, params)
        exact = {s.p: s for s in
                 spectrum.find_states_exact(ch, params, params.gamma_alpha / 1000.0)}
        shallow = {s.p: s for s in spectrum.shallow_spectrum(ch, params, 4)}
        errs = {}
        for p in sorted(set(exact) & set(shallow)):
            errs[p] = abs((1.0 - shallow[p].e_over_n0g12)
                          / (1.0 - exact[p].e_over_n0g12) - 1.0)
        ps = sorted(errs)
        assert all(errs[p2] < errs[p1] for p1, p2 in zip(ps[:-1], ps[1:])), \
            f"shallow error not monotone for l={ell}: {errs}"
        for p in ps:
            if p >= ch.n_deep + 1:
                assert errs[p] < 0.05, f"l={ell} p={p}: {errs[p]:.3f}"
        deep = spectrum.deep_spectrum(ch, params)
        assert abs(deep.eps / exact[0].eps - 1.0) < 0.05
    _report(5, "closed forms vs exact roots at gamma^2 = 6", t0, 60.0)


def test_criterion_6_harmonic_oscillator_limit():
    t0 = time.time()
    params = model.ModelParams(gamma2=100.0)
    for ell in (0, 1):
        ch = spectrum.make_channel(ell, params)
        d = spectrum.deep_spectrum(ch, params)
        assert abs(d.e_over_hbar_omega - (ell + 1.0)) < 0.01
    _report(6, "deep states reach the oscillator spectrum at gamma^2 = 100", t0, 5.0)


def test_criterion_7_onset_table_round_trip():
    t0 = time.time()
    worst_c, worst_r = 0.0, 0.0
    for ell in (0, 1, 2):
        for p in range(5):
            fit = finitesize.fit_onset(ell, p)
            dc = abs(fit.c - TABLE_C[ell][p])
            dr = abs(fit.ln_inv_r - TABLE_LNINVR[ell][p])
            assert dc < 5e-3, f"(l={ell}, p={p}): c={fit.c:.4f}"
            assert dr < 5e-2, f"(l={ell}, p={p}): ln(1/r)={fit.ln_inv_r:.4f}"
            worst_c, worst_r = max(worst_c, dc), max(worst_r, dr)
    _report(7, f"30 onset coefficients (max |dc|={worst_c:.1e}, "
               f"|d ln 1/r|={worst_r:.1e})", t0, 60.0)


def test_criterion_8_regime_diagram_spot_check():
    finitesize._regime_fits(ALPHA)  # fitting the curves is setup, not the query
    t0 = time.time()
    assert finitesize.regime_count(1000.0, 2.4) == 7
    _report(8, "regime count at (R/xi, gamma^2) = (1000, 2.4) is 3 + 2x2 = 7", t0, 1.0)


def test_criterion_9_vortex_solver():
    t0 = time.time()
    ode = vortex.solve_vortex_ode()
    assert ode.max_residual < 1e-8
    assert abs(ode(10.0) - (1.0 - 0.5 / 100.0)) < 1e-3
    # variational C^1 continuity at the crossover, machine precision
    var = vortex.variational_profile(ALPHA)
    ra = var.r_alpha
    core_val, core_slope = 0.5 * ALPHA * ra, 0.5 * ALPHA
    tail_val = math.sqrt(1.0 - 1.0 / (ALPHA * ra) ** 2)
    tail_slope = 1.0 / (ALPHA ** 2 * ra ** 3 * tail_val)
    assert core_val == pytest.approx(tail_val, rel=4e-16)
    assert core_slope == pytest.approx(tail_slope, rel=4e-16)
    # channel construction realizes gamma_c = alpha * l
    for ell in (1, 2, 3):
        g2c = (ALPHA * ell) ** 2
        assert isinstance(spectrum.make_channel(ell, model.ModelParams(gamma2=0.999 * g2c)),
                          spectrum.NoBoundStates)
        assert isinstance(spectrum.make_channel(ell, model.ModelParams(gamma2=1.001 * g2c)),
                          spectrum.Channel)
    _report(9, "vortex profile residual/tail/continuity and channel onsets", t0, 30.0)


def test_criterion_10_cli_determinism(tmp_path):
    t0 = time.time()
    sysfile = tmp_path / "sys.json"
    sysfile.write_text(json.dumps({"m1": 1.2e-26, "m2": 3.0e-25, "g11": 2e-38,
                                   "g12": 3e-38, "n0": 5e12}))
    commands = {
        "spectrum": ["spectrum", "--gamma2", "6", "--lmax", "1", "--pmax", "2",
                     "--method", "exact"],
        "profile": ["profile", "--gamma2", "6", "--rmax", "8", "--n", "40"],
        "compare": ["compare", "--gamma2", "6", "--lmax", "0", "--radius", "200",
                    "--ngrid", "20000"],
        "onset-table": ["onset-table", "--lmax", "1", "--pmax", "1", "--npts", "12"],
        "regime-diagram": ["regime-diagram", "--rmin", "500", "--rmax", "1500",
                           "--gmin", "0.5", "--gmax", "3.0", "--nx", "4", "--ny", "4"],
        "specfun-check": ["specfun-check", "--lmin", "1", "--lmax", "3.3", "--n", "8"],
        "presets": ["presets"],
        "scales": ["scales", str(sysfile)],
    }
    for name, argv in commands.items():
        blobs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{name}.{tag}"
            assert cli.main(argv + ["--out", str(out)]) == 0, name
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1], f"{name} output not byte-identical"
    _report(10, "byte-identical CLI reruns for all subcommands", t0, 600.0)

"""Acceptance criteria, one test per criterion, at the stated tolerances.

Each test prints a single [PASS]/[FAIL] line (run pytest -s to see them all).
"""

import contextlib

import numpy as np
import pytest

from grolab.baseline import (
    DAVIE_REEDS_C,
    LAMBDA_STAR,
    F_value,
    ReedsParams,
    davie_reeds_bound,
    optimize_lambda,
    solve_eta_star,
)
from grolab.certify import (
    all_certified_checks,
    certified_baseline_checks,
    certified_chain_checks,
    certified_pairing_checks,
)
from grolab.chain import (
    BETA_STAR,
    ChainParams,
    KAPPA0,
    K0,
    L0,
    final_chain,
    kappa_eff,
    log_tail_envelope_margin,
    neighborhood_drop,
)
from grolab.explorer import (
    ConditionalNormInput,
    McConfig,
    beta_derivative_scan,
    mc_norm_estimate,
    r_lambda_norm_1d,
    richardson_limit,
    sample_feasible_profile,
    sample_theta_member,
    sign_ascent,
)
from grolab.gauss import gauss_integrate, hermite_eval
from grolab.pairing import PairingConstants, kappa_Q, signflip_check
from grolab.profiles import (
    F_value_dual,
    V_value,
    dual_value,
    gap_certificate,
    lp_maximize,
    odd_part,
)

LAM_LIT = 0.197479091


@contextlib.contextmanager
def criterion(num: int, label: str):
    try:
        yield
    except BaseException:
        print(f"[FAIL] criterion {num}: {label}")
        raise
    print(f"[PASS] criterion {num}: {label}")


def test_criterion_1_baseline_constant():
    with criterion(1, "Davie-Reeds bound and optimal lambda"):
        assert davie_reeds_bound(LAM_LIT) == pytest.approx(
            1.676956674215576, abs=1e-12)
        assert optimize_lambda() == pytest.approx(
            0.19747909099498196, abs=1e-8)


def test_criterion_2_reeds_point():
    with criterion(2, "Reeds point eta* and alpha*"):
        eta = solve_eta_star(LAM_LIT)
        assert eta == pytest.approx(0.255730213173163, abs=1e-11)
        assert LAM_LIT / eta == pytest.approx(0.772216503281451, abs=1e-11)


def test_criterion_3_pairing_constants():
    with criterion(3, "third-chaos pairing constants"):
        cons = PairingConstants.at_eta(solve_eta_star(LAM_LIT))
        targets = {
            "B": -0.721715133242779,
            "A_max": 0.000839319067615,
            "kappa_Q": 0.086812004849191,
            "p": 0.201840836034193,
            "s1": 0.0256680575214142,
            "t2": 0.00436174503419317,
            "transverse": 0.0414080846777763,
            "pairing_lower": 0.0454039202,
        }
        for name, target in targets.items():
            assert getattr(cons, name) == pytest.approx(target, abs=1e-9), name


def test_criterion_4_dual_certificate():
    with criterion(4, "dual certificate, LP agreement, gap identity"):
        params = ReedsParams.at_reeds_point(LAM_LIT)
        f_dual = F_value_dual(params)
        _, lp_val = lp_maximize(params, 4096)
        assert abs(f_dual - lp_val) <= 1e-8
        assert abs(f_dual - (1.0 - LAM_LIT) / DAVIE_REEDS_C) <= 1e-10
        rng = np.random.Generator(np.random.Philox(key=41))
        for _ in range(200):
            prof = sample_feasible_profile(int(rng.integers(1 << 30)), params)
            cert = gap_certificate(prof, params)
            assert abs(cert.gap - cert.tail_integral) <= 1e-10


def test_criterion_5_taylor_gap_scan():
    with criterion(5, "F(alpha) quadratic-drop scan"):
        lam = optimize_lambda()
        alpha_star = lam / solve_eta_star(lam)
        f_star = F_value(alpha_star, lam)
        for a in np.arange(0.05, 0.99, 1e-3):
            bound = f_star - 0.9 * min((a - alpha_star) ** 2, 1e-2) + 1e-9
            assert F_value(float(a), lam) <= bound


def test_criterion_6_kappa_eff_and_drop():
    with criterion(6, "kappa_eff and the neighborhood norm drop"):
        assert kappa_eff(1e-7, KAPPA0, K0, L0, LAMBDA_STAR) >= 0.0058
        for beta in (1e-10, 8e-25):
            drop = neighborhood_drop(ChainParams.reference_defaults(beta))
            assert drop >= 0.0057 * beta


def test_criterion_7_final_chain():
    with criterion(7, "final inequality chain and the K_G increment"):
        report = final_chain(BETA_STAR)
        assert report.final_drop == pytest.approx(4.56e-27, abs=1e-30)
        assert report.kg_increment >= 1.596e-26
        assert report.kg_increment > 1e-26


def test_criterion_8_property_suites():
    with criterion(8, "bulk property suites (zero violations)"):
        rng = np.random.Generator(np.random.Philox(key=8))
        # sign-flip inequality on 1e6 triples
        a = rng.uniform(-10, 10, 1_000_000)
        b = rng.uniform(-10, 10, 1_000_000)
        beta = rng.uniform(0, 1, 1_000_000)
        lhs, rhs = signflip_check(a, b, beta)
        assert np.all(lhs <= rhs + 1e-12)

        params = ReedsParams.at_reeds_point(LAM_LIT)
        # weak duality on 500 feasible profiles, 20 random dual points each
        profiles_500 = [sample_feasible_profile(2_000_000 + k, params)
                        for k in range(500)]
        for prof in profiles_500:
            v = V_value(prof, params)
            for mu in rng.uniform(-1.5, 1.5, 20):
                assert v <= dual_value(float(mu), params) + 1e-10

        # tail equality under odd-part on the same 500 profiles
        from test_profiles import _tail_sign_defect
        from grolab.gauss import QuadratureSpec
        spec = QuadratureSpec()
        for prof in profiles_500:
            direct = _tail_sign_defect(prof, params.eta, spec)
            via_odd = _tail_sign_defect(odd_part(prof), params.eta, spec)
            assert abs(direct - via_odd) <= 1e-12

        # inner H3 bound on 200 zero-moment profiles
        from grolab.pairing import A_bound_check
        eta = params.eta
        for k in range(200):
            member = sample_theta_member(3_000_000 + k, lam=LAM_LIT)
            a_val, bound = A_bound_check(member, eta)
            assert a_val <= bound + 1e-10

        # Hermite orthogonality
        norms = {0: 1.0, 1: 1.0, 2: 2.0, 3: 6.0}
        for j in range(4):
            for k in range(4):
                val = gauss_integrate(
                    lambda z: hermite_eval(j, z) * hermite_eval(k, z))
                expected = norms[j] if j == k else 0.0
                assert abs(val - expected) <= 1e-11

        # density envelope 0.583 Phi(-a) log(1/Phi(-a)) on [2.3, 40]
        for a_val in np.linspace(2.3, 40.0, 1000):
            assert log_tail_envelope_margin(float(a_val)) >= 0.0


def test_criterion_9_explorer():
    with criterion(9, "perturbation scans, sign ascent, Monte Carlo"):
        params = ReedsParams.at_reeds_point(LAM_LIT)
        betas = [1e-3 / 2 ** k for k in range(4)]
        b_tail, _, kq = kappa_Q(params.eta)
        for seed in range(20):
            member = sample_theta_member(4_000_000 + seed, lam=LAM_LIT)
            rows = beta_derivative_scan(member, params, betas)
            limit = richardson_limit(rows)
            a_inner = gauss_integrate(
                lambda z: member.evaluate(z) * hermite_eval(3, z),
                kinks=list(member.breakpoints) + [-member.z_cut, member.z_cut],
                interval=(-member.z_cut, member.z_cut))
            assert limit == pytest.approx(
                (b_tail ** 2 - a_inner ** 2) / 6.0, abs=1e-6)
            assert limit >= kq - 1e-9

        rng = np.random.Generator(np.random.Philox(key=9))
        for _ in range(50):
            start = sample_feasible_profile(int(rng.integers(1 << 30)), params)
            _, values = sign_ascent(start, params, 5)
            assert all(v2 >= v1 - 1e-10 for v1, v2 in zip(values, values[1:]))

        member = sample_theta_member(4_100_000, lam=LAM_LIT)
        truth = r_lambda_norm_1d(ConditionalNormInput(member, params, 0.0))
        for seed in (1, 2, 3):
            est, se = mc_norm_estimate(
                member, McConfig(dimension=1, samples=200_000, seed=seed),
                params, 0.0)
            assert abs(est - truth) <= 4.0 * se


def test_criterion_10_certified_intervals():
    with criterion(10, "interval certification of criteria 1-3, 6, 7"):
        for check in certified_baseline_checks():
            assert check.passed, check.name
        for check in certified_pairing_checks():
            assert check.passed, check.name
        for check in certified_chain_checks():
            assert check.passed, check.name
        assert all(c.passed for c in all_certified_checks())

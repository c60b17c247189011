"""Command-line surface: verification suites, reports, sweeps, profile I/O.

Exit codes: 0 when every check passes, 1 when a check fails (the failing
check is named on stderr), 2 for usage/config errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import baseline, chain, explorer, pairing, profiles
from .certify import all_certified_checks
from .errors import GrolabError
from .gauss import QuadratureSpec, gauss_integrate, hermite_eval
from .reporting import (
    Check,
    VerificationOutcome,
    approx_check,
    bound_check,
    emit_report,
    flag_check,
    outcome_to_dict,
    to_json,
)

COMMANDS = ("constants", "baseline", "profile", "pairing", "chain", "explore",
            "verify-all")


class UsageError(GrolabError, ValueError):
    """Bad command, flag, or config value; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    quadrature: QuadratureSpec = QuadratureSpec()
    output_path: str | None = None
    certified: bool = False
    seed: int = 20260809
    beta: float | None = None
    epsilon: float | None = None
    grid: int | None = None
    profile_path: str | None = None
    save_profile: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")


# -- suites -------------------------------------------------------------------

def _constants_checks(cfg: RunConfig) -> list[Check]:
    lam_lit = 0.197479091
    eta = baseline.solve_eta_star(lam_lit)
    cons = pairing.PairingConstants.at_eta(eta)
    checks = [
        approx_check("davie_reeds_bound", 1.676956674215576,
                     baseline.davie_reeds_bound(lam_lit), 1e-12),
        approx_check("lambda_star", 0.19747909099498196,
                     baseline.optimize_lambda(), 1e-8),
        approx_check("eta_star", 0.255730213173163, eta, 1e-11),
        approx_check("alpha_star", 0.772216503281451, lam_lit / eta, 1e-11),
        approx_check("B", -0.721715133242779, cons.B, 1e-9),
        approx_check("A_max", 0.000839319067615, cons.A_max, 1e-9),
        approx_check("kappa_Q", 0.086812004849191, cons.kappa_Q, 1e-9),
        approx_check("p", 0.201840836034193, cons.p, 1e-9),
        approx_check("s1", 0.0256680575214142, cons.s1, 1e-9),
        approx_check("t2", 0.00436174503419317, cons.t2, 1e-9),
        approx_check("transverse", 0.0414080846777763, cons.transverse, 1e-9),
        approx_check("pairing_lower", 0.0454039202, cons.pairing_lower, 1e-9),
        bound_check("K0_upper", 0.359, cons.K0_upper, "<="),
    ]
    return checks


def _baseline_checks(cfg: RunConfig) -> list[Check]:
    lam_lit = 0.197479091
    lam_opt = baseline.optimize_lambda()
    checks = _constants_checks(cfg)[:4]
    fp, _ = baseline.F_derivatives(0.772216503281451, lam_lit)
    checks.append(approx_check("F_prime_at_alpha_star", 0.0, fp, 1e-9))
    den = baseline.reeds_denominator(lam_lit)
    params = baseline.ReedsParams.at_reeds_point(lam_lit)
    checks.append(approx_check("F_equals_denominator", den,
                               baseline.F_value(params.alpha, lam_lit), 1e-12))
    # quadratic-drop scan of F over the full alpha grid
    alpha_star = lam_opt / baseline.solve_eta_star(lam_opt)
    f_star = baseline.F_value(alpha_star, lam_opt)
    ok = True
    for a in np.arange(0.05, 0.99, 1e-3):
        gap = f_star - 0.9 * min((a - alpha_star) ** 2, 1e-2) + 1e-9
        if baseline.F_value(float(a), lam_opt) > gap:
            ok = False
            break
    checks.append(flag_check("taylor_gap_scan", ok))
    return checks


def _profile_checks(cfg: RunConfig) -> list[Check]:
    lam_lit = 0.197479091
    params = baseline.ReedsParams.at_reeds_point(lam_lit)
    spec = cfg.quadrature
    f_dual = profiles.F_value_dual(params, spec)
    target = (1.0 - lam_lit) / baseline.davie_reeds_bound(lam_lit)
    checks = [approx_check("F_dual_vs_ratio", target, f_dual, 1e-10)]
    grid = cfg.grid if cfg.grid else 1024
    lp_prof, lp_val = profiles.lp_maximize(params, grid, spec)
    checks.append(approx_check("lp_vs_dual", f_dual, lp_val, 1e-8))
    if cfg.save_profile:
        with open(cfg.save_profile, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(profiles.profile_to_text(lp_prof) + "\n")
    if cfg.profile_path:
        with open(cfg.profile_path, encoding="utf-8") as fh:
            loaded = profiles.profile_from_text(fh.read())
        cert = profiles.gap_certificate(
            loaded, baseline.ReedsParams(lam=lam_lit,
                                         alpha=profiles.moment(loaded, spec)),
            spec)
        checks.append(approx_check("loaded_profile_gap_identity",
                                   cert.tail_integral, cert.gap, 1e-10))
    worst = 0.0
    for k in range(12):
        prof = explorer.sample_feasible_profile(cfg.seed + k, params)
        cert = profiles.gap_certificate(prof, params, spec)
        worst = max(worst, abs(cert.gap - cert.tail_integral))
    checks.append(bound_check("gap_identity_max_dev", 1e-10, worst, "<="))
    member = explorer.sample_theta_member(cfg.seed, lam=lam_lit)
    cert = profiles.gap_certificate(member, params, spec)
    checks.append(approx_check("maximizer_gap_zero", 0.0, cert.gap, 1e-12))
    return checks


def _pairing_checks(cfg: RunConfig) -> list[Check]:
    checks = _constants_checks(cfg)[4:]
    eta = baseline.solve_eta_star(0.197479091)
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    a = rng.uniform(-10, 10, 100_000)
    b = rng.uniform(-10, 10, 100_000)
    bet = rng.uniform(0, 1, 100_000)
    lhs, rhs = pairing.signflip_check(a, b, bet)
    checks.append(flag_check("signflip_inequality_100k",
                             bool(np.all(lhs <= rhs + 1e-12))))
    ok = True
    for k in range(20):
        member = explorer.sample_theta_member(cfg.seed + 1000 + k,
                                              lam=0.197479091)
        a_val, bound = pairing.A_bound_check(member, eta, cfg.quadrature)
        if a_val > bound + 1e-10:
            ok = False
    checks.append(flag_check("A_bound_20_members", ok))
    # at the solved eta, 2 eta pdf(eta) equals lambda, so t2 = p - lambda
    p, _, t2 = pairing.inner_constants(eta)
    checks.append(approx_check("t2_identity", p - 0.197479091, t2, 1e-9))
    return checks


def _chain_checks(cfg: RunConfig) -> list[Check]:
    epsilon = cfg.epsilon if cfg.epsilon else chain.EPSILON_STAR
    keff = chain.kappa_eff(epsilon, chain.KAPPA0, chain.K0,
                           chain.L0, baseline.LAMBDA_STAR)
    checks = [bound_check(f"kappa_eff(eps={epsilon:g})", 0.0058, keff, ">=")]
    for beta in (1e-10, 8e-25):
        params = chain.ChainParams.reference_defaults(beta)
        drop = chain.neighborhood_drop(params)
        checks.append(bound_check(f"neighborhood_drop_{beta:g}",
                                  0.0057 * beta, drop, ">="))
    beta = cfg.beta if cfg.beta else chain.BETA_STAR
    report = chain.final_chain(beta)
    if beta == chain.BETA_STAR:
        checks.append(approx_check("final_drop", 4.56e-27, report.final_drop,
                                   1e-30))
    checks.append(bound_check("kg_increment", 1.596e-26,
                              report.kg_increment, ">="))
    checks.append(bound_check("K_strip", 7.0, chain.K_strip(0.36, 0.6), "<="))
    checks.append(bound_check("L0_bound", 2.66, chain.L0_bound(0.6), "<="))
    checks.append(bound_check("C_z0", 1.7, chain.C_z0(0.36), "<="))
    env_ok = all(chain.log_tail_envelope_margin(float(a)) >= 0.0
                 for a in np.linspace(2.3, 40.0, 500))
    checks.append(flag_check("gaussian_tail_envelope", env_ok))
    for name, value, bound, ok in chain.strip_case_checks():
        checks.append(Check(name=f"strip:{name}", expected=bound, actual=value,
                            tolerance=None, passed=ok))
    return checks


def _explore_checks(cfg: RunConfig) -> list[Check]:
    spec = cfg.quadrature
    params = baseline.ReedsParams.at_reeds_point(0.197479091)
    betas = [1e-3 / 2 ** k for k in range(4)]
    checks = []
    for k in range(2):
        member = explorer.sample_theta_member(cfg.seed + 2000 + k,
                                              lam=0.197479091)
        rows = explorer.beta_derivative_scan(member, params, betas, spec)
        limit = explorer.richardson_limit(rows)
        a_val = gauss_integrate(
            lambda z: member.evaluate(z) * hermite_eval(3, z), spec,
            kinks=list(member.breakpoints) + [-member.z_cut, member.z_cut],
            interval=(-member.z_cut, member.z_cut))
        b_val, _, kq = pairing.kappa_Q(params.eta)
        expected = (b_val * b_val - a_val * a_val) / 6.0
        checks.append(approx_check(f"scan_limit_{k}", expected, limit, 1e-6))
        checks.append(bound_check(f"scan_limit_vs_kappa_Q_{k}", kq - 1e-9,
                                  limit, ">="))
    ok = True
    for k in range(5):
        start = explorer.sample_feasible_profile(cfg.seed + 3000 + k, params)
        _, values = explorer.sign_ascent(start, params, 6, spec)
        if any(v2 < v1 - 1e-10 for v1, v2 in zip(values, values[1:])):
            ok = False
    checks.append(flag_check("sign_ascent_monotone", ok))
    member = explorer.sample_theta_member(cfg.seed + 4000, lam=0.197479091)
    est, se = explorer.mc_norm_estimate(
        member, explorer.McConfig(dimension=1, samples=100_000, seed=cfg.seed),
        params, 0.0)
    truth = explorer.r_lambda_norm_1d(
        explorer.ConditionalNormInput(member, params, 0.0), spec)
    checks.append(bound_check("mc_within_4_sigma", 4.0 * se, abs(est - truth),
                              "<="))
    return checks


_SUITES = {
    "constants": _constants_checks,
    "baseline": _baseline_checks,
    "profile": _profile_checks,
    "pairing": _pairing_checks,
    "chain": _chain_checks,
    "explore": _explore_checks,
}


def run(config: RunConfig) -> VerificationOutcome:
    """Execute the configured suite; deterministic for a fixed config."""
    if config.command == "verify-all":
        checks: list[Check] = []
        for name in ("baseline", "profile", "pairing", "chain", "explore"):
            checks.extend(_SUITES[name](config))
    else:
        checks = _SUITES[config.command](config)
    if config.certified:
        for cc in all_certified_checks():
            checks.append(Check(
                name=f"certified:{cc.name} ({cc.requirement})",
                expected=None, actual=cc.hi, tolerance=None, passed=cc.passed))
    return VerificationOutcome(checks=tuple(checks))


def sweep(parameter: str, rng: tuple[float, float, int],
          config: RunConfig) -> str:
    """CSV sweep of one parameter over (lo, hi, steps)."""
    lo, hi, steps = rng
    if steps < 2:
        raise UsageError(f"steps must be >= 2, got {steps}")
    if not lo < hi:
        raise UsageError(f"need lo < hi, got ({lo}, {hi})")
    lines: list[str] = []
    if parameter == "lambda":
        lines.append("lambda,eta,alpha,denominator,bound")
        for lam in np.linspace(lo, hi, steps):
            eta = baseline.solve_eta_star(float(lam))
            den = baseline.reeds_denominator(float(lam))
            lines.append(f"{lam:.17g},{eta:.17g},{lam / eta:.17g},"
                         f"{den:.17g},{(1 - lam) / den:.17g}")
    elif parameter == "epsilon":
        lines.append("epsilon,kappa_eff")
        for eps in np.geomspace(lo, hi, steps):
            val = chain.kappa_eff(float(eps), chain.KAPPA0, chain.K0,
                                  chain.L0, baseline.LAMBDA_STAR)
            lines.append(f"{eps:.17g},{val:.17g}")
    elif parameter == "beta":
        lines.append("beta,drop_per_beta,final_drop,kg_increment")
        for beta in np.geomspace(lo, hi, steps):
            beta = float(beta)
            drop = chain.neighborhood_drop(chain.ChainParams.reference_defaults(beta))
            if beta < 1e-10:
                rep = chain.final_chain(beta)
                fin, inc = f"{rep.final_drop:.17g}", f"{rep.kg_increment:.17g}"
            else:
                fin, inc = "", ""
            lines.append(f"{beta:.17g},{drop / beta:.17g},{fin},{inc}")
    elif parameter == "grid":
        lines.append("grid,lp_value,abs_error_vs_dual")
        params = baseline.ReedsParams.at_reeds_point(0.197479091)
        f_dual = profiles.F_value_dual(params, config.quadrature)
        sizes = sorted({int(round(g)) for g in np.geomspace(lo, hi, steps)})
        for size in sizes:
            _, val = profiles.lp_maximize(params, size, config.quadrature)
            lines.append(f"{size},{val:.17g},{abs(val - f_dual):.17g}")
    else:
        raise UsageError(f"unknown sweep parameter {parameter!r}")
    return "\n".join(lines) + "\n"


# -- config file and argument handling ----------------------------------------

_CONFIG_KEYS = {"seed", "certified", "beta", "epsilon", "grid", "out",
                "truncation", "rel_tol", "abs_tol", "max_subdivisions",
                "profile", "save_profile"}


def load_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].split(";", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value")
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in _CONFIG_KEYS:
                    raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
                out[key] = value
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    file_vals = load_config_file(args.config) if args.config else {}

    def pick(flag_val, key: str, cast):
        if flag_val is not None:
            return flag_val
        if key in file_vals:
            try:
                return cast(file_vals[key])
            except ValueError as exc:
                raise UsageError(f"bad config value for {key}: {exc}") from exc
        return None

    try:
        quad = QuadratureSpec(
            truncation=pick(None, "truncation", float) or 12.0,
            rel_tol=pick(None, "rel_tol", float) or 1e-12,
            abs_tol=pick(None, "abs_tol", float) or 1e-14,
            max_subdivisions=pick(None, "max_subdivisions", int) or 4000,
        )
    except GrolabError as exc:
        raise UsageError(str(exc)) from exc

    certified = args.certified or file_vals.get("certified", "").lower() in (
        "1", "true", "yes")
    return RunConfig(
        command=args.command,
        quadrature=quad,
        output_path=pick(args.out, "out", str),
        certified=certified,
        seed=pick(args.seed, "seed", int) or 20260809,
        beta=pick(args.beta, "beta", float),
        epsilon=pick(args.epsilon, "epsilon", float),
        grid=pick(args.grid, "grid", int),
        profile_path=file_vals.get("profile"),
        save_profile=file_vals.get("save_profile"),
    )


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--out", help="write the JSON report (or CSV) here")
    p.add_argument("--certified", action="store_true",
                   help="append interval-certified checks")
    p.add_argument("--seed", type=int, help="seed for randomized suites")
    p.add_argument("--beta", type=float, help="perturbation size override")
    p.add_argument("--epsilon", type=float, help="neighborhood radius override")
    p.add_argument("--grid", type=int, help="discretization grid size")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="grolab",
        description="Verify the constants and inequalities of the improved "
                    "Grothendieck lower bound.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _add_common_flags(p)
    sw = sub.add_parser("sweep")
    _add_common_flags(sw)
    sw.add_argument("--parameter", required=True,
                    choices=("lambda", "epsilon", "beta", "grid"))
    sw.add_argument("--lo", type=float, required=True)
    sw.add_argument("--hi", type=float, required=True)
    sw.add_argument("--steps", type=int, required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "sweep":
            cfg = build_config(argparse.Namespace(command="constants",
                                                  **{k: getattr(args, k) for k in
                                                     ("config", "out", "certified",
                                                      "seed", "beta", "epsilon",
                                                      "grid")}))
            csv_text = sweep(args.parameter, (args.lo, args.hi, args.steps), cfg)
            if cfg.output_path:
                with open(cfg.output_path, "w", encoding="utf-8",
                          newline="\n") as fh:
                    fh.write(csv_text)
            else:
                sys.stdout.write(csv_text)
            return 0
        cfg = build_config(args)
        outcome = run(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except GrolabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if cfg.output_path:
        emit_report(outcome, cfg.output_path)
    else:
        sys.stdout.write(to_json(outcome_to_dict(outcome)) + "\n")
    for check in outcome.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"[{status}] {check.name}", file=sys.stderr)
    if not outcome.overall:
        failing = [c.name for c in outcome.checks if not c.passed]
        print(f"failed checks: {', '.join(failing)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

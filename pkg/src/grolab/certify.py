"""Interval-certified re-derivations of the headline constants.

Each check rebuilds a quantity from scratch with the outward-rounded interval
kernel and verifies strict separation: the enclosure sits inside the +-tol
window of an equality target, or entirely on the required side of a one-sided
bound.  Nothing here reuses the floating-point code paths being certified.
"""

from __future__ import annotations

from dataclasses import dataclass

from .baseline import LAMBDA_STAR
from .chain import ALPHA_MIN, EPSILON_STAR, K0, KAPPA0, L0, RHO_STAR
from .errors import InternalCheckError
from .intervals import (
    Interval,
    SQRT_2_OVER_PI,
    SQRT_2PI,
    gaussian_cdf_iv,
    gaussian_pdf_iv,
)


@dataclass(frozen=True)
class CertifiedCheck:
    """One interval-certified verdict."""

    name: str
    lo: float
    hi: float
    requirement: str
    passed: bool


def _eta_equation_iv(x: float, lam: Interval) -> Interval:
    xi = Interval.exact(x)
    return SQRT_2_OVER_PI * xi * (-(xi.square() * 0.5)).exp() - lam


def eta_star_enclosure(lam: float) -> Interval:
    """Certified enclosure of the root eta in (0, 1) for the given lambda.

    Bisection keeps endpoints whose equation signs are interval-certified;
    it stops early if a midpoint's sign cannot be resolved, leaving a valid
    (slightly wider) bracket.
    """
    lam_iv = Interval.exact(lam)
    lo, hi = 0.01, 0.99
    if not _eta_equation_iv(lo, lam_iv).strictly_below(0.0):
        raise InternalCheckError("left bracket sign not certified")
    if not _eta_equation_iv(hi, lam_iv).strictly_above(0.0):
        raise InternalCheckError("right bracket sign not certified")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        g = _eta_equation_iv(mid, lam_iv)
        if g.strictly_below(0.0):
            lo = mid
        elif g.strictly_above(0.0):
            hi = mid
        else:
            break
    return Interval(lo, hi)


def _denominator_iv(lam: float) -> tuple[Interval, Interval, Interval]:
    """(eta, alpha, denominator) enclosures at the given lambda."""
    lam_iv = Interval.exact(lam)
    eta = eta_star_enclosure(lam)
    alpha = lam_iv / eta
    one = Interval.exact(1.0)
    den = alpha.square() + lam_iv * (one - gaussian_cdf_iv(-eta) * 4.0)
    return eta, alpha, den


def bound_enclosure(lam: float) -> Interval:
    """Certified enclosure of (1 - lambda) / denominator(lambda)."""
    _, _, den = _denominator_iv(lam)
    return (Interval.exact(1.0) - Interval.exact(lam)) / den


def _bound_derivative_iv(lam: float) -> Interval:
    """Enclosure of the exact derivative of the bound in lambda."""
    lam_iv = Interval.exact(lam)
    one = Interval.exact(1.0)
    eta = eta_star_enclosure(lam)
    pdf_eta = gaussian_pdf_iv(eta)
    deta = one / (pdf_eta * 2.0 * (one - eta.square()))
    alpha = lam_iv / eta
    dalpha = (eta - lam_iv * deta) / eta.square()
    phi_m = gaussian_cdf_iv(-eta)
    den = alpha.square() + lam_iv * (one - phi_m * 4.0)
    dden = alpha * dalpha * 2.0 + (one - phi_m * 4.0) + lam_iv * pdf_eta * deta * 4.0
    return (-den - (one - lam_iv) * dden) / den.square()


def certified_baseline_checks() -> list[CertifiedCheck]:
    lam = 0.197479091
    eta, alpha, _ = _denominator_iv(lam)
    bound = bound_enclosure(lam)
    d_left = _bound_derivative_iv(LAMBDA_STAR - 1e-8)
    d_right = _bound_derivative_iv(LAMBDA_STAR + 1e-8)
    checks = [
        CertifiedCheck("baseline_bound", bound.lo, bound.hi,
                       "within 1.676956674215576 +- 1e-12",
                       bound.within(1.676956674215576, 1e-12)),
        CertifiedCheck("eta_star", eta.lo, eta.hi,
                       "within 0.255730213173163 +- 1e-11",
                       eta.within(0.255730213173163, 1e-11)),
        CertifiedCheck("alpha_star", alpha.lo, alpha.hi,
                       "within 0.772216503281451 +- 1e-11",
                       alpha.within(0.772216503281451, 1e-11)),
        CertifiedCheck("argmax_bracket_left", d_left.lo, d_left.hi,
                       "derivative > 0 at lambda* - 1e-8",
                       d_left.strictly_above(0.0)),
        CertifiedCheck("argmax_bracket_right", d_right.lo, d_right.hi,
                       "derivative < 0 at lambda* + 1e-8",
                       d_right.strictly_below(0.0)),
    ]
    return checks


def _pairing_ivs(eta: Interval) -> dict[str, Interval]:
    one = Interval.exact(1.0)
    pdf0 = gaussian_pdf_iv(Interval.exact(0.0))
    pdf_eta = gaussian_pdf_iv(eta)
    b = -(one - eta.square()) * pdf_eta * 2.0
    a_max = eta.square() * (pdf0 - pdf_eta)
    kq = (b.square() - a_max.square()) / 6.0
    p = gaussian_cdf_iv(eta) * 2.0 - one
    s1 = (pdf0 - pdf_eta) * 2.0
    t2 = p - eta * pdf_eta * 2.0
    transverse = p.square() + s1.square() + t2.square() * 0.5
    pairing = kq - transverse
    return {"B": b, "A_max": a_max, "kappa_Q": kq, "p": p, "s1": s1,
            "t2": t2, "transverse": transverse, "pairing_lower": pairing}


_PAIRING_TARGETS = {
    "B": -0.721715133242779,
    "A_max": 0.000839319067615,
    "kappa_Q": 0.086812004849191,
    "p": 0.201840836034193,
    "s1": 0.0256680575214142,
    "t2": 0.00436174503419317,
    "transverse": 0.0414080846777763,
    "pairing_lower": 0.0454039202,
}


def certified_pairing_checks() -> list[CertifiedCheck]:
    eta = eta_star_enclosure(0.197479091)
    ivs = _pairing_ivs(eta)
    checks = []
    for name, target in _PAIRING_TARGETS.items():
        iv = ivs[name]
        checks.append(CertifiedCheck(
            f"pairing_{name}", iv.lo, iv.hi,
            f"within {target!r} +- 1e-9", iv.within(target, 1e-9)))
    return checks


def kappa_eff_enclosure(epsilon: float = EPSILON_STAR) -> Interval:
    eps = Interval.exact(epsilon)
    log_term = (Interval.exact(2.0) / eps).log()
    leak = Interval.exact(3.87) * eps * (log_term * log_term.sqrt())
    inner = eps * Interval.exact(L0) * (Interval.exact(LAMBDA_STAR) + log_term * 0.5)
    stability = Interval.exact(8.0).sqrt() * inner.sqrt().sqrt() * Interval.exact(K0)
    return Interval.exact(KAPPA0) - leak - stability


def c_z0_upper_enclosure(z0: float, pieces: int = 512) -> Interval:
    """Bounds for sup_{|z|<=z0} of the strip polynomial via subdivided
    interval evaluation (upper endpoint is a rigorous upper bound)."""
    best_lo = 0.0
    best_hi = 0.0
    for i in range(pieces):
        z = Interval(z0 * i / pieces, z0 * (i + 1) / pieces)
        z2 = z.square()
        h3 = z * z2 - z * 3.0
        h2 = z2 - Interval.exact(1.0)
        q = h3.square() / 6.0 + h2.square() / 2.0 + z2 + 1.0
        best_lo = max(best_lo, q.lo)
        best_hi = max(best_hi, q.hi)
    return Interval(best_lo, best_hi)


def drop_per_beta_enclosure(beta: float) -> Interval:
    """Enclosure of (neighborhood drop) / beta at the reference parameters."""
    beta_iv = Interval.exact(beta)
    keff = kappa_eff_enclosure()
    z0 = 1.0 / 3.0 + beta ** RHO_STAR / ALPHA_MIN
    c_up = c_z0_upper_enclosure(z0)
    kstrip = Interval(0.0, (Interval.exact(8.0) * c_up.sqrt()
                            / (Interval.exact(ALPHA_MIN) * SQRT_2PI)).hi)
    strip_term = kstrip * beta_iv.pow_frac(7, 10)
    damp = (-(Interval.exact(2.0) / 3.0)).exp()
    exponent = -(beta_iv.pow_frac(-1, 5) * damp * 0.5) - Interval.exact(0.5)
    tail_term = exponent.exp() * 2.0
    return keff - strip_term - tail_term


def certified_chain_checks() -> list[CertifiedCheck]:
    checks = []
    keff = kappa_eff_enclosure()
    checks.append(CertifiedCheck("kappa_eff", keff.lo, keff.hi,
                                 "> 0.0058", keff.strictly_above(0.0058)))
    for beta in (1e-10, 8e-25):
        d = drop_per_beta_enclosure(beta)
        checks.append(CertifiedCheck(
            f"neighborhood_drop_per_beta_{beta:g}", d.lo, d.hi,
            ">= 0.0057", d.strictly_above(0.0057)))

    kstrip_hi = (Interval.exact(8.0) * c_z0_upper_enclosure(0.36).sqrt()
                 / (Interval.exact(ALPHA_MIN) * SQRT_2PI))
    checks.append(CertifiedCheck("K_strip(0.36, 0.6)", kstrip_hi.lo, kstrip_hi.hi,
                                 "<= 7", kstrip_hi.strictly_below(7.0)))

    # Final chain at the reference beta.
    beta = Interval.exact(8e-25)
    lam = Interval.exact(LAMBDA_STAR)
    d_in, ae = Interval.exact(1e-10), Interval.exact(1e-12)
    one = Interval.exact(1.0)
    branch_a = d_in * (lam / 8.0 - ae)
    inner = d_in * (one - ae * 4.0) / 8.0 - ae * 6.4
    branch_b = inner.square() * (Interval.exact(0.98) / 8.0)
    gap = Interval(min(branch_a.lo, branch_b.lo), min(branch_a.hi, branch_b.hi))
    b1 = -(Interval.exact(0.0057) * beta)
    b2 = beta - Interval.exact(0.9e-24)
    b3 = beta - gap
    worst = Interval(max(b1.lo, b2.lo, b3.lo), max(b1.hi, b2.hi, b3.hi))
    drop = -worst
    checks.append(CertifiedCheck("final_drop", drop.lo, drop.hi,
                                 "within 4.56e-27 +- 1e-30",
                                 drop.within(4.56e-27, 1e-30)))

    bound = bound_enclosure(0.197479091)
    increment = bound.square() * drop / (one - lam)
    checks.append(CertifiedCheck("kg_increment", increment.lo, increment.hi,
                                 ">= 1.596e-26",
                                 increment.strictly_above(1.596e-26)))
    checks.append(CertifiedCheck("kg_increment_exceeds_1e-26",
                                 increment.lo, increment.hi, "> 1e-26",
                                 increment.strictly_above(1e-26)))
    return checks


def all_certified_checks() -> list[CertifiedCheck]:
    return (certified_baseline_checks() + certified_pairing_checks()
            + certified_chain_checks())

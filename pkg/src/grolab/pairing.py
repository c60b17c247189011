"""Third-Hermite-chaos pairing constants and the inequalities built on them.

All the scalar constants are closed forms in eta (Gaussian density / CDF
values); the profile-dependent checks integrate against piecewise-constant
profiles from the profiles module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FeasibilityError, InternalCheckError
from .gauss import (
    DEFAULT_SPEC,
    QuadratureSpec,
    SQRT_2PI,
    gauss_integrate,
    gaussian_cdf,
    gaussian_pdf,
    hermite_eval,
)
from .profiles import Profile, moment

# Inner moments must vanish this tightly for the |A| bound hypothesis.
_INNER_MOMENT_TOL = 1e-9


def inner_constants(eta: float) -> tuple[float, float, float]:
    """(p, s1, t2): mass, first and second absolute moments of |Z| < eta.

    p = 2 Phi(eta) - 1,  s1 = 2 (pdf(0) - pdf(eta)),  t2 = p - 2 eta pdf(eta).
    """
    eta = float(eta)
    if eta <= 0.0:
        raise DomainError(f"inner_constants requires eta > 0, got {eta}")
    p = 2.0 * gaussian_cdf(eta) - 1.0
    s1 = 2.0 * (gaussian_pdf(0.0) - gaussian_pdf(eta))
    t2 = p - 2.0 * eta * gaussian_pdf(eta)
    return p, s1, t2


def kappa_Q(eta: float) -> tuple[float, float, float]:
    """(B, A_max, kappa_Q): tail H3 integral, inner H3 bound, zonal constant.

    B = -2 (1 - eta^2) pdf(eta),  A_max = eta^2 (pdf(0) - pdf(eta)),
    kappa_Q = (B^2 - A_max^2) / 6.
    """
    eta = float(eta)
    if eta <= 0.0:
        raise DomainError(f"kappa_Q requires eta > 0, got {eta}")
    b = -2.0 * (1.0 - eta * eta) * gaussian_pdf(eta)
    a_max = eta * eta * (gaussian_pdf(0.0) - gaussian_pdf(eta))
    return b, a_max, (b * b - a_max * a_max) / 6.0


def transverse_bound(p: float, s1: float, t2: float) -> float:
    """Upper bound p^2 + s1^2 + t2^2 / 2 on the transverse chaos mass."""
    if p < 0.0 or s1 < 0.0 or t2 < 0.0:
        raise DomainError("transverse_bound requires nonnegative inputs")
    return p * p + s1 * s1 + 0.5 * t2 * t2


def pairing_lower_bound(eta: float) -> float:
    """kappa_Q minus the transverse mass bound: the certified pairing value."""
    _, _, kq = kappa_Q(eta)
    p, s1, t2 = inner_constants(eta)
    return kq - transverse_bound(p, s1, t2)


def K0_upper(eta: float) -> float:
    """Upper bound on the L2 norm of the third-chaos component of a maximizer.

    Uses (|B| + A_max)^2 / 6 for the zonal part so the bound is valid for
    either sign of the inner term, plus the transverse mass bound.
    """
    b, a_max, _ = kappa_Q(eta)
    p, s1, t2 = inner_constants(eta)
    zonal = (abs(b) + a_max) ** 2 / 6.0
    return math.sqrt(zonal + transverse_bound(p, s1, t2))


@dataclass(frozen=True)
class PairingConstants:
    """All pairing scalars evaluated at one eta."""

    eta_star: float
    B: float
    A_max: float
    kappa_Q: float
    p: float
    s1: float
    t2: float
    transverse: float
    pairing_lower: float
    K0_upper: float

    def __post_init__(self):
        if self.pairing_lower <= 0.0:
            raise InternalCheckError(
                f"pairing lower bound {self.pairing_lower} is not positive"
            )

    @classmethod
    def at_eta(cls, eta: float) -> "PairingConstants":
        b, a_max, kq = kappa_Q(eta)
        p, s1, t2 = inner_constants(eta)
        tr = transverse_bound(p, s1, t2)
        return cls(eta_star=eta, B=b, A_max=a_max, kappa_Q=kq, p=p, s1=s1,
                   t2=t2, transverse=tr, pairing_lower=kq - tr,
                   K0_upper=K0_upper(eta))


def A_bound_check(profile: Profile, eta: float,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """(|int_{-eta}^{eta} H3 theta pdf|, eta^2 (pdf(0) - pdf(eta))).

    Requires the profile's inner moment on (-eta, eta) to vanish; that is
    the hypothesis making the second entry an upper bound for the first.
    """
    eta = float(eta)
    if eta <= 0.0:
        raise DomainError(f"A_bound_check requires eta > 0, got {eta}")
    kinks = list(profile.breakpoints) + [-profile.z_cut, profile.z_cut]
    inner_m = gauss_integrate(
        lambda z: z * profile.evaluate(z), spec, kinks=kinks,
        interval=(-eta, eta),
    )
    if abs(inner_m) > _INNER_MOMENT_TOL:
        raise FeasibilityError(
            f"inner moment {inner_m:.3g} must vanish on (-{eta}, {eta})",
            residual=inner_m,
        )
    a_val = gauss_integrate(
        lambda z: hermite_eval(3, z) * profile.evaluate(z), spec, kinks=kinks,
        interval=(-eta, eta),
    )
    bound = eta * eta * (gaussian_pdf(0.0) - gaussian_pdf(eta))
    return abs(a_val), bound


def _sign_tails_beyond(profile: Profile, eta: float) -> bool:
    """True when theta(z) = sign(z) for every |z| > eta."""
    if profile.tail_values != (-1.0, 1.0):
        return False
    if profile.z_cut <= eta:
        return True
    edges = profile.edges
    for lo, hi, v in zip(edges[:-1], edges[1:], profile.values):
        if lo < -eta and v != -1.0:
            return False
        if hi > eta and v != 1.0:
            return False
    return True


def mombd_lower(profile: Profile, eta: float,
                spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """First moment of a profile with sign tails beyond eta < 1/2.

    Returns the moment and verifies it clears the worst-case closed form
    2 (2 exp(-eta^2/2) - 1) / sqrt(2 pi), attained when theta = -sign(z)
    on the whole inner region.
    """
    eta = float(eta)
    if not (0.0 < eta < 0.5):
        raise DomainError(f"mombd_lower requires 0 < eta < 1/2, got {eta}")
    if not _sign_tails_beyond(profile, eta):
        raise FeasibilityError(
            f"profile must equal sign(z) for |z| > {eta}"
        )
    m = moment(profile, spec)
    worst = 2.0 * (2.0 * math.exp(-0.5 * eta * eta) - 1.0) / SQRT_2PI
    if m < worst - 1e-12:
        raise InternalCheckError(
            f"moment {m} fell below the guaranteed floor {worst}"
        )
    return m


def signflip_check(a, b, beta):
    """Both sides of |a - beta b| <= |a| - beta sign(a) b + 2 beta |b| 1{flip}.

    Accepts scalars or arrays; beta must be nonnegative (scalar or array).
    """
    beta_arr = np.asarray(beta, dtype=float)
    if np.any(beta_arr < 0.0):
        raise DomainError("signflip_check requires beta >= 0")
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    lhs = np.abs(a_arr - beta_arr * b_arr)
    flip = np.abs(a_arr) <= beta_arr * np.abs(b_arr)
    rhs = np.abs(a_arr) - beta_arr * np.sign(a_arr) * b_arr \
        + 2.0 * beta_arr * np.abs(b_arr) * flip
    if np.ndim(a) == 0 and np.ndim(b) == 0 and np.ndim(beta) == 0:
        return float(lhs), float(rhs)
    return lhs, rhs

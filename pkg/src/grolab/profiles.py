"""Piecewise-constant profiles and the moment-constrained 1-D maximization.

A Profile is a conditional-expectation function theta: R -> [-1, 1] given by
piecewise-constant values on an inner window plus symbolic tails (sign(z) or
per-side constants).  The operations here evaluate the primal objective V,
its dual certificate, the exact optimality-gap tail integral, the discretized
bathtub maximizer, and the quantitative gap lower bounds used downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .baseline import LAMBDA_STAR, ReedsParams, solve_eta_star, solve_h
from .errors import DomainError, FeasibilityError, InternalCheckError
from .gauss import (
    DEFAULT_SPEC,
    QuadratureSpec,
    gauss_integrate,
    gaussian_cdf,
    gaussian_pdf,
    interval_mass,
    interval_z_moment,
)

SIGN_TAILS = "sign"
CONST_TAILS = "const"

# Absolute tolerance on the moment constraint; well below every gap bound.
FEASIBILITY_TOL = 1e-10
# Dual value minus primal value must reproduce the tail integral this tightly.
CERTIFICATE_TOL = 1e-8


@dataclass(frozen=True)
class Profile:
    """theta: piecewise constant on (-z_cut, z_cut), symbolic tails outside.

    breakpoints are the interior cell boundaries (strictly increasing, inside
    the window); values has one entry per cell, len(breakpoints) + 1 total.
    """

    z_cut: float
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    tail_rule: str = SIGN_TAILS
    tail_values: tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self):
        if not (math.isfinite(self.z_cut) and self.z_cut > 0.0):
            raise DomainError(f"z_cut must be positive, got {self.z_cut}")
        bp = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        if len(vals) != len(bp) + 1:
            raise DomainError(
                f"need len(values) == len(breakpoints) + 1, got {len(vals)} vs {len(bp)}"
            )
        if any(not (-self.z_cut < b < self.z_cut) for b in bp):
            raise DomainError("breakpoints must lie strictly inside (-z_cut, z_cut)")
        if any(b2 - b1 <= 0.0 for b1, b2 in zip(bp, bp[1:])):
            raise DomainError("breakpoints must be strictly increasing")
        if any(abs(v) > 1.0 + 1e-15 for v in vals):
            raise DomainError("profile values must lie in [-1, 1]")
        if self.tail_rule not in (SIGN_TAILS, CONST_TAILS):
            raise DomainError(f"unknown tail rule {self.tail_rule!r}")
        if self.tail_rule == SIGN_TAILS:
            object.__setattr__(self, "tail_values", (-1.0, 1.0))
        else:
            tv = (float(self.tail_values[0]), float(self.tail_values[1]))
            if any(abs(v) > 1.0 for v in tv):
                raise DomainError("tail constants must lie in [-1, 1]")
            object.__setattr__(self, "tail_values", tv)

    @property
    def edges(self) -> np.ndarray:
        """All cell boundaries including +-z_cut."""
        return np.concatenate(([-self.z_cut], self.breakpoints, [self.z_cut]))

    def evaluate(self, z) -> np.ndarray:
        """Vectorized theta(z) for any real z (tails included)."""
        z = np.asarray(z, dtype=float)
        edges = self.edges
        idx = np.clip(np.searchsorted(edges, z, side="right") - 1, 0, len(self.values) - 1)
        out = np.asarray(self.values, dtype=float)[idx]
        out = np.where(z < -self.z_cut, self.tail_values[0], out)
        out = np.where(z >= self.z_cut, self.tail_values[1], out)
        return out

    def cell_bounds(self):
        edges = self.edges
        return zip(edges[:-1], edges[1:], self.values)

    @classmethod
    def constant(cls, value: float, z_cut: float, tail_rule: str = SIGN_TAILS,
                 tail_values=(-1.0, 1.0)) -> "Profile":
        return cls(z_cut=z_cut, breakpoints=(), values=(value,),
                   tail_rule=tail_rule, tail_values=tail_values)

    @classmethod
    def from_grid(cls, values, z_cut: float, tail_rule: str = SIGN_TAILS,
                  tail_values=(-1.0, 1.0)) -> "Profile":
        """Uniform-cell profile over (-z_cut, z_cut)."""
        values = tuple(float(v) for v in values)
        n = len(values)
        bp = tuple(-z_cut + 2.0 * z_cut * i / n for i in range(1, n))
        return cls(z_cut=z_cut, breakpoints=bp, values=values,
                   tail_rule=tail_rule, tail_values=tail_values)

    @classmethod
    def bathtub(cls, h: float, z_cut: float | None = None) -> "Profile":
        """Odd single-threshold profile: -sign(z) on |z| < h, sign(z) beyond."""
        if h <= 0.0:
            raise DomainError(f"bathtub threshold must be positive, got {h}")
        if z_cut is None or abs(z_cut - h) < 1e-15:
            return cls(z_cut=h, breakpoints=(0.0,), values=(1.0, -1.0))
        if z_cut < h:
            raise DomainError("z_cut must be >= h for a bathtub profile")
        return cls(z_cut=z_cut, breakpoints=(-h, 0.0, h),
                   values=(-1.0, 1.0, -1.0, 1.0))


def _dedupe_edges(points, lo: float, hi: float) -> list[float]:
    """Sorted interior points of (lo, hi), duplicates within 1e-15 merged."""
    out: list[float] = []
    for p in sorted(float(p) for p in points):
        if lo < p < hi and (not out or p - out[-1] > 1e-15):
            out.append(p)
    return out


def _rebuild(profile: Profile, lo: float, hi: float, extra_edges=(),
             override=None) -> Profile:
    """Profile restricted to (lo, hi) with sign tails, optional cell override.

    override(mid) may return a replacement value for the cell centered at mid,
    or None to keep theta(mid).
    """
    cuts = set(extra_edges)
    cuts.update(b for b in profile.breakpoints)
    if profile.z_cut < hi:
        cuts.update((-profile.z_cut, profile.z_cut))
    inner = _dedupe_edges(cuts, lo, hi)
    edges = [lo, *inner, hi]
    mids = np.array([(a + b) / 2.0 for a, b in zip(edges[:-1], edges[1:])])
    vals = profile.evaluate(mids)
    if override is not None:
        vals = np.array([override(m) if override(m) is not None else v
                         for m, v in zip(mids, vals)])
    vals = np.clip(vals, -1.0, 1.0)
    if abs(-hi - lo) > 1e-15:
        raise DomainError("rebuilt window must be symmetric")
    return Profile(z_cut=hi, breakpoints=tuple(inner), values=tuple(vals))


# -- pointwise kernels -------------------------------------------------------

def psi_eval(z, params: ReedsParams):
    """psi(z) = (|alpha z - lambda| - |alpha z + lambda|) / 2 (odd in z)."""
    az = params.alpha * np.asarray(z, dtype=float)
    out = 0.5 * (np.abs(az - params.lam) - np.abs(az + params.lam))
    return float(out) if np.ndim(z) == 0 else out


def A_B_eval(z, params: ReedsParams):
    """The even/odd split (A, B) of |alpha z -+ lambda|; psi coincides with B."""
    az = params.alpha * np.asarray(z, dtype=float)
    plus = np.abs(az + params.lam)
    minus = np.abs(az - params.lam)
    a = 0.5 * (minus + plus)
    b = 0.5 * (minus - plus)
    if np.ndim(z) == 0:
        return float(a), float(b)
    return a, b


# -- closed-form tail pieces -------------------------------------------------

def _tail_A(c: float, params: ReedsParams) -> float:
    """int_c^inf A(z) pdf(z) dz for c >= 0."""
    eta = params.eta
    if c >= eta:
        return params.alpha * gaussian_pdf(c)
    return params.lam * interval_mass(c, eta) + params.alpha * gaussian_pdf(eta)


def _tail_B(c: float, params: ReedsParams) -> float:
    """int_c^inf B(z) pdf(z) dz for c >= 0."""
    eta = params.eta
    if c >= eta:
        return -params.lam * gaussian_cdf(-c)
    return -params.alpha * interval_z_moment(c, eta) - params.lam * gaussian_cdf(-eta)


def _int_A_full(params: ReedsParams) -> float:
    """int_R A(z) pdf(z) dz in closed form."""
    eta = params.eta
    return params.lam * (2.0 * gaussian_cdf(eta) - 1.0) + 2.0 * params.alpha * gaussian_pdf(eta)


# -- moments and objective ---------------------------------------------------

def moment(profile: Profile, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """First Gaussian moment int z theta(z) pdf(z) dz; tails in closed form."""
    inner = gauss_integrate(
        lambda z: z * profile.evaluate(z),
        spec,
        kinks=profile.breakpoints,
        interval=(-profile.z_cut, profile.z_cut),
    )
    left, right = profile.tail_values
    tail = (right - left) * gaussian_pdf(profile.z_cut)
    return inner + tail


def V_value(profile: Profile, params: ReedsParams,
            spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Primal objective V(theta) = int (A + theta B) pdf.

    Evaluated whether or not theta meets the moment constraint; feasibility
    is the caller's concern (see gap_certificate).
    """
    zc = profile.z_cut
    eta = params.eta

    def integrand(z):
        a, b = A_B_eval(z, params)
        return a + profile.evaluate(z) * b

    inner = gauss_integrate(
        integrand, spec,
        kinks=list(profile.breakpoints) + [-eta, eta],
        interval=(-zc, zc),
    )
    left, right = profile.tail_values
    tails = 2.0 * _tail_A(zc, params) + (right - left) * _tail_B(zc, params)
    return inner + tails


def dual_value(mu: float, params: ReedsParams,
               spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Dual functional D(mu) = int A pdf + mu alpha + int |B - mu z| pdf."""
    mu = float(mu)
    eta = params.eta
    kinks = [-eta, 0.0, eta]
    if -params.alpha < mu < 0.0:
        w = params.lam / abs(mu)
        kinks.extend((-w, w))

    def integrand(z):
        _, b = A_B_eval(z, params)
        return np.abs(b - mu * z)

    term = gauss_integrate(integrand, spec, kinks=kinks)
    return _int_A_full(params) + mu * params.alpha + term


def _dual_anchor(params: ReedsParams) -> float:
    """The interpolation coefficient placing the attaining profile in [-1, 1].

    A flat inner profile a*sign(z) with sign tails at eta has moment
    2 pdf(eta) + 2 a (pdf(0) - pdf(eta)); the dual value at mu = -alpha is
    attained exactly when that moment can reach alpha with |a| <= 1.
    """
    eta = params.eta
    denom = 2.0 * (gaussian_pdf(0.0) - gaussian_pdf(eta))
    return (params.alpha - 2.0 * gaussian_pdf(eta)) / denom


def _dual_attained_value(params: ReedsParams, spec: QuadratureSpec) -> float:
    if abs(_dual_anchor(params)) > 1.0:
        raise DomainError(
            "dual certificate is not attained at mu = -alpha for these params"
        )
    return dual_value(-params.alpha, params, spec)


@lru_cache(maxsize=256)
def _cached_dual(params: ReedsParams, spec: QuadratureSpec) -> float:
    return _dual_attained_value(params, spec)


def F_value_dual(params: ReedsParams, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Optimal value of the moment-constrained maximization, via the dual.

    Only offered inside the window |alpha - alpha*(lambda)| < 1/100 where the
    attaining primal point is proven to exist; outside, the dual value is
    merely an upper bound and this operation refuses.
    """
    alpha_star = params.lam / solve_eta_star(params.lam)
    if abs(params.alpha - alpha_star) >= 0.01:
        raise DomainError(
            f"F_value_dual requires |alpha - {alpha_star:.6f}| < 0.01, "
            f"got alpha={params.alpha}"
        )
    return _cached_dual(params, spec)


@dataclass(frozen=True)
class GapCertificate:
    """Primal value, dual value, their gap, and the independent tail integral."""

    primal_V: float
    dual_D: float
    gap: float
    tail_integral: float
    mu: float

    def __post_init__(self):
        if self.gap < -CERTIFICATE_TOL:
            raise InternalCheckError(
                f"negative optimality gap {self.gap}; duality violated"
            )
        if abs(self.gap - self.tail_integral) > CERTIFICATE_TOL:
            raise InternalCheckError(
                f"gap {self.gap} disagrees with tail integral {self.tail_integral}"
            )


@dataclass(frozen=True)
class GapInputs:
    """Nonnegative ingredients of the quantitative gap lower bounds."""

    d: float
    delta: float
    alpha_err: float
    m: float = 0.0
    J: float = 0.0

    def __post_init__(self):
        for name in ("d", "delta", "alpha_err", "m", "J"):
            if getattr(self, name) < 0.0:
                raise DomainError(f"GapInputs.{name} must be nonnegative")


def gap_tail_integral(profile: Profile, params: ReedsParams,
                      spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """int_{|z|>eta} (alpha |z| - lambda)(1 - theta(z) sign(z)) pdf(z) dz."""
    eta = params.eta
    zc = profile.z_cut
    total = 0.0
    if zc > eta:
        def integrand(z):
            defect = 1.0 - profile.evaluate(z) * np.sign(z)
            return np.where(np.abs(z) > eta,
                            (params.alpha * np.abs(z) - params.lam) * defect, 0.0)

        total += gauss_integrate(
            integrand, spec,
            kinks=list(profile.breakpoints) + [-eta, eta],
            interval=(-zc, zc),
        )
    start = max(eta, zc)
    left, right = profile.tail_values
    # int_c^inf (alpha z - lambda) pdf = alpha pdf(c) - lambda Phi(-c), c >= eta
    base = params.alpha * gaussian_pdf(start) - params.lam * gaussian_cdf(-start)
    total += ((1.0 - right) + (1.0 + left)) * base
    return total


def gap_certificate(profile: Profile, params: ReedsParams,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> GapCertificate:
    """Optimality certificate for a feasible profile.

    Feasibility means the first moment matches params.alpha within tolerance;
    the returned gap F - V is cross-checked against the closed tail integral.
    """
    m = moment(profile, spec)
    residual = m - params.alpha
    if abs(residual) > FEASIBILITY_TOL:
        raise FeasibilityError(
            f"profile moment {m:.15g} != alpha {params.alpha:.15g}",
            residual=residual,
        )
    F = _dual_attained_value(params, spec)
    V = V_value(profile, params, spec)
    tail = gap_tail_integral(profile, params, spec)
    return GapCertificate(primal_V=V, dual_D=F, gap=F - V, tail_integral=tail,
                          mu=-params.alpha)


# -- discretized maximization (bathtub fill) ---------------------------------

def _cell_B_integral(lo: float, hi: float, params: ReedsParams) -> float:
    """Exact int_lo^hi B(z) pdf(z) dz, splitting at the kinks +-eta."""
    eta = params.eta
    total = 0.0
    # piece inside (-eta, eta): B = -alpha z
    plo, phi = max(lo, -eta), min(hi, eta)
    if phi > plo:
        total -= params.alpha * interval_z_moment(plo, phi)
    # piece in (eta, inf): B = -lambda
    plo, phi = max(lo, eta), hi
    if phi > plo:
        total -= params.lam * interval_mass(plo, phi)
    # piece in (-inf, -eta): B = +lambda
    plo, phi = lo, min(hi, -eta)
    if phi > plo:
        total += params.lam * interval_mass(plo, phi)
    return total


def lp_maximize(params: ReedsParams, grid_size: int,
                spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[Profile, float]:
    """Exact solution of the grid-discretized moment-constrained LP.

    Single equality constraint plus box bounds: the maximizer is a bathtub
    fill ordered by objective-per-moment ratio, with one fractional tie
    group found by a parametric threshold.  Sign tails are kept symbolic
    beyond the grid window.  Cell integrals are closed forms, so the
    quadrature spec is not consulted; it stays in the signature as part of
    the operation contract.
    """
    if grid_size < 64:
        raise DomainError(f"grid_size must be >= 64, got {grid_size}")
    alpha = params.alpha
    if abs(alpha) >= math.sqrt(2.0 / math.pi):
        raise DomainError(f"alpha={alpha} infeasible: |alpha| >= sqrt(2/pi)")
    eta = params.eta
    z_cut = max(eta, solve_h(alpha)) + 1.0
    edges = np.linspace(-z_cut, z_cut, grid_size + 1)
    a = np.array([interval_z_moment(lo, hi) for lo, hi in zip(edges[:-1], edges[1:])])
    c = np.array([_cell_B_integral(lo, hi, params) for lo, hi in zip(edges[:-1], edges[1:])])

    target = alpha - 2.0 * gaussian_pdf(z_cut)
    abs_a = np.abs(a)
    if abs(target) > abs_a.sum() + 1e-12:
        raise DomainError("moment target unreachable on this grid")

    # theta_i(mu) = sign(c_i - mu a_i); as mu grows past c_i/a_i the cell's
    # moment contribution drops from |a_i| to -|a_i|.
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(abs_a > 0.0, c / a, -np.inf)
    order = np.argsort(ratio, kind="stable")
    sorted_ratio = ratio[order]
    drop = 2.0 * abs_a[order]
    m_before = abs_a.sum() - np.concatenate(([0.0], np.cumsum(drop)[:-1]))
    m_after = m_before - drop

    theta = np.where(a >= 0.0, 1.0, -1.0)  # state before any flip
    # Walk the flips in ascending ratio order, grouping ties (mirror cells
    # share their ratio exactly); the group that would cross the target gets
    # a common fractional value instead.
    i = 0
    n = len(order)
    running = abs_a.sum()
    while i < n:
        j = i
        while j + 1 < n and abs(sorted_ratio[j + 1] - sorted_ratio[i]) <= 1e-12 * (
                1.0 + abs(sorted_ratio[i])):
            j += 1
        group = order[i:j + 1]
        group_drop = float(np.sum(drop[i:j + 1]))
        if running - group_drop >= target - 1e-15:
            theta[group] = -np.sign(a[group])  # zero-moment cells get 0
            running -= group_drop
            i = j + 1
            continue
        rest = running - float(np.sum(abs_a[group]))
        denom = float(np.sum(abs_a[group]))
        t = (target - rest) / denom if denom > 0.0 else 0.0
        theta[group] = min(1.0, max(-1.0, t)) * np.sign(a[group])
        break

    value = _int_A_full(params) + float(np.dot(c, theta)) \
        - 2.0 * params.lam * gaussian_cdf(-z_cut)
    prof = Profile(z_cut=z_cut, breakpoints=tuple(edges[1:-1]),
                   values=tuple(np.clip(theta, -1.0, 1.0)))
    return prof, value


# -- structural helpers ------------------------------------------------------

def odd_part(profile: Profile) -> Profile:
    """(theta(z) - theta(-z)) / 2, on the symmetrized cell structure."""
    bp = set(profile.breakpoints)
    bp.update(-b for b in profile.breakpoints)
    inner = _dedupe_edges(bp, -profile.z_cut, profile.z_cut)
    edges = [-profile.z_cut, *inner, profile.z_cut]
    mids = np.array([(a + b) / 2.0 for a, b in zip(edges[:-1], edges[1:])])
    vals = 0.5 * (profile.evaluate(mids) - profile.evaluate(-mids))
    if profile.tail_rule == SIGN_TAILS:
        return Profile(z_cut=profile.z_cut, breakpoints=tuple(inner),
                       values=tuple(vals))
    left, right = profile.tail_values
    odd_right = 0.5 * (right - left)
    return Profile(z_cut=profile.z_cut, breakpoints=tuple(inner),
                   values=tuple(vals), tail_rule=CONST_TAILS,
                   tail_values=(-odd_right, odd_right))


def elem_identity_check(x: float, y: float) -> tuple[float, float]:
    """Both sides of (|1-x| + |-1-y|)/2 = |1 - (x-y)/2| on [-1,1]^2."""
    x, y = float(x), float(y)
    if abs(x) > 1.0 or abs(y) > 1.0:
        raise DomainError("elem_identity_check requires x, y in [-1, 1]")
    s = 0.5 * (x - y)
    lhs = 0.5 * (abs(1.0 - x) + abs(-1.0 - y))
    rhs = abs(1.0 - s)
    return lhs, rhs


def inner_moment_defect(profile: Profile, eta_star: float,
                        spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """|int_{-eta*}^{eta*} z theta(z) pdf(z) dz|."""
    return abs(_inner_moment_signed(profile, eta_star, spec))

def _inner_moment_signed(profile: Profile, eta_star: float,
                         spec: QuadratureSpec) -> float:
    kinks = list(profile.breakpoints) + [-profile.z_cut, profile.z_cut]
    return gauss_integrate(
        lambda z: z * profile.evaluate(z),
        spec,
        kinks=kinks,
        interval=(-eta_star, eta_star),
    )


def _inner_moment_closed(profile: Profile, eta_star: float) -> float:
    """Exact int_{-eta*}^{eta*} z theta pdf via per-cell antiderivatives."""
    cuts = _dedupe_edges(
        list(profile.breakpoints) + [-profile.z_cut, profile.z_cut],
        -eta_star, eta_star)
    edges = [-eta_star, *cuts, eta_star]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + b)
        theta = float(profile.evaluate(np.array([mid]))[0])
        total += theta * interval_z_moment(a, b)
    return total


# -- constructive projection onto the maximizing set -------------------------

def _repair_G(profile: Profile, s: float, eta_star: float, t: float) -> float:
    """Capacity integral int_{eta*/2 < |z| < t} z (sign(z) + s theta(z)) pdf dz.

    theta is piecewise constant, so after folding the negative side onto
    u = -z each piece reduces to pdf differences:
        G(t) = int_{half}^{t} u [(1 + s theta(u)) + (1 - s theta(-u))] pdf(u) du.
    """
    half = eta_star / 2.0
    if t <= half:
        return 0.0
    cuts = {half, t}
    for b in profile.breakpoints:
        if half < abs(b) < t:
            cuts.add(abs(b))
    if half < profile.z_cut < t:
        cuts.add(profile.z_cut)
    cuts = sorted(cuts)
    total = 0.0
    for a_, b_ in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (a_ + b_)
        th_pos = float(profile.evaluate(np.array([mid]))[0])
        th_neg = float(profile.evaluate(np.array([-mid]))[0])
        piece = interval_z_moment(a_, b_)
        total += ((1.0 + s * th_pos) + (1.0 - s * th_neg)) * piece
    return total


def repair_to_theta(profile: Profile, spec: QuadratureSpec = DEFAULT_SPEC,
                    lam: float = LAMBDA_STAR) -> tuple[Profile, float]:
    """Project a profile onto the maximizer set: sign tails at eta*, zero
    inner moment.  Returns the repaired profile and the L1 cost of the move.

    Follows the constructive two-step proof: fix the tails first, then flip
    theta toward -sign on a band eta*/2 < |z| < t0 whose capacity absorbs the
    inner-moment defect; t0 is found by bisection on the capacity integral.
    eta* is tied to the supplied lambda so callers stay on one Reeds point.
    """
    eta_star = solve_eta_star(lam)
    zc = profile.z_cut

    # Step 1: tail cost and the tail-fixed profile on (-eta*, eta*).
    def tail_defect(z):
        return (1.0 - profile.evaluate(z) * np.sign(z)) * (np.abs(z) > eta_star)

    hi = max(zc, eta_star)
    tail_cost = gauss_integrate(
        tail_defect, spec,
        kinks=list(profile.breakpoints) + [-eta_star, eta_star, -zc, zc],
        interval=(-hi, hi),
    )
    left, right = profile.tail_values
    start = max(eta_star, zc)
    tail_cost += ((1.0 - right) + (1.0 + left)) * gaussian_cdf(-start)

    fixed = _rebuild(profile, -eta_star, eta_star)

    inner = _inner_moment_closed(fixed, eta_star)
    delta = abs(inner)
    if delta <= 1e-15:
        return fixed, tail_cost

    s = 1.0 if inner >= 0.0 else -1.0
    capacity = _repair_G(fixed, s, eta_star, eta_star)
    if capacity < delta - 1e-13:
        raise InternalCheckError(
            f"repair capacity {capacity} below defect {delta}"
        )
    lo_t, hi_t = eta_star / 2.0, eta_star
    for _ in range(80):
        mid = 0.5 * (lo_t + hi_t)
        if _repair_G(fixed, s, eta_star, mid) < delta:
            lo_t = mid
        else:
            hi_t = mid
    t0 = 0.5 * (lo_t + hi_t)

    half = eta_star / 2.0

    def override(mid):
        if half < abs(mid) < t0:
            return -s * math.copysign(1.0, mid)
        return None

    repaired = _rebuild(fixed, -eta_star, eta_star,
                        extra_edges=(-t0, -half, half, t0), override=override)

    inner_cost = gauss_integrate(
        lambda z: np.abs(repaired.evaluate(z) - fixed.evaluate(z)),
        spec,
        kinks=list(repaired.breakpoints) + list(fixed.breakpoints),
        interval=(-eta_star, eta_star),
    )
    residual = _inner_moment_closed(repaired, eta_star)
    if abs(residual) > 1e-13:
        raise InternalCheckError(
            f"repair left inner moment {residual}; expected 0"
        )
    return repaired, tail_cost + inner_cost


# -- quantitative gap lower bounds -------------------------------------------

def gap_lower_small_delta(d: float, alpha_err: float) -> float:
    """Gap bound (d - 2.6 |alpha - alpha*|)^2 / 32.7 in the small-defect regime."""
    d, alpha_err = float(d), float(alpha_err)
    if d < 0.0 or alpha_err < 0.0:
        raise DomainError("d and alpha_err must be nonnegative")
    if alpha_err >= 0.01:
        raise DomainError(f"alpha_err must be < 1/100, got {alpha_err}")
    lead = d - 2.6 * alpha_err
    if lead <= 0.0:
        raise DomainError(
            f"bound degenerates: d - 2.6 alpha_err = {lead} must be positive"
        )
    return lead * lead / 32.7


def gap_lower_large_delta(d: float, alpha_err: float, lam: float) -> float:
    """Two-branch gap bound in the large inner-defect regime."""
    d, alpha_err, lam = float(d), float(alpha_err), float(lam)
    if d < 0.0 or alpha_err < 0.0:
        raise DomainError("d and alpha_err must be nonnegative")
    if alpha_err >= 0.01:
        raise DomainError(f"alpha_err must be < 1/100, got {alpha_err}")
    inner = d * (1.0 - 4.0 * alpha_err) / 8.0 - 6.4 * alpha_err
    if inner <= 0.0:
        raise DomainError(f"inner expression {inner} must be positive")
    branch1 = d * (lam / 8.0 - alpha_err)
    branch2 = (0.98 / 8.0) * inner * inner
    return min(branch1, branch2)


# -- serialization ------------------------------------------------------------

def profile_to_text(profile: Profile) -> str:
    """Flat text format: z_cut, breakpoints..., values..., tail token."""
    tokens = [repr(profile.z_cut)]
    tokens.extend(repr(b) for b in profile.breakpoints)
    tokens.extend(repr(v) for v in profile.values)
    if profile.tail_rule == SIGN_TAILS:
        tokens.append("sign")
    else:
        left, right = profile.tail_values
        tokens.append(f"const:{left!r}:{right!r}")
    return ",".join(tokens)


def profile_from_text(text: str) -> Profile:
    tokens = [t.strip() for t in text.strip().split(",") if t.strip()]
    if len(tokens) < 3 or len(tokens) % 2 == 0:
        raise DomainError(f"malformed profile text ({len(tokens)} tokens)")
    tail_token = tokens[-1]
    ncells = (len(tokens) - 3) // 2 + 1
    z_cut = float(tokens[0])
    bp = tuple(float(t) for t in tokens[1:ncells])
    vals = tuple(float(t) for t in tokens[ncells:-1])
    if tail_token == "sign":
        return Profile(z_cut=z_cut, breakpoints=bp, values=vals)
    if tail_token.startswith("const:"):
        parts = tail_token.split(":")
        if len(parts) != 3:
            raise DomainError(f"malformed tail token {tail_token!r}")
        return Profile(z_cut=z_cut, breakpoints=bp, values=vals,
                       tail_rule=CONST_TAILS,
                       tail_values=(float(parts[1]), float(parts[2])))
    raise DomainError(f"unknown tail token {tail_token!r}")

"""Least-favourable contamination pairs and their certificates.

Each construction produces two contamination densities ``q0`` and ``q1`` such that the null
mixture ``(1 - eps_max) p_{theta, sigma0} + eps_max q0`` and the alternative mixture
``(1 - eps) p_{theta - r, sigma1} + eps q1`` coincide (exact kinds) or are within a small total
variation distance (truncated kinds).  Building a pair also certifies it: both densities are
integrated, scanned for negative values, and the two mixtures are compared.

All constructions are carried out in canonical coordinates ``u`` on the unit scale, where the
alternative's clean component sits at ``0`` and the null's at ``r``; data coordinates are
``x = theta - r + sigma u``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
from scipy import integrate

from .distributions import LocationFamily, open_uniforms, parse_family
from .empirical import SortedSample
from .errors import ConfigError, DensityValidationError, DomainError, InvalidSeparation
from .general_arci import _bisect_boundary, _golden_max, bracket_cap
from .normal import norm_cdf, norm_isf, norm_pdf, norm_sf

ROOT_TOL = 1e-12
MAX_ITER = 200
NEGATIVE_NOISE = 1e-10
UNKNOWN_VARIANCE_SHRINK = 0.99


class AdversaryKind(Enum):
    GAUSSIAN_TRUNCATED = "gaussian-truncated"
    GAUSSIAN_SHIFTED_EXACT = "gaussian-shifted-exact"
    LAPLACE_EXACT = "laplace-exact"
    GENERAL_TRUNCATED = "general-truncated"
    GENERAL_EXACT = "general-exact"
    UNKNOWN_VARIANCE = "unknown-variance"
    SMALL_EPS_MAX_TRUNCATED = "small-eps-max-truncated"
    SMALL_EPS_MAX_EXACT = "small-eps-max-exact"

    @classmethod
    def parse(cls, value) -> "AdversaryKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "").replace("-", "")
        for kind in cls:
            if key in (kind.value.replace("-", ""), kind.name.lower().replace("_", "")):
                return kind
        raise ConfigError(f"unknown adversary kind {value!r}")

    @property
    def exact(self) -> bool:
        return self in EXACT_KINDS


EXACT_KINDS = frozenset({
    AdversaryKind.LAPLACE_EXACT, AdversaryKind.GAUSSIAN_SHIFTED_EXACT, AdversaryKind.GENERAL_EXACT,
    AdversaryKind.SMALL_EPS_MAX_EXACT, AdversaryKind.UNKNOWN_VARIANCE,
})
TRUNCATED_KINDS = frozenset({AdversaryKind.GAUSSIAN_TRUNCATED, AdversaryKind.GENERAL_TRUNCATED})
_GAUSSIAN_ONLY = frozenset({
    AdversaryKind.GAUSSIAN_TRUNCATED, AdversaryKind.GAUSSIAN_SHIFTED_EXACT, AdversaryKind.UNKNOWN_VARIANCE,
    AdversaryKind.SMALL_EPS_MAX_TRUNCATED, AdversaryKind.SMALL_EPS_MAX_EXACT,
})


# ---------------------------------------------------------------------------------------------
# Envelopes and sampling
# ---------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Component:
    """``weight * f((x - loc) / scale) / scale`` restricted to ``[lo, hi]``."""

    family: LocationFamily
    loc: float
    scale: float
    weight: float
    lo: float = -math.inf
    hi: float = math.inf

    def density(self, x: np.ndarray) -> np.ndarray:
        inside = (x >= self.lo) & (x <= self.hi)
        return np.where(inside, self.weight * self.family.pdf((x - self.loc) / self.scale) / self.scale, 0.0)

    def _tail_levels(self) -> tuple[float, float]:
        a = (self.lo - self.loc) / self.scale
        b = (self.hi - self.loc) / self.scale
        return float(self.family.sf(a)) if math.isfinite(a) else 1.0, float(self.family.sf(b)) if math.isfinite(b) else 0.0

    @property
    def mass(self) -> float:
        upper, lower = self._tail_levels()
        return self.weight * max(upper - lower, 0.0)

    def draw(self, rng: np.random.Generator, m: int) -> np.ndarray:
        upper, lower = self._tail_levels()
        q = lower + (upper - lower) * open_uniforms(rng, m)
        x = self.loc + self.scale * np.asarray(self.family.isf(q), dtype=float)
        return np.clip(x, self.lo, self.hi)


@dataclass(frozen=True)
class Envelope:
    """A finite mixture of (possibly truncated) location-scale components dominating a density."""

    components: tuple

    def density(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return sum((c.density(x) for c in self.components), np.zeros_like(x))

    @property
    def mass(self) -> float:
        return float(sum(c.mass for c in self.components))

    def draw(self, rng: np.random.Generator, m: int) -> np.ndarray:
        masses = np.array([c.mass for c in self.components])
        which = rng.choice(len(self.components), size=m, p=masses / masses.sum())
        out = np.empty(m)
        for i, comp in enumerate(self.components):
            sel = which == i
            if np.any(sel):
                out[sel] = comp.draw(rng, int(np.count_nonzero(sel)))
        return out

    def mapped(self, shift: float, scale: float) -> "Envelope":
        """The envelope of ``x -> g((x - shift) / scale) / scale`` given the envelope of ``g``."""
        return Envelope(tuple(
            Component(c.family, shift + scale * c.loc, scale * c.scale, c.weight,
                      shift + scale * c.lo, shift + scale * c.hi)
            for c in self.components
        ))


def sample_density(density: Callable, envelope: Envelope, n: int, seed: int,
                   return_rate: bool = False):
    """Rejection sampling of ``n`` draws from ``density`` using a dominating ``envelope``.

    Raises DensityValidationError if a proposal exposes ``density > envelope`` or a negative
    value below floating noise.  Returns a SortedSample (and the acceptance rate on request).
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    rng = np.random.default_rng(seed)
    env_mass = envelope.mass
    if not env_mass > 0:
        raise DensityValidationError("envelope has no mass")
    accepted: list[np.ndarray] = []
    have = proposed = 0
    rate = 1.0
    while have < n:
        m = int(min(max(64, 1.2 * (n - have) / max(rate, 1e-6)), 4_000_000))
        x = envelope.draw(rng, m)
        d = np.asarray(density(x), dtype=float)
        e = envelope.density(x)
        if np.any(d < -NEGATIVE_NOISE):
            raise DensityValidationError(f"density is negative ({d.min():.3g}) at a proposed point")
        if np.any(d > e * (1.0 + 1e-9) + 1e-300):
            i = int(np.argmax(d - e))
            raise DensityValidationError(f"density exceeds its envelope at x={x[i]:.6g}")
        keep = rng.random(m) * e < np.maximum(d, 0.0)
        accepted.append(x[keep])
        have += int(np.count_nonzero(keep))
        proposed += m
        # Smoothed estimate: a batch with no acceptances must not send the next batch size to
        # the cap.
        rate = (have + 1) / (proposed + 2)
    out = SortedSample(np.concatenate(accepted)[:n])
    return (out, have / proposed) if return_rate else out


# ---------------------------------------------------------------------------------------------
# Numerical certification
# ---------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class SupportHint:
    """Points where a density may be non-smooth, and a tail width for scanning around them."""

    breakpoints: tuple
    width: float = 1.0

    def window(self) -> tuple[float, float]:
        b = [p for p in self.breakpoints if math.isfinite(p)] or [0.0]
        return min(b) - 12.0 * self.width, max(b) + 12.0 * self.width

    def segments(self, extra=()) -> list[tuple[float, float]]:
        pts = sorted({float(p) for p in (*self.breakpoints, *extra) if math.isfinite(p)})
        edges = [-math.inf, *pts, math.inf]
        return list(zip(edges[:-1], edges[1:]))


@dataclass(frozen=True)
class DensityReport:
    mass: float
    min_value: float
    argmin: float


def _integrate(fun, segments) -> float:
    total = 0.0
    with warnings.catch_warnings():
        # Tails made of two nearly cancelling exponentials look rough to QUADPACK at 1e-13
        # absolute tolerance; the certified masses are checked at 1e-6 downstream.
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in segments:
            val, _ = integrate.quad(lambda x: float(fun(np.array([x]))[0]), a, b,
                                    epsabs=1e-13, epsrel=1e-12, limit=400)
            total += val
    return total


def validate_density(density: Callable, support_hint: SupportHint, grid_points: int = 100_000) -> DensityReport:
    """Mass by adaptive quadrature between the hint's breakpoints (tails to infinity included),
    minimum by a dense scan plus golden-section refinement around the 10 lowest scan points.
    Reports; never raises."""
    mass = _integrate(density, support_hint.segments())
    lo, hi = support_hint.window()
    grid = np.linspace(lo, hi, grid_points)
    bps = np.array([b for b in support_hint.breakpoints if math.isfinite(b)], dtype=float)
    nudge = 1e-9 * np.maximum(1.0, np.abs(bps))
    grid = np.sort(np.concatenate([grid, bps, bps - nudge, bps + nudge]))
    vals = np.asarray(density(grid), dtype=float)
    order = np.argsort(vals)[:10]
    best_x, best = float(grid[order[0]]), float(vals[order[0]])
    step = (hi - lo) / (grid_points - 1)
    for i in order:
        xg, vg = _golden_max(lambda x: -float(density(np.array([x]))[0]),
                             float(grid[i]) - step, float(grid[i]) + step, 1e-12, MAX_ITER)
        if -vg < best:
            best_x, best = xg, -vg
    return DensityReport(mass=float(mass), min_value=best, argmin=best_x)


def _sign_changes(fun, lo: float, hi: float, points: int = 20_001, floor: float = 0.0) -> list[float]:
    """Roots of ``fun`` on a grid, ignoring sign flips where ``|fun| <= floor`` on both sides."""
    grid = np.linspace(lo, hi, points)
    vals = np.asarray(fun(grid), dtype=float)
    s = np.sign(vals)
    big = np.maximum(np.abs(vals[:-1]), np.abs(vals[1:])) > floor
    out = []
    for i in np.nonzero((s[:-1] * s[1:] < 0) & big)[0]:
        a, b = float(grid[i]), float(grid[i + 1])
        pos_a = s[i] > 0
        out.append(_bisect_boundary(lambda x: bool(fun(np.array([x]))[0] > 0) == pos_a, a, b, 1e-14, MAX_ITER))
    return out


def numeric_tv(p_density: Callable, q_density: Callable, support_hint: SupportHint) -> float:
    """``(1/2) * integral |p - q|`` by adaptive quadrature, split at the hint's breakpoints and at
    sign changes of ``p - q``."""
    diff = lambda x: np.asarray(p_density(x), dtype=float) - np.asarray(q_density(x), dtype=float)  # noqa: E731
    lo, hi = support_hint.window()
    grid = np.linspace(lo, hi, 2001)
    scale = float(np.max(np.abs(p_density(grid))) + np.max(np.abs(q_density(grid))))
    # sign flips of rounding noise (exactly matching densities) are not worth splitting at
    crossings = _sign_changes(diff, lo, hi, floor=1e-12 * scale)
    return 0.5 * _integrate(lambda x: np.abs(diff(x)), support_hint.segments(crossings))


def shift_tv(family, r: float, sigma: float = 1.0) -> float:
    """Numeric TV between ``P_0`` and ``P_r`` of a location family."""
    fam = family if isinstance(family, LocationFamily) else parse_family(family)
    hint = SupportHint((0.0, r, -sigma * fam.half_width, sigma * fam.half_width, r - sigma * fam.half_width,
                        r + sigma * fam.half_width), sigma * _tail_width(fam))
    return numeric_tv(lambda x: fam.pdf(x / sigma) / sigma, lambda x: fam.pdf((x - r) / sigma) / sigma, hint)


def _tail_width(fam: LocationFamily) -> float:
    """Scale used to size scan windows: the half-width of the central 68% of ``f``."""
    return float(fam.isf(0.158655253931457))


# ---------------------------------------------------------------------------------------------
# Canonical constructions
# ---------------------------------------------------------------------------------------------


@dataclass
class _Canonical:
    g0: Callable
    g1: Callable
    env0: Envelope
    env1: Envelope
    s0: float
    s1: float
    breakpoints: tuple
    internals: dict
    tv_bound: float | None


def _comp(fam, loc, weight, lo=-math.inf, hi=math.inf, scale=1.0) -> Component:
    return Component(fam, float(loc), float(scale), float(weight), float(lo), float(hi))


def _edges(fam: LocationFamily, r: float) -> tuple:
    if not fam.bounded:
        return ()
    h = fam.half_width
    return (-h, h, r - h, r + h)


def _truncation_point(fam: LocationFamily, alpha: float, n: int) -> float:
    if not alpha / n < 0.5:
        raise DomainError("truncated constructions need alpha / n < 1/2")
    return float(fam.isf(alpha / n))


def _truncated(fam: LocationFamily, r: float, eps_max: float, alpha: float, n: int) -> _Canonical:
    t = _truncation_point(fam, alpha, n)
    F_t = float(fam.cdf(t))
    c_bar = 1.0 / F_t

    def g0(u):
        u = np.asarray(u, dtype=float)
        cut = np.where(u - r <= t, fam.pdf(u - r), 0.0)
        return (fam.pdf(u) - (1.0 - eps_max) * c_bar * cut) / eps_max

    env0 = Envelope((_comp(fam, 0.0, 1.0 / eps_max),))
    env1 = Envelope((_comp(fam, 0.0, 1.0),))
    tv = (1.0 - eps_max) * float(fam.sf(t))
    return _Canonical(g0, fam.pdf, env0, env1, 1.0, 1.0, (0.0, r, r + t, *_edges(fam, r)),
                      {"t": t, "c_bar": c_bar}, tv)


def _laplace_exact(fam: LocationFamily, r: float, eps_max: float) -> _Canonical:
    def g0(u):
        return (fam.pdf(u) - (1.0 - eps_max) * fam.pdf(np.asarray(u, dtype=float) - r)) / eps_max

    env0 = Envelope((_comp(fam, 0.0, 1.0 / eps_max),))
    return _Canonical(g0, fam.pdf, env0, Envelope((_comp(fam, 0.0, 1.0),)), 1.0, 1.0, (0.0, r), {}, 0.0)


def _gaussian_shifted(fam: LocationFamily, r: float, eps: float, eps_max: float) -> _Canonical:
    mu = math.sqrt(math.log(1.0 / eps))

    def g1(u):
        return norm_pdf(np.asarray(u, dtype=float) - mu)

    def g0(u):
        u = np.asarray(u, dtype=float)
        return ((1.0 - eps) * norm_pdf(u) + eps * norm_pdf(u - mu) - (1.0 - eps_max) * norm_pdf(u - r)) / eps_max

    env0 = Envelope((_comp(fam, 0.0, (1.0 - eps) / eps_max), _comp(fam, mu, eps / eps_max)))
    env1 = Envelope((_comp(fam, mu, 1.0),))
    return _Canonical(g0, g1, env0, env1, 1.0, 1.0, (0.0, r, mu), {"mu": mu}, 0.0)


def _exceed_set(fam: LocationFamily, r: float, eps: float, eps_max: float) -> list[tuple[float, float]]:
    """Intervals of ``S = {u : (1 - eps_max) f(u - r) > (1 - eps) f(u)}``, via the log density
    ratio so far tails do not underflow.  A set reaching the scan edge is extended to infinity."""
    level = math.log((1.0 - eps) / (1.0 - eps_max))

    def inside(u):
        u = np.asarray(u, dtype=float)
        with np.errstate(invalid="ignore"):
            diff = fam.logpdf(u - r) - fam.logpdf(u)
        return np.where(np.isnan(diff), False, diff > level)

    if fam.bounded:
        h = fam.half_width
        lo, hi = -h - 1e-9, h + r + 1e-9
        v = np.linspace(lo, hi, 40_001)
    else:
        w = float(fam.isf(1e-250)) + r
        v = np.sinh(np.linspace(-math.asinh(w), math.asinh(w), 40_001))
    flags = inside(v)
    out: list[tuple[float, float]] = []
    start = None
    for i in range(len(v)):
        if flags[i] and start is None:
            if i == 0:
                start = -math.inf
            else:
                start = _bisect_boundary(lambda x: bool(inside(x)), float(v[i - 1]), float(v[i]), ROOT_TOL, MAX_ITER)
        elif not flags[i] and start is not None:
            end = _bisect_boundary(lambda x: not bool(inside(x)), float(v[i - 1]), float(v[i]), ROOT_TOL, MAX_ITER)
            out.append((start, end))
            start = None
    if start is not None:
        out.append((start, math.inf))
    return out


def _mass_shifted(fam: LocationFamily, r: float, pieces) -> float:
    return float(sum(float(fam.sf(a - r)) - float(fam.sf(b - r)) for a, b in pieces))


def _general_exact(fam: LocationFamily, r: float, eps: float, eps_max: float) -> _Canonical:
    pieces = _exceed_set(fam, r, eps, eps_max)
    mass = _mass_shifted(fam, r, pieces)
    if not pieces or mass <= 0.0:
        # S is null: q1 = f keeps both mixtures equal and q0 nonnegative.
        def g0(u):
            return (fam.pdf(u) - (1.0 - eps_max) * fam.pdf(np.asarray(u, dtype=float) - r)) / eps_max

        return _Canonical(g0, fam.pdf, Envelope((_comp(fam, 0.0, 1.0 / eps_max),)),
                          Envelope((_comp(fam, 0.0, 1.0),)), 1.0, 1.0, (0.0, r, *_edges(fam, r)),
                          {"S": [], "c_star": math.inf}, 0.0)

    def in_s(u):
        return np.any([(u > a) & (u <= b) for a, b in pieces], axis=0)

    def g1(u):
        u = np.asarray(u, dtype=float)
        return np.where(in_s(u), fam.pdf(u - r) / mass, 0.0)

    def g0(u):
        u = np.asarray(u, dtype=float)
        return ((1.0 - eps) * fam.pdf(u) + eps * g1(u) - (1.0 - eps_max) * fam.pdf(u - r)) / eps_max

    env1 = Envelope(tuple(_comp(fam, r, 1.0 / mass, a, b) for a, b in pieces))
    env0 = Envelope((_comp(fam, 0.0, (1.0 - eps) / eps_max),
                     *(_comp(fam, r, eps / (eps_max * mass), a, b) for a, b in pieces)))
    ends = tuple(p for ab in pieces for p in ab)
    c_star = eps / ((1.0 - eps_max) * mass)
    return _Canonical(g0, g1, env0, env1, 1.0, 1.0, (0.0, r, *ends, *_edges(fam, r)),
                      {"S": [list(p) for p in pieces], "c_star": c_star}, 0.0)


def _unknown_variance(fam: LocationFamily, r: float, eps_max: float) -> _Canonical:
    s0 = UNKNOWN_VARIANCE_SHRINK

    def g0(u):
        u = np.asarray(u, dtype=float)
        return (norm_pdf(u) - (1.0 - eps_max) * norm_pdf((u - r) / s0) / s0) / eps_max

    env0 = Envelope((_comp(fam, 0.0, 1.0 / eps_max),))
    return _Canonical(g0, fam.pdf, env0, Envelope((_comp(fam, 0.0, 1.0),)), s0, 1.0, (0.0, r), {}, 0.0)


def _small_truncated(fam: LocationFamily, r: float, eps_max: float) -> _Canonical:
    t = 2.0 * eps_max / (3.0 * r)
    delta = eps_max / (float(norm_cdf(t)) - (1.0 - eps_max) * float(norm_cdf(t - r)))

    def g0(u):
        u = np.asarray(u, dtype=float)
        return np.where(u <= t, delta * (norm_pdf(u) - (1.0 - eps_max) * norm_pdf(u - r)) / eps_max, 0.0)

    env0 = Envelope((_comp(fam, 0.0, delta / eps_max),))
    return _Canonical(g0, fam.pdf, env0, Envelope((_comp(fam, 0.0, 1.0),)), 1.0, 1.0, (0.0, r, t),
                      {"t": t, "delta": delta}, None)


def _small_exact_threshold(r: float, eps: float, eps_max: float) -> float:
    return math.log((1.0 - eps) / (1.0 - eps_max)) / r + r / 2.0


def _small_exact_mass(r: float, eps: float, eps_max: float) -> float:
    """``integral over S of ((1 - eps_max) phi(u - r) - (1 - eps) phi(u)) / eps``."""
    s = _small_exact_threshold(r, eps, eps_max)
    return ((1.0 - eps_max) * float(norm_sf(s - r)) - (1.0 - eps) * float(norm_sf(s))) / eps


def _small_exact(fam: LocationFamily, r: float, eps: float, eps_max: float) -> _Canonical:
    s = _small_exact_threshold(r, eps, eps_max)
    zeta = 1.0 / _small_exact_mass(r, eps, eps_max)

    def g1(u):
        u = np.asarray(u, dtype=float)
        d = (1.0 - eps_max) * norm_pdf(u - r) - (1.0 - eps) * norm_pdf(u)
        return np.where(u > s, zeta * np.maximum(d, 0.0) / eps, 0.0)

    def g0(u):
        u = np.asarray(u, dtype=float)
        return ((1.0 - eps) * norm_pdf(u) + eps * g1(u) - (1.0 - eps_max) * norm_pdf(u - r)) / eps_max

    env1 = Envelope((_comp(fam, r, zeta * (1.0 - eps_max) / eps, lo=s),))
    env0 = Envelope((_comp(fam, 0.0, (1.0 - eps) / eps_max), _comp(fam, r, zeta * (1.0 - eps_max) / eps_max, lo=s)))
    return _Canonical(g0, g1, env0, env1, 1.0, 1.0, (0.0, r, s), {"s": s, "zeta": zeta}, 0.0)


# ---------------------------------------------------------------------------------------------
# Admissible separations
# ---------------------------------------------------------------------------------------------


def _check_domain(kind: AdversaryKind, fam: LocationFamily, eps: float, eps_max: float, alpha: float,
                  n: int, sigma: float) -> None:
    if not 0.0 < eps_max < 1.0:
        raise DomainError("eps_max must lie in (0, 1)")
    if not 0.0 <= eps <= eps_max:
        raise DomainError("eps must lie in [0, eps_max]")
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    if n < 1:
        raise DomainError("n must be at least 1")
    if not (sigma > 0 and math.isfinite(sigma)):
        raise DomainError("sigma must be positive and finite")
    if kind in _GAUSSIAN_ONLY and fam.spec != "gaussian":
        raise ConfigError(f"{kind.value} is defined for the gaussian family only")
    if kind is AdversaryKind.LAPLACE_EXACT and fam.spec != "laplace":
        raise ConfigError("laplace-exact is defined for the laplace family only")
    if kind is AdversaryKind.GAUSSIAN_SHIFTED_EXACT and not 0.0 < eps <= eps_max / 2.0:
        raise DomainError("gaussian-shifted-exact needs eps in (0, eps_max / 2]")
    if kind in (AdversaryKind.GENERAL_EXACT, AdversaryKind.SMALL_EPS_MAX_EXACT) and not 0.0 < eps < eps_max:
        raise DomainError(f"{kind.value} needs eps in (0, eps_max)")
    if kind is AdversaryKind.UNKNOWN_VARIANCE and not eps_max > 1.0 - UNKNOWN_VARIANCE_SHRINK:
        raise DomainError("unknown-variance needs eps_max > 0.01")
    if kind in (AdversaryKind.SMALL_EPS_MAX_TRUNCATED, AdversaryKind.SMALL_EPS_MAX_EXACT) and not eps_max <= 1.0 / 3.0:
        raise DomainError(f"{kind.value} needs eps_max <= 1/3")


def _log_ratio_min(fam: LocationFamily, r: float, right: float) -> float:
    """``min over u <= right of log f(u) - log f(u - r)`` where ``f(u - r) > 0``."""
    def val(u):
        u = np.asarray(u, dtype=float)
        with np.errstate(invalid="ignore"):
            d = fam.logpdf(u) - fam.logpdf(u - r)
        return np.where(np.isfinite(fam.logpdf(u - r)), d, np.inf)

    if fam.bounded:
        grid = np.linspace(r - fam.half_width, right, 4001)
    else:
        # sinh spacing: fine near the centre, reaching far into heavy tails
        w = float(fam.isf(1e-250)) + abs(right)
        v = np.sinh(np.linspace(-math.asinh(w), math.asinh(w), 8001))
        grid = v[v < right]
    grid = np.unique(np.concatenate([grid, [right]]))
    vals = val(grid)
    i = int(np.argmin(vals))
    best = float(vals[i])
    if i < len(grid) - 1 and math.isfinite(best):
        a, b = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, len(grid) - 1)])
        _, vg = _golden_max(lambda x: -float(val(np.array([x]))[0]), a, b, ROOT_TOL, MAX_ITER)
        best = min(best, -vg)
    return best


def _shifted_exact_min(r: float, eps: float, eps_max: float) -> float:
    """``min over u of log((1 - eps) phi(u) + eps phi(u - mu)) - log((1 - eps_max) phi(u - r))``."""
    mu = math.sqrt(math.log(1.0 / eps))

    def val(u):
        u = np.asarray(u, dtype=float)
        top = np.logaddexp(math.log1p(-eps) - 0.5 * u * u, math.log(eps) - 0.5 * (u - mu) ** 2)
        return top - math.log1p(-eps_max) + 0.5 * (u - r) ** 2

    grid = np.linspace(-40.0, mu + 40.0, 40_001)
    vals = val(grid)
    i = int(np.argmin(vals))
    step = grid[1] - grid[0]
    _, vg = _golden_max(lambda x: -float(val(np.array([x]))[0]), float(grid[i] - step), float(grid[i] + step),
                        ROOT_TOL, MAX_ITER)
    return min(float(vals[i]), -vg)


def _valid_predicate(kind: AdversaryKind, fam: LocationFamily, eps: float, eps_max: float, alpha: float, n: int):
    if kind is AdversaryKind.GENERAL_TRUNCATED:
        t = _truncation_point(fam, alpha, n)
        level = math.log((1.0 - eps_max) / float(fam.cdf(t)))
        return lambda r: _log_ratio_min(fam, r, r + t) >= level
    if kind is AdversaryKind.GAUSSIAN_SHIFTED_EXACT:
        return lambda r: _shifted_exact_min(r, eps, eps_max) >= 0.0
    if kind is AdversaryKind.GENERAL_EXACT:
        return lambda r: (1.0 - eps_max) * _mass_shifted(fam, r, _exceed_set(fam, r, eps, eps_max)) <= eps
    if kind is AdversaryKind.SMALL_EPS_MAX_EXACT:
        return lambda r: _small_exact_mass(r, eps, eps_max) <= 1.0
    raise AssertionError(kind)


def _largest_valid(valid, cap: float) -> float:
    hi = 1e-3
    while valid(hi):
        if hi >= cap:
            return math.inf
        hi = min(2.0 * hi, cap)
    lo = 1e-300
    if not valid(lo):
        return 0.0
    # _bisect_boundary returns the invalid side; step back onto the valid side.
    edge = _bisect_boundary(valid, lo, hi, ROOT_TOL * max(1.0, hi), MAX_ITER)
    while not valid(edge) and edge > 0:
        edge = max(edge - ROOT_TOL * max(1.0, hi), 0.0)
    return edge


def max_valid_r(kind, family="gaussian", eps: float = 0.0, eps_max: float = 0.05, alpha: float = 0.05,
                n: int = 1000, sigma: float = 1.0) -> float:
    """Largest separation for which the construction yields valid densities."""
    kind = AdversaryKind.parse(kind)
    fam = family if isinstance(family, LocationFamily) else parse_family(family)
    _check_domain(kind, fam, eps, eps_max, alpha, n, sigma)
    if kind is AdversaryKind.LAPLACE_EXACT:
        return sigma * math.log(1.0 / (1.0 - eps_max))
    if kind is AdversaryKind.GAUSSIAN_TRUNCATED:
        t = float(norm_isf(alpha / n))
        rhs = math.log(float(norm_cdf(t)) / (1.0 - eps_max))
        return sigma * (math.sqrt(t * t + 2.0 * rhs) - t)
    if kind is AdversaryKind.UNKNOWN_VARIANCE:
        c = UNKNOWN_VARIANCE_SHRINK
        return sigma * math.sqrt(2.0 * (1.0 - c * c) * math.log(c / (1.0 - eps_max)))
    if kind is AdversaryKind.SMALL_EPS_MAX_TRUNCATED:
        return sigma * math.sqrt(2.0 * eps_max / 3.0)
    cap = bracket_cap(fam)
    return sigma * _largest_valid(_valid_predicate(kind, fam, eps, eps_max, alpha, n), cap)


# ---------------------------------------------------------------------------------------------
# Pairs
# ---------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Validity:
    min_density: float
    mass0: float
    mass1: float
    tv: float
    tv_bound: float | None
    exact: bool
    match_error: float


@dataclass(frozen=True)
class AdversarialPair:
    kind: AdversaryKind
    family: LocationFamily
    theta: float
    r: float
    eps: float
    eps_max: float
    alpha: float
    n: int
    sigma0: float
    sigma1: float
    max_valid_r: float
    internals: dict = field(compare=False)
    validity: Validity | None = field(compare=False)
    hint: SupportHint = field(compare=False, repr=False)
    _canon: _Canonical = field(compare=False, repr=False)
    _shift: float = field(compare=False, repr=False)
    _scale: float = field(compare=False, repr=False)

    def _to_canonical(self, x):
        return (np.asarray(x, dtype=float) - self._shift) / self._scale

    def q0_density(self, x):
        return np.asarray(self._canon.g0(self._to_canonical(x)), dtype=float) / self._scale

    def q1_density(self, x):
        return np.asarray(self._canon.g1(self._to_canonical(x)), dtype=float) / self._scale

    def null_density(self, x):
        x = np.asarray(x, dtype=float)
        clean = self.family.pdf((x - self.theta) / self.sigma0) / self.sigma0
        return (1.0 - self.eps_max) * clean + self.eps_max * self.q0_density(x)

    def alt_density(self, x):
        x = np.asarray(x, dtype=float)
        clean = self.family.pdf((x - self.theta + self.r) / self.sigma1) / self.sigma1
        return (1.0 - self.eps) * clean + self.eps * self.q1_density(x)

    @property
    def q0_envelope(self) -> Envelope:
        return self._canon.env0.mapped(self._shift, self._scale)

    @property
    def q1_envelope(self) -> Envelope:
        return self._canon.env1.mapped(self._shift, self._scale)

    def sample_q(self, side: str, m: int, seed: int) -> SortedSample:
        """Draws from ``q0`` (side ``"null"``) or ``q1`` (side ``"alt"``)."""
        if side == "null":
            return sample_density(self.q0_density, self.q0_envelope, m, seed)
        if side == "alt":
            return sample_density(self.q1_density, self.q1_envelope, m, seed)
        raise ConfigError("side must be 'null' or 'alt'")

    def certificate(self) -> dict:
        v = self.validity
        return {
            "kind": self.kind.value,
            "params": {
                "family": self.family.spec, "theta": self.theta, "r": self.r, "eps": self.eps,
                "eps_max": self.eps_max, "alpha": self.alpha, "n": self.n, "sigma0": self.sigma0,
                "sigma1": self.sigma1, **{k: _jsonable(val) for k, val in self.internals.items()},
            },
            "mass0": v.mass0 if v else None,
            "mass1": v.mass1 if v else None,
            "min_density": v.min_density if v else None,
            "tv": v.tv if v else None,
            "tv_bound": v.tv_bound if v else None,
            "exact": self.kind.exact,
            "match_error": v.match_error if v else None,
            "max_valid_r": self.max_valid_r,
        }


def _jsonable(val):
    if isinstance(val, float) and not math.isfinite(val):
        return str(val)
    return val


def _canonical(kind: AdversaryKind, fam: LocationFamily, r: float, eps: float, eps_max: float, alpha: float,
               n: int) -> _Canonical:
    if kind in TRUNCATED_KINDS:
        return _truncated(fam, r, eps_max, alpha, n)
    if kind is AdversaryKind.LAPLACE_EXACT:
        return _laplace_exact(fam, r, eps_max)
    if kind is AdversaryKind.GAUSSIAN_SHIFTED_EXACT:
        return _gaussian_shifted(fam, r, eps, eps_max)
    if kind is AdversaryKind.GENERAL_EXACT:
        return _general_exact(fam, r, eps, eps_max)
    if kind is AdversaryKind.UNKNOWN_VARIANCE:
        return _unknown_variance(fam, r, eps_max)
    if kind is AdversaryKind.SMALL_EPS_MAX_TRUNCATED:
        return _small_truncated(fam, r, eps_max)
    return _small_exact(fam, r, eps, eps_max)


def build_adversary(kind, family="gaussian", r="auto", eps: float = 0.0, eps_max: float = 0.05,
                    alpha: float = 0.05, n: int = 1000, sigma: float = 1.0, theta: float = 0.0,
                    strict: bool = True, certify: bool = True) -> AdversarialPair:
    """Construct and certify a least-favourable pair.

    ``r="auto"`` uses ``0.999 * max_valid_r``.  With ``strict`` a separation above the admissible
    one raises InvalidSeparation and a failed certificate raises DensityValidationError; without
    it the pair is returned with its (possibly failing) certificate for inspection.
    """
    kind = AdversaryKind.parse(kind)
    fam = family if isinstance(family, LocationFamily) else parse_family(family)
    if kind is AdversaryKind.LAPLACE_EXACT and family == "gaussian":
        fam = parse_family("laplace")
    _check_domain(kind, fam, eps, eps_max, alpha, n, sigma)
    r_max = max_valid_r(kind, fam, eps, eps_max, alpha, n, sigma)
    if isinstance(r, str):
        if r != "auto":
            raise ConfigError("r must be a number or 'auto'")
        if not math.isfinite(r_max):
            raise InvalidSeparation("no finite admissible separation; pass r explicitly", r_max)
        r = 0.999 * r_max
    r = float(r)
    if not (r > 0 and math.isfinite(r)):
        raise DomainError("r must be positive and finite")
    if strict and r > r_max:
        raise InvalidSeparation(f"r = {r:.6g} exceeds the admissible separation {r_max:.6g}", r_max)
    canon = _canonical(kind, fam, r / sigma, eps, eps_max, alpha, n)
    shift = theta - r
    bps = tuple(shift + sigma * b for b in canon.breakpoints)
    hint = SupportHint(bps, sigma * _tail_width(fam))
    pair = AdversarialPair(kind, fam, float(theta), r, float(eps), float(eps_max), float(alpha), int(n),
                           sigma * canon.s0, sigma * canon.s1, r_max, dict(canon.internals), None, hint,
                           canon, shift, sigma)
    if not certify:
        return pair
    validity = certify_pair(pair)
    object.__setattr__(pair, "validity", validity)
    if strict and not _passes(validity):
        raise DensityValidationError(f"certificate failed for {kind.value}: {validity}")
    return pair


def _passes(v: Validity) -> bool:
    ok = v.min_density >= -NEGATIVE_NOISE and abs(v.mass0 - 1.0) <= 1e-6 and abs(v.mass1 - 1.0) <= 1e-6
    if v.exact:
        ok = ok and v.match_error <= 1e-10
    return ok


def mixture_match_error(pair: AdversarialPair, points: int = 10_000) -> float:
    """Sup over a grid of ``|null mixture - alternative mixture|``."""
    lo, hi = pair.hint.window()
    grid = np.linspace(lo, hi, points)
    return float(np.max(np.abs(pair.null_density(grid) - pair.alt_density(grid))))


def certify_pair(pair: AdversarialPair) -> Validity:
    rep0 = validate_density(pair.q0_density, pair.hint)
    rep1 = validate_density(pair.q1_density, pair.hint)
    tv = numeric_tv(pair.null_density, pair.alt_density, pair.hint)
    return Validity(
        min_density=min(rep0.min_value, rep1.min_value), mass0=rep0.mass, mass1=rep1.mass, tv=tv,
        tv_bound=pair._canon.tv_bound, exact=pair.kind.exact, match_error=mixture_match_error(pair),
    )


__all__ = [
    "AdversaryKind", "AdversarialPair", "Validity", "Component", "Envelope", "SupportHint", "DensityReport",
    "build_adversary", "max_valid_r", "validate_density", "numeric_tv", "sample_density", "shift_tv",
    "mixture_match_error", "certify_pair", "EXACT_KINDS", "TRUNCATED_KINDS",
]

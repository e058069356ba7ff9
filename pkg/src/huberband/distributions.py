"""Symmetric unimodal location families.

Every family is centred at zero and exposes its density, CDF, upper tail, quantile and a
seeded inverse-CDF sampler.  Closed forms are used for the Gaussian, Laplace, uniform and
Bates families.  The Student t, generalized Gaussian and mollifier families integrate their
(unnormalised) density numerically: at construction an adaptive Gauss-Legendre panel table
is built on ``[0, upper]`` and cached, so later CDF calls cost one fixed-order rule on a single
partial panel and stay vectorised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import roots_jacobi

from ._numerics import as_float_array, restore
from .empirical import SortedSample
from .errors import ConfigError, DomainError
from .normal import norm_cdf, norm_isf, norm_pdf, norm_ppf, norm_sf


class FamilyKind(Enum):
    GAUSSIAN = "gaussian"
    LAPLACE = "laplace"
    STUDENT_T = "t"
    GENGAUSS = "gengauss"
    MOLLIFIER = "mollifier"
    BATES = "bates"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class NumericConfig:
    """Tolerances for quadrature and root finding."""

    quad_tol: float = 1e-12
    root_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if not (self.quad_tol > 0 and self.root_tol > 0):
            raise ConfigError("numeric tolerances must be strictly positive")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ConfigError("max_iter must be a positive integer")


DEFAULT_NUMERICS = NumericConfig()

# ---------------------------------------------------------------------------------------------
# Adaptive panel table for families without a closed-form CDF
# ---------------------------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _gl_integrate(g, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """20-point Gauss-Legendre rule of ``g`` over each ``[a_i, b_i]`` (vectorised)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[..., None] + half[..., None] * _GL_NODES
    return half * (g(x) @ _GL_WEIGHTS)


class _TailTable:
    """Cached upper-tail masses ``S(e_k) = int_{e_k}^inf g`` on adaptive panels ``e_0 = 0 < ...``.

    ``g`` is an unnormalised, vectorised density on ``[0, inf)``; ``beyond(x)`` returns
    ``int_x^inf g`` for ``x >= upper`` (zero for bounded or negligible tails).
    """

    def __init__(self, g, upper: float, beyond, rel_tol: float, abs_tol: float, max_depth: int = 60):
        self.g = g
        self.upper = float(upper)
        self.beyond = beyond
        edges = [0.0]
        masses = []
        # Depth-first, always refining the leftmost unfinished panel first, so edges come out sorted.
        pending = [(0.0, self.upper, 0)]
        while pending:
            a, b, depth = pending.pop()
            m = 0.5 * (a + b)
            whole = float(_gl_integrate(g, np.array(a), np.array(b)))
            halves = _gl_integrate(g, np.array([a, m]), np.array([m, b]))
            split = float(halves.sum())
            if abs(whole - split) <= max(rel_tol * abs(split), abs_tol) or depth >= max_depth:
                edges.append(b)
                masses.append(split)
            else:
                pending.append((m, b, depth + 1))
                pending.append((a, m, depth + 1))
        self.edges = np.asarray(edges)
        masses = np.asarray(masses)
        tail_at_upper = float(beyond(np.array(self.upper)))
        # S[k] = mass to the right of edges[k]; S[-1] is the mass beyond `upper`.
        self.S = np.concatenate([np.cumsum(masses[::-1])[::-1], [0.0]]) + tail_at_upper
        self.half_mass = float(self.S[0])

    def raw_sf(self, x: np.ndarray) -> np.ndarray:
        """Unnormalised ``int_x^inf g`` for ``x >= 0``."""
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        inside = x < self.upper
        if np.any(inside):
            xi = x[inside]
            k = np.searchsorted(self.edges, xi, side="right") - 1
            right = self.edges[k + 1]
            out[inside] = self.S[k + 1] + _gl_integrate(self.g, xi, right)
        if np.any(~inside):
            out[~inside] = self.beyond(x[~inside])
        return out


# ---------------------------------------------------------------------------------------------
# Location family
# ---------------------------------------------------------------------------------------------


def _solve_decreasing(fun, slope, target, lo, hi, cfg: NumericConfig):
    """Vectorised safeguarded Newton solve of ``fun(x) = target`` on brackets ``[lo, hi]``.

    ``fun`` is nonincreasing with ``fun(lo) >= target > fun(hi)`` and ``slope(x) = -fun'(x)``.
    Newton steps that leave the current bracket are replaced by bisection, so the iteration
    never does worse than plain bisection.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    x = 0.5 * (lo + hi)
    for _ in range(cfg.max_iter):
        resid = fun(x) - target
        above = resid >= 0
        lo = np.where(above, x, lo)
        hi = np.where(above, hi, x)
        d = slope(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = x + resid / d
        ok = np.isfinite(newton) & (newton >= lo) & (newton <= hi)
        x_new = np.where(ok, newton, 0.5 * (lo + hi))
        tol = cfg.root_tol * np.maximum(1.0, np.abs(x))
        done = (np.abs(x_new - x) <= tol) | (hi - lo <= tol)
        x = x_new
        if np.all(done):
            break
    return x


class LocationFamily:
    """A symmetric unimodal density ``f`` on the real line, centred at zero.

    Parameters
    ----------
    kind : FamilyKind or str
    shape : float or int, optional
        Degrees of freedom for ``t``, ``beta`` for ``gengauss`` and ``mollifier``, the number of
        averaged uniforms ``k`` for ``bates``.  Must be absent for the other kinds.
    numerics : NumericConfig, optional
    """

    __slots__ = ("kind", "shape", "numerics", "norm_const", "half_width", "_table", "_bates_coef")

    def __init__(self, kind, shape=None, numerics: NumericConfig = DEFAULT_NUMERICS):
        try:
            kind = FamilyKind(kind)
        except ValueError:
            raise ConfigError(f"unknown family kind {kind!r}") from None
        self.kind = kind
        self.numerics = numerics
        self._table = None
        self._bates_coef = None
        needs_shape = kind in (FamilyKind.STUDENT_T, FamilyKind.GENGAUSS, FamilyKind.MOLLIFIER, FamilyKind.BATES)
        if needs_shape and shape is None:
            raise ConfigError(f"family {kind.value} requires a shape parameter")
        if not needs_shape and shape is not None:
            raise ConfigError(f"family {kind.value} takes no shape parameter")
        if kind is FamilyKind.BATES:
            if float(shape) != int(shape) or int(shape) < 1:
                raise ConfigError("Bates k must be an integer >= 1")
            shape = int(shape)
        elif needs_shape:
            shape = float(shape)
            if not (shape > 0 and math.isfinite(shape)):
                raise ConfigError(f"{kind.value} shape parameter must be positive and finite")
        self.shape = shape
        self.half_width = math.inf
        self.norm_const = None
        if kind is FamilyKind.GAUSSIAN:
            self.norm_const = 1.0 / math.sqrt(2.0 * math.pi)
        elif kind is FamilyKind.LAPLACE:
            self.norm_const = 0.5
        elif kind is FamilyKind.UNIFORM:
            self.norm_const = 1.0
            self.half_width = 0.5
        elif kind is FamilyKind.BATES:
            k = shape
            self.norm_const = 1.0
            self.half_width = 0.5
            j = np.arange(k + 1)
            self._bates_coef = np.array([(-1.0) ** i * math.comb(k, i) for i in j])
        else:
            self._build_table()

    # -- construction helpers -------------------------------------------------------------------

    def _build_table(self):
        cfg = self.numerics
        rel_tol, abs_tol = 1e-13, 1e-300
        beyond = lambda x: np.zeros_like(np.asarray(x, dtype=float))  # noqa: E731
        if self.kind is FamilyKind.STUDENT_T:
            nu = self.shape
            g = lambda x: (1.0 + x * x / nu) ** (-(nu + 1.0) / 2.0)  # noqa: E731
            upper = 50.0
            beyond = self._t_tail_integral
        elif self.kind is FamilyKind.GENGAUSS:
            beta = self.shape
            g = lambda x: np.exp(-np.abs(x) ** beta)  # noqa: E731
            upper = 720.0 ** (1.0 / beta)
        else:  # mollifier
            beta = self.shape
            self.half_width = 1.0

            def g(x):
                ax = np.abs(x)
                gap = (1.0 - ax) * (1.0 + ax)
                with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                    val = np.exp(-1.0 / gap ** beta)
                return np.where(ax < 1.0, val, 0.0)

            upper = 1.0
        self._table = _TailTable(g, upper, beyond, rel_tol, abs_tol)
        self.norm_const = 1.0 / (2.0 * self._table.half_mass)

    def _t_tail_integral(self, x):
        """``int_x^inf (1 + t^2/nu)^{-(nu+1)/2} dt`` for ``x >= 50`` through ``u = 1/t``.

        After substitution the integrand is ``nu^{(nu+1)/2} u^{nu-1} (1 + nu u^2)^{-(nu+1)/2}`` on
        ``[0, 1/x]``; the ``u^{nu-1}`` factor is absorbed into a Gauss-Jacobi weight.
        """
        nu = self.shape
        x = np.asarray(x, dtype=float)
        nodes, weights = _jacobi_rule(nu)
        b = 1.0 / x
        s = 0.5 * (nodes + 1.0)
        h = (1.0 + nu * (b[..., None] * s) ** 2) ** (-(nu + 1.0) / 2.0)
        integral = 2.0 ** (-nu) * (h @ weights)
        return nu ** ((nu + 1.0) / 2.0) * b ** nu * integral

    # -- density, cdf, tails ----------------------------------------------------------------------

    @property
    def spec(self) -> str:
        if self.shape is None:
            return self.kind.value
        shape = self.shape if isinstance(self.shape, int) else f"{self.shape:g}"
        return f"{self.kind.value}:{shape}"

    def __repr__(self) -> str:
        return f"LocationFamily({self.spec!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LocationFamily) and (self.kind, self.shape) == (other.kind, other.shape)

    def __hash__(self) -> int:
        return hash((self.kind, self.shape))

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.half_width)

    def pdf(self, x):
        arr, scalar = as_float_array(x)
        ax = np.abs(arr)
        kind = self.kind
        if kind is FamilyKind.GAUSSIAN:
            out = norm_pdf(arr)
        elif kind is FamilyKind.LAPLACE:
            out = 0.5 * np.exp(-ax)
        elif kind is FamilyKind.UNIFORM:
            out = np.where(ax <= 0.5, 1.0, 0.0)
        elif kind is FamilyKind.BATES:
            out = self._bates_pdf(ax)
        else:
            out = self.norm_const * self._table.g(ax)
            if kind is FamilyKind.MOLLIFIER:
                out = np.where(ax < 1.0, out, 0.0)
        return restore(np.asarray(out, dtype=float), scalar)

    def logpdf(self, x):
        """``log f(x)``, finite wherever ``f(x) > 0`` even after ``pdf`` underflows; ``-inf`` off
        the support."""
        arr, scalar = as_float_array(x)
        ax = np.abs(arr)
        kind = self.kind
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if kind is FamilyKind.GAUSSIAN:
                out = -0.5 * arr * arr - 0.5 * math.log(2.0 * math.pi)
            elif kind is FamilyKind.LAPLACE:
                out = math.log(0.5) - ax
            elif kind is FamilyKind.STUDENT_T:
                out = math.log(self.norm_const) - 0.5 * (self.shape + 1.0) * np.log1p(arr * arr / self.shape)
            elif kind is FamilyKind.GENGAUSS:
                out = math.log(self.norm_const) - ax ** self.shape
            elif kind is FamilyKind.MOLLIFIER:
                gap = (1.0 - ax) * (1.0 + ax)
                out = np.where(ax < 1.0, math.log(self.norm_const) - 1.0 / gap ** self.shape, -np.inf)
            else:  # uniform, bates: polynomial densities never underflow inside the support
                out = np.log(self.pdf(arr))
        return restore(np.asarray(out, dtype=float), scalar)

    def sf(self, x):
        """Upper tail ``P(X > x)``, accurate in relative terms for large ``x``."""
        arr, scalar = as_float_array(x)
        out = np.empty_like(arr)
        pos = arr >= 0
        out[pos] = self._upper_tail(arr[pos])
        out[~pos] = 1.0 - self._upper_tail(-arr[~pos])
        return restore(out, scalar)

    def cdf(self, x):
        arr, scalar = as_float_array(x)
        out = np.empty_like(arr)
        neg = arr < 0
        out[neg] = self._upper_tail(-arr[neg])
        out[~neg] = 1.0 - self._upper_tail(arr[~neg])
        return restore(out, scalar)

    def _upper_tail(self, x: np.ndarray) -> np.ndarray:
        """``P(X >= x)`` for ``x >= 0``; returns exactly 1/2 at zero."""
        kind = self.kind
        if kind is FamilyKind.GAUSSIAN:
            out = norm_sf(x)
        elif kind is FamilyKind.LAPLACE:
            out = 0.5 * np.exp(-x)
        elif kind is FamilyKind.UNIFORM:
            out = np.clip(0.5 - x, 0.0, 0.5)
        elif kind is FamilyKind.BATES:
            out = self._bates_upper_tail(x)
        else:
            out = np.where(x == 0, 0.5, self._table.raw_sf(x) / (2.0 * self._table.half_mass))
        return np.asarray(out, dtype=float)

    def _bates_pdf(self, ax: np.ndarray) -> np.ndarray:
        k = self.shape
        s = k * (0.5 - ax)  # distance to the support edge in Irwin-Hall units
        out = np.zeros_like(ax)
        for j in range(k + 1):
            active = s >= 0 if j == 0 else s > j
            out = out + self._bates_coef[j] * np.where(active, np.maximum(s - j, 0.0) ** (k - 1), 0.0)
        out = k / math.factorial(k - 1) * out
        return np.where(ax <= 0.5, np.maximum(out, 0.0), 0.0)

    def _bates_upper_tail(self, x: np.ndarray) -> np.ndarray:
        """Irwin-Hall CDF evaluated from the nearer support edge: P(X >= x) for x >= 0."""
        k = self.shape
        s = np.clip(k * (0.5 - x), 0.0, None)
        out = np.zeros_like(x)
        for j in range(k + 1):
            out = out + self._bates_coef[j] * np.where(s > j, s - j, 0.0) ** k
        out = np.clip(out / math.factorial(k), 0.0, 0.5)
        return np.where(x == 0, 0.5, out)

    # -- quantiles -------------------------------------------------------------------------------

    def isf(self, q):
        """``F^{-1}(1 - q)`` for ``q`` in ``(0, 1)`` without forming ``1 - q``."""
        arr, scalar = as_float_array(q)
        if np.any(~((arr > 0.0) & (arr < 1.0))):
            raise DomainError("tail probability must lie in (0, 1)")
        out = np.empty_like(arr)
        upper = arr <= 0.5
        out[upper] = self._isf_upper(arr[upper])
        out[~upper] = -self._isf_upper(1.0 - arr[~upper])
        return restore(out, scalar)

    def quantile(self, q):
        """``F^{-1}(q) = inf{t : F(t) >= q}`` for ``q`` in ``(0, 1)``."""
        arr, scalar = as_float_array(q)
        if np.any(~((arr > 0.0) & (arr < 1.0))):
            raise DomainError("quantile level must lie in (0, 1)")
        if self.kind is FamilyKind.GAUSSIAN:
            return restore(np.asarray(norm_ppf(arr), dtype=float), scalar)
        out = np.empty_like(arr)
        low = arr < 0.5
        out[low] = -self._isf_upper(arr[low])
        out[~low] = self._isf_upper(1.0 - arr[~low])
        return restore(out, scalar)

    def _isf_upper(self, q: np.ndarray) -> np.ndarray:
        """Solve ``P(X >= x) = q`` for ``0 < q <= 1/2``, giving ``x >= 0``."""
        q = np.asarray(q, dtype=float)
        if q.size == 0:
            return q.copy()
        kind = self.kind
        if kind is FamilyKind.GAUSSIAN:
            return np.asarray(norm_isf(q), dtype=float)
        if kind is FamilyKind.LAPLACE:
            return -np.log(2.0 * q)
        if kind is FamilyKind.UNIFORM:
            return 0.5 - q
        out = np.empty_like(q)
        closed = np.zeros(q.shape, dtype=bool)
        if kind is FamilyKind.BATES:
            k = self.shape
            closed = q <= 1.0 / math.factorial(k)
            out[closed] = 0.5 - bates_tail_gap(k, q[closed])
        rest = ~closed & (q < 0.5)
        out[q == 0.5] = 0.0
        if np.any(rest):
            qr = q[rest]
            lo, hi = self._bracket(qr)
            out[rest] = _solve_decreasing(self._upper_tail, self.pdf, qr, lo, hi, self.numerics)
        return out

    def _bracket(self, q: np.ndarray):
        """Bracket ``[lo, hi]`` with ``P(X >= lo) >= q > P(X >= hi)``."""
        lo = np.zeros_like(q)
        if self.bounded:
            return lo, np.full_like(q, self.half_width)
        if self._table is not None:
            # The cached panel table locates the panel directly.
            s = self._table.S / (2.0 * self._table.half_mass)
            k = np.searchsorted(-s, -q, side="right") - 1
            inside = k < len(self._table.edges) - 1
            k = np.clip(k, 0, len(self._table.edges) - 2)
            lo = np.where(inside, self._table.edges[k], self._table.upper)
            hi = np.where(inside, self._table.edges[k + 1], 2.0 * self._table.upper)
        else:
            hi = np.full_like(q, 2.0)
        for _ in range(self.numerics.max_iter):
            short = self._upper_tail(hi) >= q
            if not np.any(short):
                break
            lo = np.where(short, hi, lo)
            hi = np.where(short, 2.0 * hi, hi)
        return lo, hi

    # -- sampling --------------------------------------------------------------------------------

    def sample(self, theta: float, n: int, seed: int) -> SortedSample:
        """``n`` i.i.d. draws from ``f(x - theta)`` by inverse-CDF transform, sorted."""
        if n < 1:
            raise DomainError("n must be at least 1")
        u = open_uniforms(np.random.default_rng(seed), n)
        return SortedSample(theta + self.quantile(u))


def open_uniforms(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform draws strictly inside ``(0, 1)`` on the grid ``(j + 1/2) / 2^53``."""
    k = rng.integers(0, 2 ** 53, size=n, dtype=np.int64)
    return (k.astype(float) + 0.5) / 2.0 ** 53


_JACOBI_CACHE: dict = {}


def _jacobi_rule(nu: float):
    if nu not in _JACOBI_CACHE:
        _JACOBI_CACHE[nu] = roots_jacobi(24, 0.0, nu - 1.0)
    return _JACOBI_CACHE[nu]


# ---------------------------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------------------------

_FAMILY_CACHE: dict = {}


def parse_family(spec: str, numerics: NumericConfig = DEFAULT_NUMERICS) -> LocationFamily:
    """Parse ``gaussian``, ``laplace``, ``t:<nu>``, ``gengauss:<beta>``, ``mollifier:<beta>``,
    ``bates:<k>`` or ``uniform``.  Instances are cached per (spec, numerics)."""
    if not isinstance(spec, str) or not spec.strip():
        raise ConfigError("family specification must be a non-empty string")
    key = (spec.strip().lower(), numerics)
    if key in _FAMILY_CACHE:
        return _FAMILY_CACHE[key]
    name, _, arg = key[0].partition(":")
    shape = None
    if arg:
        try:
            shape = float(arg)
        except ValueError:
            raise ConfigError(f"cannot parse shape parameter in {spec!r}") from None
    fam = LocationFamily(name, shape, numerics)
    _FAMILY_CACHE[key] = fam
    return fam


def _family(family) -> LocationFamily:
    return family if isinstance(family, LocationFamily) else parse_family(family)


def density(family, x):
    return _family(family).pdf(x)


def cdf(family, x):
    return _family(family).cdf(x)


def quantile(family, q):
    return _family(family).quantile(q)


def sample(family, theta: float, n: int, seed: int) -> SortedSample:
    return _family(family).sample(theta, n, seed)


def bates_tail_gap(k: int, q):
    """``1/2 - F^{-1}(1 - q) = (q (k-1)! / k^{k-1})^{1/k}``, valid for ``q <= 1/k!``."""
    arr, scalar = as_float_array(q)
    return restore((arr * math.factorial(k - 1) / k ** (k - 1)) ** (1.0 / k), scalar)


def bates_tail_sf(k: int, x):
    """Closed-form ``P(X >= x) = k^{k-1}/(k-1)! (1/2 - x)^k`` on ``(1/2 - 1/k, 1/2]``."""
    arr, scalar = as_float_array(x)
    if np.any((arr <= 0.5 - 1.0 / k) | (arr > 0.5)):
        raise DomainError("the closed-form Bates tail holds only on (1/2 - 1/k, 1/2]")
    return restore(k ** (k - 1) / math.factorial(k - 1) * (0.5 - arr) ** k, scalar)


LEMMA_Q_MAX = 1e-3


def quantile_lemma_bounds(family, q: float) -> tuple[float, float]:
    """Analytic sandwich for the extreme quantile ``x = F^{-1}(1 - q)``.

    * generalized Gaussian with ``beta > 1``: bounds on ``x`` itself,
      ``(log(1/q)/2)^{1/beta} <= x <= log(1/q)^{1/beta}``;
    * mollifier: bounds on ``1 - x^2``, ``(1/log(1/q))^{1/beta} <= 1 - x^2 <= (2/log(1/q))^{1/beta}``.

    Only offered for ``q <= 1e-3``; the sandwich is an asymptotic statement and is not claimed
    for moderate tail probabilities.
    """
    fam = _family(family)
    if not 0.0 < q <= LEMMA_Q_MAX:
        raise DomainError(f"quantile sandwich is only provided for 0 < q <= {LEMMA_Q_MAX:g}")
    log_inv = math.log(1.0 / q)
    if fam.kind is FamilyKind.GENGAUSS and fam.shape > 1:
        b = fam.shape
        return (log_inv / 2.0) ** (1.0 / b), log_inv ** (1.0 / b)
    if fam.kind is FamilyKind.MOLLIFIER:
        b = fam.shape
        return (1.0 / log_inv) ** (1.0 / b), (2.0 / log_inv) ** (1.0 / b)
    raise DomainError(f"no quantile sandwich for family {fam.spec}")


def gengauss_tail_bounds(beta: float, x: float) -> tuple[float, float]:
    """Sandwich for ``P(X >= x)`` under the generalized Gaussian with ``beta > 1``, ``x > 0``.

    With ``I = beta / (2 Gamma(1/beta))`` and ``u = I e^{-x^beta} / (beta x^{beta-1})`` the bounds
    are ``(1 - (beta-1)/(beta x^beta)) u <= P(X >= x) <= u``.
    """
    if not beta > 1 or not x > 0:
        raise DomainError("tail sandwich needs beta > 1 and x > 0")
    norm = beta / (2.0 * math.gamma(1.0 / beta))
    upper = norm * math.exp(-x ** beta) / (beta * x ** (beta - 1.0))
    lower = (1.0 - (beta - 1.0) / (beta * x ** beta)) * upper
    return lower, upper


def normal_quantile_bounds(q: float) -> tuple[float, float]:
    """For ``x = Phi^{-1}(1 - q) >= 2``: ``sqrt(log(1/q))/2 <= x <= sqrt(2 log(1/q))``."""
    if not 0.0 < q < 1.0:
        raise DomainError("q must lie in (0, 1)")
    log_inv = math.log(1.0 / q)
    return 0.5 * math.sqrt(log_inv), math.sqrt(2.0 * log_inv)


__all__ = [
    "FamilyKind",
    "NumericConfig",
    "LocationFamily",
    "parse_family",
    "density",
    "cdf",
    "quantile",
    "sample",
    "quantile_lemma_bounds",
    "bates_tail_gap",
    "bates_tail_sf",
    "gengauss_tail_bounds",
    "normal_quantile_bounds",
    "norm_cdf",
    "norm_pdf",
    "norm_ppf",
    "norm_isf",
    "norm_sf",
    "open_uniforms",
]

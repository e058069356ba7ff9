"""Separation rates and the adaptive interval for general symmetric location families.

For a contamination level ``eps`` (with ``eps_max`` the largest level to be covered) the tail levels

    q_bar(eps)   = 6/(1-eps_max) * (eps + 100 log(32/alpha) / (3 (1-eps_max) n))
    q_under(eps) = (eps + alpha (1-eps_max)/n) / (2 (1-eps_max))

fix two quantiles of ``f``.  The separations ``r_bar`` and ``r_under`` bracket the optimal
interval length; ``r_up`` and ``r_down`` are their simpler density-ratio counterparts, valid when
``f(t - r)/f(t)`` is nondecreasing in ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .distributions import FamilyKind, LocationFamily, parse_family
from .empirical import SortedSample
from .errors import ConstructionError, DomainError
from .gaussian_arci import Interval, interval_from_levels

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
SCAN_POINTS = 256
RATIO_GRID_POINTS = 512


def _family(family) -> LocationFamily:
    return family if isinstance(family, LocationFamily) else parse_family(family)


def _check_levels(eps: float, n: int, alpha: float, eps_max: float) -> None:
    if not 0.0 <= eps <= eps_max:
        raise DomainError("eps must lie in [0, eps_max]")
    if not 0.0 < eps_max < 1.0:
        raise DomainError("eps_max must lie in (0, 1)")
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    if n < 1:
        raise DomainError("n must be at least 1")


def q_bar(eps: float, n: int, alpha: float, eps_max: float) -> float:
    _check_levels(eps, n, alpha, eps_max)
    c = 1.0 - eps_max
    return 6.0 / c * (eps + 100.0 * math.log(32.0 / alpha) / (3.0 * c * n))


def q_under(eps: float, n: int, alpha: float, eps_max: float) -> float:
    _check_levels(eps, n, alpha, eps_max)
    c = 1.0 - eps_max
    return (eps + alpha * c / n) / (2.0 * c)


def bracket_cap(family) -> float:
    """Upper limit ``8 * (half-width, or F^{-1}(1 - 1e-12))`` for every separation search."""
    fam = _family(family)
    return 8.0 * (fam.half_width if fam.bounded else float(fam.isf(1e-12)))


def _tail_quantile(fam: LocationFamily, q: float) -> float:
    """``F^{-1}(1 - q)`` with ``-inf`` for ``q >= 1``."""
    if q >= 1.0:
        return -math.inf
    return float(fam.isf(q))


@lru_cache(maxsize=None)
def has_monotone_ratio(family: LocationFamily) -> bool:
    """Numerical check that ``f(t - r) / f(t)`` is nondecreasing in ``t`` for several ``r``.

    The check runs on a 512-point grid over ``[-T, T]`` with ``T`` the support half-width or
    ``F^{-1}(1 - 1e-12)``, for ``r`` equal to 1%, 10% and 50% of ``T``.
    """
    fam = _family(family)
    T = fam.half_width if fam.bounded else float(fam.isf(1e-12))
    t = np.linspace(-T, T, RATIO_GRID_POINTS)
    for frac in (0.01, 0.1, 0.5):
        r = frac * T
        num = np.asarray(fam.pdf(t - r))
        den = np.asarray(fam.pdf(t))
        ok = den > 0
        ratio = num[ok] / den[ok]
        if np.any(np.diff(ratio) < -1e-9 * np.maximum(1.0, ratio[1:])):
            return False
    return True


# ---------------------------------------------------------------------------------------------
# Generic monotone searches
# ---------------------------------------------------------------------------------------------


def _bisect_boundary(feasible, lo: float, hi: float, root_tol: float, max_iter: int) -> float:
    """Return the boundary between ``feasible(lo) = a`` and ``feasible(hi) = not a``.

    The returned value is the endpoint on the side of ``hi`` once the bracket is below
    ``root_tol``.
    """
    f_lo = feasible(lo)
    for _ in range(max_iter):
        if hi - lo <= root_tol:
            break
        mid = 0.5 * (lo + hi)
        if feasible(mid) == f_lo:
            lo = mid
        else:
            hi = mid
    return hi


def _golden_max(fun, a: float, b: float, tol: float, max_iter: int) -> tuple[float, float]:
    """Golden-section maximisation of ``fun`` on ``[a, b]``; returns ``(argmax, max)``."""
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = fun(d)
    return (c, fc) if fc >= fd else (d, fd)


def scan_sup(fun, a: float, b: float, root_tol: float, max_iter: int, stop_at_zero: bool = False):
    """Supremum of a vectorised ``fun`` on ``[a, b]``: 256-point scan, then golden-section
    refinement around the best grid point.  Returns ``(argmax, max)``.

    With ``stop_at_zero`` the refinement is skipped once a nonnegative value is found, which is
    all a feasibility test needs.
    """
    if not a < b:
        x = np.array([a])
        return a, float(fun(x)[0])
    grid = np.linspace(a, b, SCAN_POINTS)
    vals = np.asarray(fun(grid), dtype=float)
    i = int(np.argmax(vals))
    best_x, best = float(grid[i]), float(vals[i])
    if stop_at_zero and best >= 0:
        return best_x, best
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, SCAN_POINTS - 1)]
    scalar = lambda x: float(fun(np.array([x]))[0])  # noqa: E731
    xg, vg = _golden_max(scalar, float(lo), float(hi), root_tol, max_iter)
    if vg > best:
        best_x, best = xg, vg
    return best_x, best


# ---------------------------------------------------------------------------------------------
# Separation quantities
# ---------------------------------------------------------------------------------------------


@dataclass
class _Result:
    value: float
    notes: list = field(default_factory=list)


def _r_up(fam: LocationFamily, eps, n, alpha, eps_max) -> _Result:
    qb = q_bar(eps, n, alpha, eps_max)
    if qb >= 1.0:
        return _Result(math.inf, [f"q_bar = {qb:.4g} >= 1: F^-1(1 - q_bar) is -inf, r_up is +inf"])
    a = _tail_quantile(fam, qb)
    c = 6.0 / (1.0 - eps_max)
    fa = float(fam.pdf(a))
    feasible = lambda r: fa >= c * float(fam.pdf(a + r))  # noqa: E731
    cap = bracket_cap(fam)
    lo = max(0.0, -2.0 * a)  # f(a + r) >= f(a) on [0, -2a] when a < 0
    if feasible(lo):
        return _Result(lo)
    if not feasible(cap):
        return _Result(math.inf, ["no finite separation below the bracket cap; rate is constant order"])
    cfg = fam.numerics
    return _Result(_bisect_boundary(feasible, lo, cap, cfg.root_tol, cfg.max_iter))


def _r_down(fam: LocationFamily, eps, n, alpha, eps_max) -> _Result:
    qu = q_under(eps, n, alpha, eps_max)
    b = _tail_quantile(fam, qu)
    c = (1.0 - eps_max / 2.0) / (1.0 - eps_max)
    fb = float(fam.pdf(b))
    feasible = lambda r: fb <= c * float(fam.pdf(b + r))  # noqa: E731
    cap = bracket_cap(fam)
    if feasible(cap):
        return _Result(math.inf, ["ratio stays below the threshold up to the bracket cap"])
    cfg = fam.numerics
    return _Result(_bisect_boundary(feasible, 0.0, cap, cfg.root_tol, cfg.max_iter))


def _bar_objective(fam: LocationFamily, r: float, c: float):
    """``u -> 1 - F(u) - c (1 - F(u + r))``, the defining function of ``r_bar`` with ``u = t - r``."""
    return lambda u: np.asarray(fam.sf(u)) - c * np.asarray(fam.sf(u + r))


def _r_bar(fam: LocationFamily, eps, n, alpha, eps_max) -> tuple[_Result, float]:
    """Returns the result and ``A = F^{-1}(1 - q_bar)``."""
    qb = q_bar(eps, n, alpha, eps_max)
    if qb >= 1.0:
        return _Result(math.inf, [f"q_bar = {qb:.4g} >= 1: the threshold range is empty, r_bar is +inf"]), -math.inf
    A = _tail_quantile(fam, qb)
    if A < 0:
        return _Result(math.inf, [f"q_bar = {qb:.4g} > 1/2: the threshold range is empty, r_bar is +inf"]), A
    c = 6.0 / (1.0 - eps_max)
    cfg = fam.numerics

    def feasible(r: float) -> bool:
        return scan_sup(_bar_objective(fam, r, c), 0.0, A, cfg.root_tol, cfg.max_iter, stop_at_zero=True)[1] >= 0.0

    cap = bracket_cap(fam)
    if feasible(0.0):
        return _Result(0.0), A
    if not feasible(cap):
        return _Result(math.inf, ["no finite separation below the bracket cap; rate is constant order"]), A
    return _Result(_bisect_boundary(feasible, 0.0, cap, cfg.root_tol, cfg.max_iter)), A


def _under_objective(fam: LocationFamily, r: float, kappa: float):
    """``u -> f(u) - kappa f(u + r)``, the defining function of ``r_under`` with ``u = t - r``."""
    return lambda u: np.asarray(fam.pdf(u)) - kappa * np.asarray(fam.pdf(u + r))


def _r_under(fam: LocationFamily, eps, n, alpha, eps_max) -> _Result:
    qu = q_under(eps, n, alpha, eps_max)
    B = _tail_quantile(fam, qu)
    kappa = (1.0 - max(eps, alpha / n)) / (1.0 - eps_max)
    cfg = fam.numerics
    T = fam.half_width if fam.bounded else float(fam.isf(1e-12))
    cap = bracket_cap(fam)

    def feasible(r: float) -> bool:
        # For u below -T - r both densities are negligible (or zero outside a bounded support).
        lo = min(-T - r, B)
        return scan_sup(_under_objective(fam, r, kappa), lo, B, cfg.root_tol, cfg.max_iter)[1] <= 0.0

    if not feasible(0.0):
        return _Result(0.0, ["r = 0 already violates the constraint (contamination level too large)"])
    if feasible(cap):
        return _Result(math.inf, ["constraint holds up to the bracket cap"])
    return _Result(_bisect_boundary(feasible, 0.0, cap, cfg.root_tol, cfg.max_iter))


def r_up(family, eps: float, n: int, alpha: float, eps_max: float) -> float:
    """``inf{r >= 0 : f(a)/f(a + r) >= 6/(1 - eps_max)}`` with ``a = F^{-1}(1 - q_bar)``.

    Families without a monotone likelihood ratio are routed to :func:`r_bar`.
    """
    return rate_quantities(family, eps, n, alpha, eps_max).r_up


def r_down(family, eps: float, n: int, alpha: float, eps_max: float) -> float:
    """``sup{r >= 0 : f(b)/f(b + r) <= (1 - eps_max/2)/(1 - eps_max)}`` with ``b = F^{-1}(1 - q_under)``.

    Families without a monotone likelihood ratio are routed to :func:`r_under`.
    """
    return rate_quantities(family, eps, n, alpha, eps_max).r_down


def r_bar(family, eps: float, n: int, alpha: float, eps_max: float) -> float:
    return _cached_r_bar(_family(family), eps, n, alpha, eps_max)[0].value


def r_under(family, eps: float, n: int, alpha: float, eps_max: float) -> float:
    return _cached_r_under(_family(family), eps, n, alpha, eps_max).value


@lru_cache(maxsize=4096)
def _cached_r_bar(fam, eps, n, alpha, eps_max):
    return _r_bar(fam, eps, n, alpha, eps_max)


@lru_cache(maxsize=4096)
def _cached_r_under(fam, eps, n, alpha, eps_max):
    return _r_under(fam, eps, n, alpha, eps_max)


def t_eps_general(family, r_bar_value: float, q_bar_value: float, eps_max: float) -> float:
    """Largest ``t`` in ``[r_bar, r_bar + F^{-1}(1 - q_bar)]`` with
    ``1 - F(t - r_bar) - 6/(1 - eps_max) (1 - F(t)) >= 0``."""
    fam = _family(family)
    if not (math.isfinite(r_bar_value) and 0.0 < q_bar_value < 1.0):
        raise ConstructionError("t_eps needs a finite r_bar and q_bar in (0, 1)")
    A = _tail_quantile(fam, q_bar_value)
    if A < 0:
        raise ConstructionError("threshold range [r_bar, r_bar + F^-1(1 - q_bar)] is empty")
    c = 6.0 / (1.0 - eps_max)
    cfg = fam.numerics
    H = _bar_objective(fam, r_bar_value, c)
    if float(H(np.array([A]))[0]) >= 0.0:
        return r_bar_value + A
    grid = np.linspace(0.0, A, SCAN_POINTS)
    vals = np.asarray(H(grid))
    feasible_idx = np.nonzero(vals >= 0.0)[0]
    if feasible_idx.size:
        i = int(feasible_idx[-1])
        u_ok = float(grid[i])
    else:
        u_ok, v = scan_sup(H, 0.0, A, cfg.root_tol, cfg.max_iter)
        if v < -1e-10:
            raise ConstructionError("no feasible threshold at r_bar; constraint maximum is "
                                    f"{v:.3g}")
        i = int(np.searchsorted(grid, u_ok, side="right")) - 1
    u_bad = float(grid[min(i + 1, SCAN_POINTS - 1)])
    if u_bad <= u_ok:
        return r_bar_value + u_ok
    is_ok = lambda u: float(H(np.array([u]))[0]) >= 0.0  # noqa: E731
    lo, hi = u_ok, u_bad
    for _ in range(cfg.max_iter):
        if hi - lo <= cfg.root_tol:
            break
        mid = 0.5 * (lo + hi)
        if is_ok(mid):
            lo = mid
        else:
            hi = mid
    return r_bar_value + lo


# ---------------------------------------------------------------------------------------------
# Aggregate record
# ---------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class RateQuantities:
    family: str
    eps: float
    eps_max: float
    alpha: float
    n: int
    q_bar: float
    q_under: float
    r_bar: float
    r_under: float
    r_up: float
    r_down: float
    t_eps: float
    diagnostics: tuple = ()

    def __post_init__(self):
        if self.eps_max <= 0.05 and self.alpha <= 0.25 and self.n >= 400 and self.q_under > self.q_bar:
            raise AssertionError("q_under <= q_bar must hold in this parameter range")

    def as_row(self, theory: float) -> dict:
        return {
            "family": self.family, "n": self.n, "eps": self.eps, "q_bar": self.q_bar,
            "q_under": self.q_under, "r_up": self.r_up, "r_down": self.r_down,
            "r_bar": self.r_bar, "r_under": self.r_under, "theory": theory,
        }


def rate_quantities(family, eps: float, n: int, alpha: float, eps_max: float) -> RateQuantities:
    fam = _family(family)
    notes: list[str] = []
    rb, A = _cached_r_bar(fam, eps, n, alpha, eps_max)
    ru = _cached_r_under(fam, eps, n, alpha, eps_max)
    notes += [f"r_bar: {m}" for m in rb.notes] + [f"r_under: {m}" for m in ru.notes]
    if has_monotone_ratio(fam):
        up = _r_up(fam, eps, n, alpha, eps_max)
        down = _r_down(fam, eps, n, alpha, eps_max)
        notes += [f"r_up: {m}" for m in up.notes] + [f"r_down: {m}" for m in down.notes]
        up_v, down_v = up.value, down.value
    else:
        notes.append("density ratio is not monotone; r_up/r_down fall back to r_bar/r_under")
        up_v, down_v = rb.value, ru.value
    qb = q_bar(eps, n, alpha, eps_max)
    t = math.nan
    if math.isfinite(rb.value) and qb < 1.0 and A >= 0:
        t = t_eps_general(fam, rb.value, qb, eps_max)
    return RateQuantities(
        family=fam.spec, eps=eps, eps_max=eps_max, alpha=alpha, n=n, q_bar=qb,
        q_under=q_under(eps, n, alpha, eps_max), r_bar=rb.value, r_under=ru.value,
        r_up=up_v, r_down=down_v, t_eps=t, diagnostics=tuple(notes),
    )


# ---------------------------------------------------------------------------------------------
# Theoretical rate shapes
# ---------------------------------------------------------------------------------------------


def theoretical_rate(family, n: int, eps: float) -> float:
    """Closed-form rate shape (up to constants) of the optimal interval length."""
    fam = _family(family)
    if n < 2:
        raise DomainError("n must be at least 2")
    if not 0.0 <= eps < 1.0:
        raise DomainError("eps must lie in [0, 1)")
    inv_log_eps = 0.0 if eps == 0.0 else 1.0 / math.log(1.0 / eps)
    base = 1.0 / math.log(n) + inv_log_eps
    kind = fam.kind
    if kind is FamilyKind.STUDENT_T:
        return 1.0
    if kind in (FamilyKind.GENGAUSS, FamilyKind.GAUSSIAN, FamilyKind.LAPLACE):
        beta = {FamilyKind.GAUSSIAN: 2.0, FamilyKind.LAPLACE: 1.0}.get(kind, fam.shape)
        return base ** (max(beta - 1.0, 0.0) / beta)
    if kind is FamilyKind.MOLLIFIER:
        return base ** ((fam.shape + 1.0) / fam.shape)
    if kind in (FamilyKind.BATES, FamilyKind.UNIFORM):
        k = 1 if kind is FamilyKind.UNIFORM else fam.shape
        return (1.0 / n + eps) ** (1.0 / k)
    raise DomainError(f"no rate formula for family {fam.spec}")


# ---------------------------------------------------------------------------------------------
# General adaptive interval
# ---------------------------------------------------------------------------------------------


def general_eps_grid(eps_max: float, size: int = 32) -> np.ndarray:
    """``{0}`` together with ``size`` geometric points from ``eps_max * 1e-8`` to ``eps_max``."""
    return np.concatenate([[0.0], np.geomspace(eps_max * 1e-8, eps_max, size)])


@dataclass(frozen=True)
class GeneralTestGrid:
    """Per-level parameters of the general tests: threshold fraction, t_eps and r_eps."""

    eps: np.ndarray
    threshold: np.ndarray
    t: np.ndarray
    r: np.ndarray
    notes: tuple


def general_threshold(fam: LocationFamily, t: float, eps: float, n: int, alpha: float) -> float:
    """``(3/2) (1 - F(t) + 10 log(4/alpha) / (9 n) + eps)``."""
    return 1.5 * (float(fam.sf(t)) + 10.0 * math.log(4.0 / alpha) / (9.0 * n) + eps)


@lru_cache(maxsize=256)
def general_test_grid(family: LocationFamily, n: int, alpha: float, eps_max: float,
                      grid: tuple | None = None, grid_size: int = 32) -> GeneralTestGrid:
    fam = _family(family)
    eps_values = np.asarray(grid if grid is not None else general_eps_grid(eps_max, grid_size), dtype=float)
    thr, ts, rs, notes = [], [], [], []
    for eps in eps_values:
        rb, _ = _cached_r_bar(fam, float(eps), n, alpha, eps_max)
        if not math.isfinite(rb.value):
            thr.append(math.nan), ts.append(math.nan), rs.append(math.nan)
            notes.append(f"eps={eps:.3g}: r_bar is infinite; grid point skipped")
            continue
        t = t_eps_general(fam, rb.value, q_bar(float(eps), n, alpha, eps_max), eps_max)
        thr.append(general_threshold(fam, t, float(eps), n, alpha))
        ts.append(t)
        rs.append(rb.value)
    return GeneralTestGrid(eps_values, np.array(thr), np.array(ts), np.array(rs), tuple(notes))


def arci_general(sample: SortedSample, family, alpha: float, eps_max: float, grid_size: int = 32) -> Interval:
    """Adaptive interval for a general family: the intersection over the contamination grid of
    ``[F_n^{-1}(thr) + t_eps - r_bar, F_n^{-1}(1 - thr) - t_eps + r_bar]``."""
    fam = _family(family)
    n = sample.n
    qmax = q_bar(eps_max, n, alpha, eps_max)
    if qmax > 1.0:
        raise ConstructionError(
            f"the general interval needs q_bar(eps_max) <= 1, got {qmax:.4g} at n={n}; "
            "use a larger sample or a smaller eps_max"
        )
    g = general_test_grid(fam, n, alpha, eps_max, None, grid_size)
    iv = interval_from_levels(sample, g.threshold, g.t, g.r, label="eps grid point")
    return iv.with_diagnostics(*g.notes)

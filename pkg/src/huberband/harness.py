"""Contaminated-data generation and Monte Carlo coverage/length experiments.

A replicate draws ``n`` points from ``(1 - eps) P_theta + eps Q``, builds one interval (or
confidence set) and records whether it contains ``theta`` together with its length.  Replicate
``i`` is seeded from ``(master_seed, i)`` alone, so a report is a pure function of the experiment
spec no matter how many worker processes share the work.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .adversarial import AdversaryKind, build_adversary
from .distributions import FamilyKind, LocationFamily, open_uniforms, parse_family
from .empirical import SortedSample
from .errors import ConfigError, DomainError
from .gaussian_arci import (
    EpsMaxMode,
    GaussianArciConfig,
    Interval,
    arci,
    conservative_interval,
    median_interval,
    t_epsilon,
)
from .general_arci import arci_general
from .list_decodable import HALF_WIDTH, confidence_set
from .normal import norm_ppf

SCHEMA_VERSION = 1
THREADS_ENV = "HUBERBAND_THREADS"


# ---------------------------------------------------------------------------------------------
# Contamination distributions
# ---------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class PointMass:
    x: float

    def __str__(self) -> str:
        return f"point:{self.x!r}"


@dataclass(frozen=True)
class GaussianAt:
    mu: float
    sd: float = 1.0

    def __post_init__(self):
        if not (self.sd > 0 and math.isfinite(self.sd)):
            raise ConfigError("the contaminating Gaussian needs a positive finite sd")

    def __str__(self) -> str:
        return f"gauss:{self.mu!r},{self.sd!r}"


@dataclass(frozen=True)
class AdversaryRef:
    """One side of a least-favourable pair used as the contamination distribution.

    Side ``"null"`` draws from ``q0`` of the pair built with ``eps_max`` equal to the
    contamination level, so the data follow the null mixture exactly.  Side ``"alt"`` draws from
    ``q1`` of the pair built with ``eps`` equal to the contamination level (``eps_max`` is then a
    separate parameter), shifted so that the clean component sits at ``theta``.
    """

    kind: AdversaryKind
    side: str = "null"
    r: float | str = "auto"
    eps_max: float = 0.05
    alpha: float = 0.05
    n: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "kind", AdversaryKind.parse(self.kind))
        if self.side not in ("null", "alt"):
            raise ConfigError("adversary side must be 'null' or 'alt'")
        if self.r != "auto" and not (isinstance(self.r, (int, float)) and self.r > 0):
            raise ConfigError("adversary r must be positive or 'auto'")

    def __str__(self) -> str:
        return (f"adversary:{self.kind.value}:side={self.side},r={self.r},eps_max={self.eps_max!r},"
                f"alpha={self.alpha!r},n={self.n}")


def _float(text: str, what: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"cannot parse {what} from {text!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"{what} must be finite")
    return v


def parse_q(text: str):
    """Parse ``point:<x>``, ``gauss:<mu>[,<sd>]`` or ``adversary:<kind>[:key=value,...]``.

    Adversary keys are ``side``, ``r``, ``eps_max``, ``alpha`` and ``n``.
    """
    if not isinstance(text, str):
        return text
    head, _, rest = text.strip().partition(":")
    head = head.lower()
    if head == "point":
        return PointMass(_float(rest, "point mass location"))
    if head in ("gauss", "gaussian", "normal"):
        parts = [p for p in rest.split(",") if p.strip()]
        if not 1 <= len(parts) <= 2:
            raise ConfigError(f"expected gauss:<mu>[,<sd>], got {text!r}")
        return GaussianAt(*(_float(p, "gaussian parameter") for p in parts))
    if head == "adversary":
        kind, _, opts = rest.partition(":")
        kw: dict = {}
        for item in filter(None, (s.strip() for s in opts.split(","))):
            key, eq, val = item.partition("=")
            if not eq:
                raise ConfigError(f"adversary option {item!r} is not key=value")
            key = key.strip().replace("-", "_")
            if key == "side":
                kw[key] = val.strip()
            elif key == "r":
                kw[key] = "auto" if val.strip() == "auto" else _float(val, "r")
            elif key in ("eps_max", "alpha"):
                kw[key] = _float(val, key)
            elif key == "n":
                kw[key] = int(_float(val, "n"))
            else:
                raise ConfigError(f"unknown adversary option {key!r}")
        return AdversaryRef(kind, **kw)
    raise ConfigError(f"unknown contamination spec {text!r}")


@dataclass(frozen=True)
class ContaminationSpec:
    """``(1 - eps) P_{theta, sigma} + eps Q`` with ``P`` from ``family``."""

    family: LocationFamily | str = "gaussian"
    theta: float = 0.0
    eps: float = 0.0
    q: object = PointMass(10.0)
    sigma: float = 1.0

    def __post_init__(self):
        if isinstance(self.family, str):
            object.__setattr__(self, "family", parse_family(self.family))
        object.__setattr__(self, "q", parse_q(self.q))
        if not 0.0 <= self.eps < 1.0:
            raise ConfigError("eps must lie in [0, 1)")
        if not math.isfinite(self.theta):
            raise ConfigError("theta must be finite")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ConfigError("sigma must be positive and finite")
        if isinstance(self.q, AdversaryRef) and self.eps > 0:
            if self.q.side == "null" and self.eps > 0.5:
                raise ConfigError("an adversarial null side needs eps <= 0.5")

    def to_dict(self) -> dict:
        return {"family": self.family.spec, "theta": self.theta, "eps": self.eps,
                "q": str(self.q), "sigma": self.sigma}


@lru_cache(maxsize=32)
def _adversary_for(ref: AdversaryRef, family: LocationFamily, eps: float, sigma: float):
    """Pair at ``theta = 0`` and the offset that moves its relevant clean component to 0."""
    if ref.side == "null":
        pair = build_adversary(ref.kind, family, ref.r, eps=0.0, eps_max=eps, alpha=ref.alpha,
                               n=ref.n, sigma=sigma)
        return pair, 0.0
    pair = build_adversary(ref.kind, family, ref.r, eps=eps, eps_max=ref.eps_max, alpha=ref.alpha,
                           n=ref.n, sigma=sigma)
    return pair, pair.r * sigma


def _draw_q(spec: ContaminationSpec, m: int, rng: np.random.Generator) -> np.ndarray:
    q = spec.q
    if m == 0:
        return np.empty(0)
    if isinstance(q, PointMass):
        return np.full(m, q.x)
    if isinstance(q, GaussianAt):
        return q.mu + q.sd * norm_ppf(open_uniforms(rng, m))
    pair, offset = _adversary_for(q, spec.family, spec.eps, spec.sigma)
    seed = int(rng.integers(0, 2 ** 63))
    return pair.sample_q(q.side, m, seed).values + (spec.theta + offset)


def generate_contaminated(spec: ContaminationSpec, n: int, seed: int) -> SortedSample:
    """``n`` independent draws from the contaminated model, sorted.

    The number of contaminated points is Binomial(n, eps); the order of the draws is
    irrelevant because only the sorted sample is returned.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    rng = np.random.default_rng(seed)
    m = int(rng.binomial(n, spec.eps)) if spec.eps > 0 else 0
    clean = spec.theta + spec.sigma * spec.family.quantile(open_uniforms(rng, n - m))
    return SortedSample(np.concatenate([np.atleast_1d(clean), _draw_q(spec, m, rng)]))


# ---------------------------------------------------------------------------------------------
# Methods
# ---------------------------------------------------------------------------------------------

METHODS = ("arci", "arci-general", "median", "conservative", "list", "list-modified")


@dataclass(frozen=True)
class MethodSpec:
    """An interval or confidence-set constructor with its configuration.

    ``mode`` selects the Gaussian variant (``std``, ``large049`` or ``small:<eps_max>``).
    ``eps`` is the contamination level given to ``median`` (``None`` means the true level).
    ``R`` is the half-width of ``conservative`` (``None`` means ``2 sigma / t_eps`` at the
    mode's contamination bound, the worst-case half-length of the adaptive interval).
    ``eps_max`` calibrates ``arci-general``.
    """

    name: str = "arci"
    mode: EpsMaxMode | str = "std"
    sigma: float = 1.0
    eps: float | None = None
    R: float | None = None
    eps_max: float = 0.05

    def __post_init__(self):
        name = self.name.strip().lower().replace("_", "-")
        aliases = {"arci-gaussian": "arci", "median-interval": "median", "general": "arci-general"}
        name = aliases.get(name, name)
        if name not in METHODS:
            raise ConfigError(f"unknown method {self.name!r}; choose from {', '.join(METHODS)}")
        object.__setattr__(self, "name", name)
        if isinstance(self.mode, str):
            object.__setattr__(self, "mode", EpsMaxMode.parse(self.mode))
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ConfigError("sigma must be positive and finite")
        if self.eps is not None and not 0.0 <= self.eps < 1.0:
            raise ConfigError("eps must lie in [0, 1)")
        if self.R is not None and not (self.R > 0 and math.isfinite(self.R)):
            raise ConfigError("R must be positive and finite")
        if not 0.0 < self.eps_max < 1.0:
            raise ConfigError("eps_max must lie in (0, 1)")

    @property
    def gaussian_only(self) -> bool:
        return self.name != "arci-general"

    def to_dict(self) -> dict:
        return {"name": self.name, "mode": str(self.mode), "sigma": self.sigma, "eps": self.eps,
                "R": self.R, "eps_max": self.eps_max}


@dataclass(frozen=True)
class ExperimentSpec:
    contamination: ContaminationSpec
    method: MethodSpec = MethodSpec()
    n: int = 1000
    replicates: int = 100
    alpha: float = 0.05
    master_seed: int = 0

    def __post_init__(self):
        if isinstance(self.method, str):
            object.__setattr__(self, "method", MethodSpec(self.method))
        if self.replicates < 1:
            raise ConfigError("replicates must be at least 1")
        if self.n < 2:
            raise ConfigError("n must be at least 2")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1)")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigError("master_seed must be a 64-bit unsigned integer")
        if self.method.gaussian_only and self.contamination.family.kind is not FamilyKind.GAUSSIAN:
            raise ConfigError(
                f"method {self.method.name} assumes Gaussian data, got {self.contamination.family.spec}"
            )

    def to_dict(self) -> dict:
        return {"contamination": self.contamination.to_dict(), "method": self.method.to_dict(),
                "n": self.n, "replicates": self.replicates, "alpha": self.alpha,
                "master_seed": self.master_seed}


def replicate_seed(master_seed: int, index: int) -> int:
    """Stable 64-bit seed for replicate ``index``."""
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(index,))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def default_R(method: MethodSpec, n: int, alpha: float) -> float:
    if method.R is not None:
        return method.R
    t = t_epsilon(min(method.mode.bound, 0.05), n, alpha)
    if not t > 0:
        raise ConfigError(f"no default conservative radius at n={n}; pass R explicitly")
    return 2.0 * method.sigma / t


def apply_method(spec: ExperimentSpec, sample: SortedSample):
    """Build the interval (or confidence set) of ``spec.method`` from ``sample``."""
    m = spec.method
    if m.name == "arci":
        return arci(sample, GaussianArciConfig(alpha=spec.alpha, sigma=m.sigma, mode=m.mode))
    if m.name == "median":
        eps = spec.contamination.eps if m.eps is None else m.eps
        return median_interval(sample, eps, m.sigma)
    if m.name == "conservative":
        return conservative_interval(sample, default_R(m, sample.n, spec.alpha))
    if m.name == "arci-general":
        return arci_general(sample, spec.contamination.family, spec.alpha, m.eps_max)
    unit = sample.scaled(1.0 / m.sigma) if m.sigma != 1.0 else sample
    cs = confidence_set(unit, spec.alpha, modified=m.name == "list-modified")
    if m.sigma != 1.0:
        cs = type(cs)(tuple((a * m.sigma, b * m.sigma) for a, b in cs.intervals),
                      tuple(c * m.sigma for c in cs.candidates), cs.base, cs.diagnostics)
    return cs


# ---------------------------------------------------------------------------------------------
# Replicates and reports
# ---------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class ReplicateResult:
    index: int
    seed: int
    covered: bool
    length: float
    empty: bool
    components: tuple
    list_hit: bool | None = None

    @property
    def sketch(self) -> str:
        h = hashlib.blake2b(digest_size=8)
        h.update(struct.pack("<QQ?", self.index, self.seed, self.covered))
        for a, b in self.components:
            h.update(struct.pack("<dd", a, b))
        return h.hexdigest()


def run_replicate(spec: ExperimentSpec, index: int) -> ReplicateResult:
    seed = replicate_seed(spec.master_seed, index)
    theta = spec.contamination.theta
    sample = generate_contaminated(spec.contamination, spec.n, seed)
    out = apply_method(spec, sample)
    if isinstance(out, Interval):
        comps = () if out.empty else ((out.lower, out.upper),)
        return ReplicateResult(index, seed, out.contains(theta), out.length, out.empty, comps)
    hit = any(abs(c - theta) <= HALF_WIDTH * spec.method.sigma for c in out.candidates)
    return ReplicateResult(index, seed, out.contains(theta), out.volume, out.empty, out.intervals, hit)


def _run_chunk(args) -> list[ReplicateResult]:
    spec, lo, hi = args
    return [run_replicate(spec, i) for i in range(lo, hi)]


def worker_count(requested: int | None = None) -> int:
    """Workers to use: ``requested`` capped by ``HUBERBAND_THREADS`` (all cores when unset)."""
    cap = os.cpu_count() or 1
    env = os.environ.get(THREADS_ENV)
    if env is not None and env.strip():
        try:
            cap = int(env)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {env!r}") from None
        if cap < 1:
            raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
    return max(1, min(cap, requested if requested is not None else cap))


def _json_float(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    x = float(x)
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")


@dataclass(frozen=True)
class SimulationReport:
    spec: ExperimentSpec
    coverage: float
    mc_se: float
    length_mean: float
    length_median: float
    length_q05: float
    length_q95: float
    empty_fraction: float
    list_hit_fraction: float | None
    sketches: tuple
    records: tuple = field(repr=False, compare=False, default=())

    @property
    def lengths(self) -> np.ndarray:
        return np.array([r.length for r in self.records])

    def fraction_shorter(self, bound: float) -> float:
        """Fraction of replicates whose length (0 for empty intervals) is at most ``bound``."""
        return float(np.mean(self.lengths <= bound))

    @property
    def digest(self) -> str:
        return hashlib.blake2b("".join(self.sketches).encode(), digest_size=16).hexdigest()

    def to_dict(self) -> dict:
        d = {
            "schema": SCHEMA_VERSION,
            "spec": self.spec.to_dict(),
            "coverage": self.coverage,
            "mc_se": self.mc_se,
            "length_mean": self.length_mean,
            "length_median": self.length_median,
            "length_q05": self.length_q05,
            "length_q95": self.length_q95,
            "empty_fraction": self.empty_fraction,
            "list_hit_fraction": self.list_hit_fraction,
            "digest": self.digest,
            "replicate_sketches": list(self.sketches),
        }
        if self.spec.replicates == 1 and self.records:
            d["interval"] = [list(c) for c in self.records[0].components]
        return {k: _json_float(v) if not isinstance(v, (dict, list)) else v for k, v in d.items()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def to_csv_row(self) -> dict:
        d = self.to_dict()
        return {k: d[k] for k in ("coverage", "mc_se", "length_mean", "length_median", "length_q05",
                                  "length_q95", "empty_fraction", "list_hit_fraction", "digest")}


def summarize(spec: ExperimentSpec, records: list[ReplicateResult]) -> SimulationReport:
    k = len(records)
    covered = np.array([r.covered for r in records], dtype=float)
    lengths = np.array([r.length for r in records], dtype=float)
    cov = float(covered.mean())
    with np.errstate(invalid="ignore"):
        q05, q95 = np.quantile(lengths, [0.05, 0.95], method="inverted_cdf")
        med = float(np.median(lengths))
        mean = float(lengths.mean())
    hits = [r.list_hit for r in records if r.list_hit is not None]
    return SimulationReport(
        spec=spec, coverage=cov, mc_se=math.sqrt(cov * (1.0 - cov) / k), length_mean=mean,
        length_median=med, length_q05=float(q05), length_q95=float(q95),
        empty_fraction=float(np.mean([r.empty for r in records])),
        list_hit_fraction=float(np.mean(hits)) if hits else None,
        sketches=tuple(r.sketch for r in records), records=tuple(records),
    )


def run_coverage_experiment(spec: ExperimentSpec, workers: int | None = None) -> SimulationReport:
    """Run every replicate and summarise; the result does not depend on ``workers``."""
    w = worker_count(workers)
    R = spec.replicates
    if w == 1 or R < 2:
        records = _run_chunk((spec, 0, R))
    else:
        chunk = max(1, -(-R // (4 * w)))
        jobs = [(spec, lo, min(lo + chunk, R)) for lo in range(0, R, chunk)]
        with ProcessPoolExecutor(max_workers=w) as pool:
            records = [rec for part in pool.map(_run_chunk, jobs) for rec in part]
    return summarize(spec, records)


__all__ = [
    "PointMass", "GaussianAt", "AdversaryRef", "ContaminationSpec", "parse_q", "generate_contaminated",
    "MethodSpec", "ExperimentSpec", "ReplicateResult", "SimulationReport", "run_coverage_experiment",
    "run_replicate", "replicate_seed", "apply_method", "worker_count", "METHODS", "SCHEMA_VERSION",
]

"""Command line interface: ``huberband {ci,simulate,adversary,rates,list}``.

Exit status is 0 on success, 2 for usage or configuration errors and 3 when a construction
fails (for example a separation beyond the admissible range).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .adversarial import AdversaryKind, build_adversary
from .distributions import parse_family
from .empirical import read_sample
from .errors import ConfigError, ConstructionError, DomainError, HuberbandError
from .gaussian_arci import GaussianArciConfig, arci
from .general_arci import arci_general, rate_quantities, theoretical_rate
from .harness import ContaminationSpec, ExperimentSpec, MethodSpec, run_coverage_experiment
from .list_decodable import confidence_set

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONSTRUCTION = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors already; keep that but route through main."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else "-inf" if x < 0 else "nan"
    return x


def _emit(obj: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n")
        return
    rows = obj if isinstance(obj, list) else [_flatten(obj)]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: _jsonable(v) for k, v in row.items()})
    out.write(buf.getvalue())


def _flatten(d: dict, prefix: str = "") -> dict:
    flat = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            flat[key] = json.dumps(_jsonable(v))
        else:
            flat[key] = v
    return flat


def _grid(text: str, cast=float) -> list:
    try:
        return [cast(float(p)) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse grid {text!r}") from None


# ---------------------------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------------------------


def _cmd_ci(a, out) -> int:
    sample = read_sample(a.input)
    fam = parse_family(a.family)
    if fam.spec == "gaussian":
        iv = arci(sample, GaussianArciConfig(alpha=a.alpha, sigma=a.sigma, mode=a.mode))
    else:
        iv = arci_general(sample.scaled(1.0 / a.sigma), fam, a.alpha, a.eps_max)
        iv = type(iv)(iv.lower * a.sigma, iv.upper * a.sigma, iv.diagnostics)
    _emit(iv.to_dict(), a.out, out)
    return EXIT_OK


def _cmd_simulate(a, out) -> int:
    cont = ContaminationSpec(a.family, a.theta, a.eps, a.q, a.sigma)
    method = MethodSpec(a.method, mode=a.mode, sigma=a.sigma, eps=a.method_eps, R=a.R,
                        eps_max=a.eps_max)
    spec = ExperimentSpec(cont, method, a.n, a.reps, a.alpha, a.seed)
    report = run_coverage_experiment(spec, a.threads)
    if a.out == "json":
        out.write(report.to_json())
    else:
        _emit(report.to_csv_row(), "csv", out)
    return EXIT_OK


def _cmd_adversary(a, out) -> int:
    kind = AdversaryKind.parse(a.kind)
    family = a.family or ("laplace" if kind is AdversaryKind.LAPLACE_EXACT else "gaussian")
    r = "auto" if a.r == "auto" else _grid(a.r)[0]
    pair = build_adversary(kind, family, r, eps=a.eps, eps_max=a.eps_max, alpha=a.alpha, n=a.n,
                           sigma=a.sigma)
    cert = pair.certificate()
    if a.sample_out:
        for side, path in (("null", a.sample_out + ".q0.txt"), ("alt", a.sample_out + ".q1.txt")):
            draws = pair.sample_q(side, a.sample_size, a.seed + (side == "alt"))
            with open(path, "w", encoding="utf-8") as fh:
                fh.writelines(f"{float(v)!r}\n" for v in draws.values)
        cert["samples"] = [a.sample_out + ".q0.txt", a.sample_out + ".q1.txt"]
    _emit(cert, a.out, out)
    return EXIT_OK


def _cmd_rates(a, out) -> int:
    fam = parse_family(a.family)
    rows = []
    for n in _grid(a.n_grid, int):
        for eps in _grid(a.eps_grid):
            rq = rate_quantities(fam, eps, n, a.alpha, a.eps_max)
            rows.append(rq.as_row(theoretical_rate(fam, n, eps)))
    if not rows:
        raise ConfigError("empty n or eps grid")
    if a.out == "json":
        _emit({"rows": rows}, "json", out)
    else:
        _emit(rows, "csv", out)
    return EXIT_OK


def _cmd_list(a, out) -> int:
    sample = read_sample(a.input)
    cs = confidence_set(sample.scaled(1.0 / a.sigma), a.alpha, modified=a.modified)
    d = cs.to_dict()
    if a.sigma != 1.0:
        d["components"] = [[l * a.sigma, u * a.sigma] for l, u in d["components"]]
        d["list"] = [c * a.sigma for c in d["list"]]
        d["volume"] *= a.sigma
    _emit(d, a.out, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="huberband", description="Adaptive robust confidence intervals under Huber contamination.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt="json"):
        sp.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        sp.add_argument("--out", choices=("json", "csv"), default=fmt, help=f"output format (default {fmt})")
        sp.add_argument("--alpha", type=float, default=0.05, help="miscoverage level (default 0.05)")

    ci = sub.add_parser("ci", help="adaptive interval for a data file")
    common(ci)
    ci.add_argument("input", help="newline-separated floats or a single-column CSV")
    ci.add_argument("--sigma", type=float, default=1.0, help="known scale of the clean part (default 1)")
    ci.add_argument("--mode", default="std", help="std, large049 or small:<eps_max>")
    ci.add_argument("--family", default="gaussian", help="shape family, e.g. gaussian, laplace, gengauss:1.5")
    ci.add_argument("--eps-max", type=float, default=0.05, help="contamination bound for non-Gaussian families")
    ci.set_defaults(func=_cmd_ci)

    sim = sub.add_parser("simulate", help="Monte Carlo coverage and length experiment")
    common(sim)
    sim.add_argument("--method", default="arci", help="arci, arci-general, median, conservative, list, list-modified")
    sim.add_argument("--family", default="gaussian", help="shape family of the clean part")
    sim.add_argument("--eps", type=float, default=0.0, help="true contamination proportion")
    sim.add_argument("--q", default="point:10", help="point:<x>, gauss:<mu>[,<sd>] or adversary:<kind>[:k=v,...]")
    sim.add_argument("--n", type=int, default=1000, help="sample size")
    sim.add_argument("--reps", type=int, default=100, help="number of replicates")
    sim.add_argument("--theta", type=float, default=0.0, help="true location")
    sim.add_argument("--sigma", type=float, default=1.0, help="scale of the clean part")
    sim.add_argument("--mode", default="std", help="std, large049 or small:<eps_max>")
    sim.add_argument("--eps-max", type=float, default=0.05, help="contamination bound for arci-general")
    sim.add_argument("--method-eps", type=float, default=None, help="eps handed to the median method")
    sim.add_argument("--R", type=float, default=None, help="half-width of the conservative method")
    sim.add_argument("--threads", type=int, default=None, help="worker processes (capped by HUBERBAND_THREADS)")
    sim.set_defaults(func=_cmd_simulate)

    adv = sub.add_parser("adversary", help="build and certify a least-favourable pair")
    common(adv)
    adv.add_argument("--kind", required=True, help=", ".join(k.value for k in AdversaryKind))
    adv.add_argument("--family", default=None, help="shape family (default depends on the kind)")
    adv.add_argument("--r", default="auto", help="separation or 'auto' (0.999 of the largest valid)")
    adv.add_argument("--eps", type=float, default=0.0, help="contamination of the alternative")
    adv.add_argument("--eps-max", type=float, default=0.05, help="contamination of the null")
    adv.add_argument("--n", type=int, default=1000, help="sample size setting the truncation level")
    adv.add_argument("--sigma", type=float, default=1.0, help="scale of the clean part")
    adv.add_argument("--sample-out", default=None, help="write q0/q1 draws to <prefix>.q0.txt and <prefix>.q1.txt")
    adv.add_argument("--sample-size", type=int, default=1000, help="draws written per file")
    adv.set_defaults(func=_cmd_adversary)

    rates = sub.add_parser("rates", help="separation quantities and rate shapes for a family")
    common(rates, fmt="csv")
    rates.add_argument("--family", default="gaussian", help="shape family")
    rates.add_argument("--eps-max", type=float, default=0.05, help="contamination bound")
    rates.add_argument("--n-grid", default="1000,10000,100000", help="comma-separated sample sizes")
    rates.add_argument("--eps-grid", default="0,0.0001,0.01", help="comma-separated contamination levels")
    rates.set_defaults(func=_cmd_rates)

    lst = sub.add_parser("list", help="list-based confidence set for heavily contaminated data")
    common(lst)
    lst.add_argument("input", help="newline-separated floats or a single-column CSV")
    lst.add_argument("--modified", action="store_true", help="return the wide interval alone when it is short")
    lst.add_argument("--sigma", type=float, default=1.0, help="known scale of the clean part (default 1)")
    lst.set_defaults(func=_cmd_list)
    return p


def main(argv=None) -> int:
    out = sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    except ConstructionError as exc:
        print(f"huberband: construction error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except (ConfigError, DomainError, HuberbandError, OSError) as exc:
        print(f"huberband: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Command-line experiment runner.

Subcommands: catalog, norms, dims, sequence-fit, spectrum, dixmier, rhs,
verify-all.  Each run validates its configuration against a JSON schema,
executes the pipeline, and writes a JSON report (plus CSV spectra and PNG
figures where the pipeline produces curves).  Exit code 0 means every
check in the report passed.

Worker count for Monte-Carlo evaluation comes from HARDYTRACE_WORKERS.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

import jsonschema

from . import catalog as cat
from .checks import ALL_CHECKS, run_all
from .conical import (ConicalContext, conical_norm_sq, graded_dimension,
                      rep_dimension)
from .errors import ParameterDomainError
from .geometry import poisson_hat_symbol, trace_formula_rhs, trace_formula_rhs_exact
from .models import build_ball_model, build_rank_one_model, toeplitz_matrix
from .partitions import Partition, enumerate_partitions
from .report import (RunReport, emit_report, render_decay_figure,
                     render_logmean_figure, render_residual_figure,
                     write_values_csv)
from .seqclass import fit_asymptotics, norm_ratio_samples
from .spectral import dixmier_estimate, macaev_diagnostic, singular_values
from .symbols import SymbolPolynomial

PIPELINES = ("catalog", "norms", "dims", "sequence-fit", "spectrum",
             "dixmier", "rhs", "verify-all")

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["pipeline"],
    "properties": {
        "pipeline": {"enum": list(PIPELINES)},
        "domain": {"type": "string"},
        "model": {"type": "string"},
        "truncation": {"type": "integer", "minimum": 0},
        "max_weight": {"type": "integer", "minimum": 0},
        "max_level": {"type": "integer", "minimum": 0},
        "alpha": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "gamma": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "k": {"type": "integer", "minimum": 0},
        "window": {"type": "array", "items": {"type": "integer", "minimum": 1},
                   "minItems": 2, "maxItems": 2},
        "symbol": {"type": "array"},
        "pairs": {"type": "array"},
        "samples": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "exact": {"type": "boolean"},
        "commutator": {"type": "boolean"},
        "signed": {"type": "boolean"},
        "macaev_n": {"type": "integer", "minimum": 1},
        "tolerance": {"type": "number"},
        "checks": {"type": "array", "items": {"enum": list(ALL_CHECKS)}},
        "out": {"type": "string"},
        "format": {"enum": ["json", "csv", "markdown"]},
        "plots": {"type": "boolean"},
        "dump_matrix": {"type": "boolean"},
    },
    "allOf": [
        {"if": {"properties": {"pipeline": {"const": "rhs"},
                               "exact": {"const": False}},
                "required": ["pipeline"]},
         "then": {"required": ["seed", "samples"]}},
    ],
}


class ConfigError(ValueError):
    pass


def validate_config(config: dict) -> None:
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = []
        for err in errors:
            pointer = "/" + "/".join(str(p) for p in err.absolute_path)
            msgs.append(f"{pointer or '/'}: {err.message}")
        raise ConfigError("; ".join(msgs))


def parse_domain(spec: str) -> cat.DomainDescriptor:
    """Parse 'ball:2', 'I:2,3', 'III:2', 'V', ... into a descriptor."""
    if ":" in spec:
        fam, _, arg = spec.partition(":")
        params = tuple(int(x) for x in arg.split(","))
    else:
        fam, params = spec, ()
    return cat.descriptor_for(fam, *params)


def parse_model(spec: str, truncation: int):
    kind, _, arg = spec.partition(":")
    params = tuple(int(x) for x in arg.split(",")) if arg else ()
    if kind == "ball":
        return build_ball_model(params[0], truncation)
    if kind in ("rank-one", "rankone"):
        return build_rank_one_model(params[0], params[1], truncation)
    raise ParameterDomainError(f"unknown model kind {kind!r}")


def _parse_coeff(c):
    if isinstance(c, bool):
        raise ConfigError("boolean is not a coefficient")
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, float):
        return complex(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, list) and len(c) == 2:
        return complex(float(c[0]), float(c[1]))
    raise ConfigError(f"cannot parse coefficient {c!r}")


def parse_symbol(terms: list, nvars: int) -> SymbolPolynomial:
    """Term list [{'coeff': 1, 'hol': [...], 'anti': [...]}, ...]."""
    out = SymbolPolynomial.zero(nvars)
    for t in terms:
        hol = t.get("hol", [0] * nvars)
        anti = t.get("anti", [0] * nvars)
        if len(hol) != nvars or len(anti) != nvars:
            raise ConfigError(f"term exponents must have length {nvars}")
        out += SymbolPolynomial.monomial(nvars, hol, anti, _parse_coeff(t.get("coeff", 1)))
    return out


def _ambient_dim(desc: cat.DomainDescriptor) -> int:
    return desc.d


# -- pipelines ----------------------------------------------------------------


def _pipe_catalog(config, report: RunReport, out: Path, plots: bool):
    report.data["table"] = cat.catalog_table()


def _pipe_norms(config, report, out, plots):
    desc = parse_domain(config.get("domain", "I:2,2"))
    ctx = ConicalContext(desc)
    rows = []
    for w in range(config.get("max_weight", 4) + 1):
        for lam in enumerate_partitions(desc.r, w):
            rows.append({"partition": list(lam.parts),
                         "norm_sq": conical_norm_sq(ctx, lam),
                         "dimension": rep_dimension(ctx, lam)})
    report.data["domain"] = desc.label()
    report.data["rows"] = rows


def _pipe_dims(config, report, out, plots):
    desc = parse_domain(config.get("domain", "I:2,2"))
    ctx = ConicalContext(desc)
    rows = [{"level": m, "dimension": graded_dimension(ctx, m)}
            for m in range(config.get("max_level", 12) + 1)]
    report.data["domain"] = desc.label()
    report.data["rows"] = rows


def _pipe_sequence_fit(config, report, out, plots):
    desc = parse_domain(config.get("domain", "I:2,2"))
    ctx = ConicalContext(desc)
    alpha = Partition(config.get("alpha", []))
    gamma = Partition(config.get("gamma", []))
    k = config.get("k", 1)
    window = tuple(config.get("window", (10, 10_000)))
    samples = norm_ratio_samples(ctx, alpha, gamma, k, window)
    fit = fit_asymptotics(samples, window)
    report.data["fit"] = {"c0": float(fit.c0), "c1": float(fit.c1),
                          "remainder_bound": fit.remainder_bound,
                          "window": list(fit.window),
                          "positive": fit.positive,
                          "decade_sups": fit.decade_sups,
                          "in_class_s_plus": fit.in_class_s_plus()}
    report.checks.append({"name": "class-s-plus-membership",
                          "passed": fit.in_class_s_plus(),
                          "computed": fit.decade_sups,
                          "reference": "bounded decade sups, c0 > 0",
                          "tolerance": "growth factor 4"})
    if plots:
        fig = render_residual_figure(samples, fit, out / "sequence_residuals.png")
        report.artifacts.append(str(fig))


def _symbol_pairs(config, desc):
    pairs = config.get("pairs")
    if not pairs:
        raise ConfigError("/pairs: pipeline needs symbol pairs")
    d = _ambient_dim(desc)
    return [(parse_symbol(f, d), parse_symbol(g, d)) for f, g in pairs]


def _model_for_domain(desc, truncation):
    if desc.family == "ball" or desc.r == 1:
        return build_ball_model(desc.d, truncation)
    if desc.family == "I":
        return build_rank_one_model(*desc.params, truncation)
    raise ParameterDomainError(f"no operator model for {desc.label()}")


def _pipe_spectrum(config, report, out, plots):
    desc = parse_domain(config.get("domain", "ball:2"))
    truncation = config.get("truncation", 12)
    basis = _model_for_domain(desc, truncation)
    f = parse_symbol(config.get("symbol", []), _ambient_dim(desc))
    f_hat = poisson_hat_symbol(f, desc)
    op = toeplitz_matrix(basis, f_hat)
    if config.get("commutator"):
        op = op.commutator(op.adjoint())
    rep = singular_values(op, signed=config.get("signed", False))
    report.data["valid_count"] = rep.valid_count
    report.data["macaev"] = macaev_diagnostic(rep, config.get("macaev_n", desc.n))
    csv_path = write_values_csv(rep.values[:rep.valid_count],
                                out / "singular_values.csv", "singular_value")
    report.artifacts.append(str(csv_path))
    if config.get("dump_matrix"):
        import numpy as np
        dense = op.to_orthonormal_dense()
        mpath = out / "matrix.csv"
        np.savetxt(mpath, dense.real if dense.dtype != complex else dense.view(float),
                   delimiter=",")
        report.artifacts.append(str(mpath))
    if plots:
        fig = render_decay_figure(rep.values, out / "spectrum_decay.png",
                                  "singular value decay",
                                  reference_slope=-1.0 / config.get("macaev_n", desc.n))
        report.artifacts.append(str(fig))


def _pipe_dixmier(config, report, out, plots):
    desc = parse_domain(config.get("domain", "ball:2"))
    truncation = config.get("truncation", 100)
    basis = _model_for_domain(desc, truncation)
    prod = None
    for f, g in _symbol_pairs(config, desc):
        tf = toeplitz_matrix(basis, poisson_hat_symbol(f, desc))
        tg = toeplitz_matrix(basis, poisson_hat_symbol(g, desc))
        comm = tf.commutator(tg)
        prod = comm if prod is None else prod @ comm
    herm = Fraction(1, 2) * (prod + prod.adjoint())
    rep = singular_values(herm, signed=True)
    est = dixmier_estimate(rep)
    report.data["dixmier"] = est
    report.data["valid_count"] = rep.valid_count
    vals = rep.signed_or_absolute()
    csv_path = write_values_csv(vals[:rep.valid_count], out / "eigenvalues.csv",
                                "eigenvalue")
    report.artifacts.append(str(csv_path))
    if plots:
        fig = render_logmean_figure(est["fit_curve"], est["limit"],
                                    out / "dixmier_logmeans.png")
        report.artifacts.append(str(fig))


def _pipe_rhs(config, report, out, plots):
    desc = parse_domain(config.get("domain", "ball:2"))
    fs, gs = zip(*_symbol_pairs(config, desc))
    if config.get("exact"):
        res = trace_formula_rhs_exact(list(fs), list(gs), desc)
    else:
        workers = int(os.environ.get("HARDYTRACE_WORKERS", "1"))
        res = trace_formula_rhs(list(fs), list(gs), desc,
                            count=config["samples"], seed=config["seed"],
                            workers=workers)
    report.data["rhs"] = {k: (str(v) if isinstance(v, Fraction) else v)
                          for k, v in res.items()}


def _pipe_verify_all(config, report, out, plots):
    names = config.get("checks") or list(ALL_CHECKS)
    results = run_all(names)
    for res in results:
        report.checks.append(res.as_row())
        report.timings[res.name] = round(res.seconds, 3)
    if plots:
        for res in results:
            curve = (res.details or {}).get("fit_curve")
            if curve:
                fig = render_logmean_figure(curve, res.computed
                                            if isinstance(res.computed, float) else 0.0,
                                            out / f"{res.name}_logmeans.png")
                report.artifacts.append(str(fig))


_PIPELINE_FNS = {
    "catalog": _pipe_catalog,
    "norms": _pipe_norms,
    "dims": _pipe_dims,
    "sequence-fit": _pipe_sequence_fit,
    "spectrum": _pipe_spectrum,
    "dixmier": _pipe_dixmier,
    "rhs": _pipe_rhs,
    "verify-all": _pipe_verify_all,
}


def run_experiment(config: dict) -> RunReport:
    """Validate the config, execute its pipeline and return the report."""
    validate_config(config)
    pipeline = config["pipeline"]
    out = Path(config.get("out", "reports"))
    out.mkdir(parents=True, exist_ok=True)
    report = RunReport(pipeline=pipeline, config=config)
    t0 = time.perf_counter()
    _PIPELINE_FNS[pipeline](config, report, out, config.get("plots", True))
    report.timings["total"] = round(time.perf_counter() - t0, 3)
    emit_report(report, out, config.get("format", "json"))
    return report


# -- argument parsing ----------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=str, help="JSON config file; flags override it")
    p.add_argument("--out", type=str, help="output directory (default: reports)")
    p.add_argument("--format", choices=["json", "csv", "markdown"], dest="fmt")
    p.add_argument("--seed", type=int)
    p.add_argument("--no-plots", action="store_true", help="skip figure rendering")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hardytrace",
                                 description="Hardy-space Toeplitz models and "
                                             "Dixmier-trace diagnostics")
    sub = ap.add_subparsers(dest="pipeline", required=True)

    p = sub.add_parser("catalog", help="print the domain catalog as JSON")
    _add_common(p)

    p = sub.add_parser("norms", help="conical norm / dimension table")
    p.add_argument("--domain", default="I:2,2")
    p.add_argument("--max-weight", type=int, default=4)
    _add_common(p)

    p = sub.add_parser("dims", help="graded dimension table")
    p.add_argument("--domain", default="I:2,2")
    p.add_argument("--max-level", type=int, default=12)
    _add_common(p)

    p = sub.add_parser("sequence-fit", help="norm-ratio asymptotic fit")
    p.add_argument("--domain", default="I:2,2")
    p.add_argument("--alpha", type=int, nargs="*", default=[])
    p.add_argument("--gamma", type=int, nargs="*", default=[])
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--window", type=int, nargs=2, default=[10, 10_000])
    _add_common(p)

    p = sub.add_parser("spectrum", help="singular values of a Toeplitz model")
    p.add_argument("--domain", default="ball:2")
    p.add_argument("--truncation", type=int, default=12)
    p.add_argument("--symbol", type=str, required=False,
                   help="JSON term list for the symbol")
    p.add_argument("--commutator", action="store_true",
                   help="use the commutator with the adjoint")
    p.add_argument("--signed", action="store_true")
    p.add_argument("--macaev-n", type=int, dest="macaev_n")
    p.add_argument("--dump-matrix", action="store_true")
    _add_common(p)

    p = sub.add_parser("dixmier", help="log-mean trace of a commutator product")
    p.add_argument("--domain", default="ball:2")
    p.add_argument("--truncation", type=int, default=100)
    p.add_argument("--pairs", type=str, required=False, help="JSON pair list")
    _add_common(p)

    p = sub.add_parser("rhs", help="geometric side of the trace formula")
    p.add_argument("--domain", default="ball:2")
    p.add_argument("--pairs", type=str, required=False)
    p.add_argument("--samples", type=int)
    p.add_argument("--exact", action="store_true")
    _add_common(p)

    p = sub.add_parser("verify-all", help="run the acceptance checks")
    p.add_argument("--checks", type=str, help="comma-separated check names")
    _add_common(p)
    return ap


def _config_from_args(args: argparse.Namespace) -> dict:
    config: dict = {}
    if args.config:
        config.update(json.loads(Path(args.config).read_text()))
    config["pipeline"] = args.pipeline
    mapping = {"out": "out", "fmt": "format", "seed": "seed",
               "domain": "domain", "max_weight": "max_weight",
               "max_level": "max_level", "alpha": "alpha", "gamma": "gamma",
               "k": "k", "window": "window", "truncation": "truncation",
               "samples": "samples", "macaev_n": "macaev_n"}
    for attr, key in mapping.items():
        val = getattr(args, attr, None)
        if val is not None:
            config[key] = val
    for flag in ("commutator", "signed", "exact", "dump_matrix"):
        if getattr(args, flag, False):
            config[flag] = True
    if getattr(args, "no_plots", False):
        config["plots"] = False
    for jsonflag in ("symbol", "pairs"):
        raw = getattr(args, jsonflag, None)
        if isinstance(raw, str):
            config[jsonflag] = json.loads(raw)
    checks = getattr(args, "checks", None)
    if isinstance(checks, str):
        config["checks"] = checks.split(",")
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        report = run_experiment(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ParameterDomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for row in report.checks:
        status = "pass" if row.get("passed") else "FAIL"
        print(f"[{status}] {row.get('name')}")
    if report.pipeline == "catalog":
        print(json.dumps(report.data["table"], indent=2, default=str))
    elif "rhs" in report.data:
        print(json.dumps(report.data["rhs"], indent=2, default=str))
    elif "dixmier" in report.data:
        print(json.dumps(report.data["dixmier"], indent=2, default=str))
    elif "fit" in report.data:
        print(json.dumps(report.data["fit"], indent=2, default=str))
    print(f"report: {Path(config.get('out', 'reports')) / 'report.json'}")
    return 0 if report.all_passed() else 1


if __name__ == "__main__":
    sys.exit(main())

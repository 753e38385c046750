"""Run reports: JSON / CSV / markdown serialization and figure rendering.

Reports are deterministic given the payload (keys sorted, fractions
rendered as strings); timestamps and timings live in dedicated fields so
that reruns with the same config differ only there.  Figures are rendered
to PNG files next to the delimited output.
"""

from __future__ import annotations

import csv
import datetime
import json
import platform
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def environment_fingerprint() -> dict:
    import numpy
    return {
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "matplotlib": matplotlib.__version__,
        "machine": platform.machine(),
        "system": platform.system(),
    }


@dataclass
class RunReport:
    """Outcome of one pipeline run: config echo, per-check rows, artifacts."""

    pipeline: str
    config: dict
    checks: list[dict] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    artifacts: list[str] = field(default_factory=list)
    environment: dict = field(default_factory=environment_fingerprint)
    timings: dict = field(default_factory=dict)
    generated_at: str = ""

    def all_passed(self) -> bool:
        return all(c.get("passed", True) for c in self.checks)

    def payload(self) -> dict:
        return {
            "pipeline": self.pipeline,
            "config": self.config,
            "checks": self.checks,
            "data": self.data,
            "artifacts": self.artifacts,
            "environment": self.environment,
            "timings": self.timings,
            "generated_at": self.generated_at,
        }


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return obj


def emit_report(report: RunReport, out_dir: str | Path, fmt: str = "json",
                stem: str = "report") -> list[Path]:
    """Serialize the report; returns the written paths.

    JSON is always written (it is the canonical artifact); ``fmt`` may add
    a CSV check table or a markdown summary.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report.generated_at = report.generated_at or \
        datetime.datetime.now(datetime.timezone.utc).isoformat()
    paths = []
    payload = _jsonable(report.payload())
    jpath = out / f"{stem}.json"
    jpath.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    paths.append(jpath)
    if fmt == "csv":
        cpath = out / f"{stem}.csv"
        with cpath.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["name", "passed", "computed", "reference", "tolerance", "seconds"])
            for c in report.checks:
                writer.writerow([c.get("name"), c.get("passed"),
                                 json.dumps(_jsonable(c.get("computed"))),
                                 json.dumps(_jsonable(c.get("reference"))),
                                 c.get("tolerance"), c.get("seconds")])
        paths.append(cpath)
    elif fmt == "markdown":
        mpath = out / f"{stem}.md"
        lines = [f"# {report.pipeline} report", "",
                 "| check | passed | computed | reference | tolerance |",
                 "|---|---|---|---|---|"]
        for c in report.checks:
            lines.append("| {} | {} | {} | {} | {} |".format(
                c.get("name"), c.get("passed"),
                json.dumps(_jsonable(c.get("computed"))),
                json.dumps(_jsonable(c.get("reference"))), c.get("tolerance")))
        if not report.checks:
            lines.append("| (none) | | | | |")
        mpath.write_text("\n".join(lines) + "\n")
        paths.append(mpath)
    report.artifacts = sorted(set(report.artifacts) | {str(p) for p in paths})
    return paths


def write_values_csv(values, path: str | Path, header: str = "value") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", header])
        for i, v in enumerate(values, start=1):
            writer.writerow([i, repr(float(v))])
    return path


def _new_axes(title: str, xlabel: str, ylabel: str):
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, which="both", alpha=0.3)
    return fig, ax


def render_decay_figure(values, path: str | Path, title: str = "singular values",
                        reference_slope: float | None = None) -> Path:
    """Log-log decay plot of a descending value sequence."""
    import numpy as np
    path = Path(path)
    vals = np.asarray([v for v in values if v > 0], dtype=float)
    j = np.arange(1, len(vals) + 1)
    fig, ax = _new_axes(title, "index j", "value")
    ax.loglog(j, vals, lw=1.0)
    if reference_slope is not None and len(vals) > 1:
        ref = vals[0] * (j / 1.0) ** reference_slope
        ax.loglog(j, ref, "--", lw=0.8, label=f"slope {reference_slope:+.3f}")
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def render_logmean_figure(fit_curve, limit: float, path: str | Path,
                          title: str = "logarithmic means") -> Path:
    """Log-mean convergence plot with the extrapolated limit."""
    import numpy as np
    path = Path(path)
    ns = np.array([n for n, _ in fit_curve], dtype=float)
    ys = np.array([y for _, y in fit_curve])
    fig, ax = _new_axes(title, "1 / log N", "Lambda_N")
    ax.plot(1.0 / np.log(ns), ys, "o-", lw=1.0)
    ax.axhline(limit, ls="--", lw=0.8, color="k", label=f"extrapolated {limit:.5g}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def render_residual_figure(samples: dict, fit, path: str | Path,
                           title: str = "scaled residuals") -> Path:
    """m^2 |omega_m| of a sequence fit across its window."""
    path = Path(path)
    ms = sorted(samples)
    resid = [float(abs(samples[m] - fit.predict(m))) * m * m for m in ms]
    fig, ax = _new_axes(title, "m", "m^2 |omega_m|")
    ax.semilogx(ms, resid, "o-", lw=0.9, ms=3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path

"""Region-stratified evaluation: RMSE tables, t-tests, and plot exports."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import betainc

from .pairs import REGIONS, RegionPartition, STRPair, assign_region


@dataclass(frozen=True)
class Prediction:
    pair: STRPair
    predicted: float
    actual: float

    @property
    def abs_error(self) -> float:
        return abs(self.predicted - self.actual)

    @property
    def signed_error(self) -> float:
        return self.predicted - self.actual

    def region(self, partition: RegionPartition = RegionPartition()) -> str:
        return assign_region(self.actual, partition)


@dataclass(frozen=True)
class TTestResult:
    t_value: float
    p_value: float
    dof: float
    kind: str  # "paired" | "welch"
    n_a: int
    n_b: int


def rmse(predictions: list[Prediction]) -> float:
    if not predictions:
        raise ValueError("rmse of empty prediction list")
    errs = np.array([p.predicted - p.actual for p in predictions], dtype=np.float64)
    return float(math.sqrt(np.mean(errs * errs)))


def rmse_by_region(predictions: list[Prediction],
                   partition: RegionPartition = RegionPartition()) -> dict[str, tuple[float | None, int]]:
    if not predictions:
        raise ValueError("no predictions")
    out: dict[str, tuple[float | None, int]] = {}
    for region in REGIONS:
        subset = [p for p in predictions if p.region(partition) == region]
        out[region] = (rmse(subset) if subset else None, len(subset))
    return out


def student_t_cdf(t: float, dof: float) -> float:
    """CDF of Student's t via the regularized incomplete beta function."""
    if dof <= 0:
        raise ValueError("dof must be > 0")
    if t == 0.0:
        return 0.5
    x = dof / (dof + t * t)
    tail = 0.5 * float(betainc(dof / 2.0, 0.5, x))
    return 1.0 - tail if t > 0 else tail


def _two_sided_p(t: float, dof: float) -> float:
    return 2.0 * student_t_cdf(-abs(t), dof)


def welch_t(a, b) -> TTestResult:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if len(a) < 2 or len(b) < 2:
        raise ValueError("each sample needs >= 2 observations")
    va = a.var(ddof=1) / len(a)
    vb = b.var(ddof=1) / len(b)
    if va + vb == 0.0:
        raise ValueError("degenerate variance: both samples are constant")
    t = (a.mean() - b.mean()) / math.sqrt(va + vb)
    dof = (va + vb) ** 2 / (va ** 2 / (len(a) - 1) + vb ** 2 / (len(b) - 1))
    return TTestResult(t_value=float(t), p_value=_two_sided_p(t, dof), dof=float(dof),
                       kind="welch", n_a=len(a), n_b=len(b))


def paired_t(a, b) -> TTestResult:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("paired test requires equal-length samples")
    n = len(a)
    if n < 2:
        raise ValueError("need >= 2 pairs")
    d = a - b
    sd = d.std(ddof=1)
    if sd == 0.0:
        raise ValueError("zero variance of differences")
    t = d.mean() / (sd / math.sqrt(n))
    return TTestResult(t_value=float(t), p_value=_two_sided_p(t, n - 1), dof=float(n - 1),
                       kind="paired", n_a=n, n_b=n)


def five_number(values) -> tuple[float, float, float, float, float]:
    v = np.asarray(values, dtype=np.float64)
    q1, med, q3 = np.percentile(v, [25, 50, 75])
    return (float(v.min()), float(q1), float(med), float(q3), float(v.max()))


@dataclass
class EvalReport:
    model: str
    global_rmse: float
    regions: dict[str, dict] = field(default_factory=dict)  # rmse, count, five-number
    ttests: list[dict] = field(default_factory=list)


_COMPARISONS = (("Low", "Medium"), ("Medium", "High"), ("Low", "High"))


def build_report(predictions: list[Prediction], partition: RegionPartition = RegionPartition(),
                 model: str = "model") -> EvalReport:
    if not predictions:
        raise ValueError("no predictions")
    by_region = {r: [p for p in predictions if p.region(partition) == r] for r in REGIONS}
    regions = {}
    for r in REGIONS:
        subset = by_region[r]
        entry: dict = {"count": len(subset)}
        if subset:
            entry["rmse"] = rmse(subset)
            entry["error_quartiles"] = list(five_number([p.signed_error for p in subset]))
        regions[r] = entry
    report = EvalReport(model=model, global_rmse=rmse(predictions), regions=regions)
    for ra, rb in _COMPARISONS:
        ea = [p.abs_error for p in by_region[ra]]
        eb = [p.abs_error for p in by_region[rb]]
        entry = {"comparison": f"{ra} vs {rb}"}
        if len(ea) >= 2 and len(eb) >= 2:
            try:
                if len(ea) == len(eb):
                    res = paired_t(ea, eb)
                else:
                    res = welch_t(ea, eb)
                entry.update(kind=res.kind, t=res.t_value, p=res.p_value, dof=res.dof,
                             significant=res.p_value < 0.05)
            except ValueError as exc:
                entry["error"] = str(exc)
        else:
            entry["error"] = "insufficient samples"
        report.ttests.append(entry)
    return report


def export_report(report: EvalReport, out_dir: str | Path) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "model": report.model,
        "global_rmse": report.global_rmse,
        "regions": report.regions,
        "ttests": report.ttests,
    }
    (out_dir / "eval_report.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    with (out_dir / "rmse_by_region.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["model", "global", "low", "medium", "high"])
        row = [report.model, f"{report.global_rmse:.6f}"]
        for r in REGIONS:
            v = report.regions[r].get("rmse")
            row.append(f"{v:.6f}" if v is not None else "")
        writer.writerow(row)

    with (out_dir / "ttests.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["model", "comparison", "t", "p"])
        for entry in report.ttests:
            if "t" in entry:
                writer.writerow([report.model, entry["comparison"],
                                 f"{entry['t']:.2f}", f"{entry['p']:.2f}"])
            else:
                writer.writerow([report.model, entry["comparison"], "", ""])


def export_boxplot_data(report: EvalReport, out_dir: str | Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"boxplot_{report.model}.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["region", "min", "q1", "median", "q3", "max"])
        for r in REGIONS:
            q = report.regions[r].get("error_quartiles")
            if q:
                writer.writerow([r] + [f"{v:.6f}" for v in q])
    return path


def export_heatmap_data(reports: list[EvalReport], out_dir: str | Path) -> Path:
    """Model x region-comparison matrix of t-values with significance flags."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "heatmap.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["model"] + [f"{a} vs {b}" for a, b in _COMPARISONS]
                        + [f"sig:{a} vs {b}" for a, b in _COMPARISONS])
        for report in reports:
            by_cmp = {e["comparison"]: e for e in report.ttests}
            tvals, sigs = [], []
            for a, b in _COMPARISONS:
                e = by_cmp.get(f"{a} vs {b}", {})
                tvals.append(f"{e['t']:.2f}" if "t" in e else "")
                sigs.append("1" if e.get("significant") else "0")
            writer.writerow([report.model] + tvals + sigs)
    return path


def load_report(path: str | Path) -> EvalReport:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return EvalReport(model=payload["model"], global_rmse=payload["global_rmse"],
                      regions=payload["regions"], ttests=payload["ttests"])

import csv
import io
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from statistics import mean
from typing import Dict, List, Optional, Sequence, Union

from ftbfs.sdk.builder import build_ft_mbfs, structure_stats
from ftbfs.sdk.config import calibration_value
from ftbfs.sdk.graph import FailureMode, GraphModel, gen_graph

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["n", "trial", "seed", "m", "edges", "bound", "ratio", "withinGuard"]


@dataclass(frozen=True)
class ScaleRow:
    n: int
    trial: int
    seed: int
    m: int
    edges: int
    bound: float
    ratio: float
    withinGuard: bool


@dataclass
class ScaleTable:
    k: int
    sigma: int
    model: str
    guard: float
    rows: List[ScaleRow] = field(default_factory=list)

    def per_n(self) -> Dict[int, dict]:
        out = {}
        for n in sorted({r.n for r in self.rows}):
            ratios = [r.ratio for r in self.rows if r.n == n]
            out[n] = {"meanRatio": round(mean(ratios), 6), "maxRatio": round(max(ratios), 6)}
        return out

    @property
    def monotone_growth(self) -> bool:
        """True when the mean ratio strictly increases at every step of n."""
        means = [v["meanRatio"] for v in self.per_n().values()]
        return len(means) > 1 and all(a < b for a, b in zip(means, means[1:]))

    def to_dict(self) -> dict:
        return {
            "k": self.k, "sigma": self.sigma, "model": self.model, "guard": self.guard,
            "rows": [_row_json(r) for r in self.rows],
            "summary": {str(n): v for n, v in self.per_n().items()},
            "monotoneGrowth": self.monotone_growth,
            "withinGuard": all(r.withinGuard for r in self.rows),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in self.rows: writer.writerow(_row_json(r))
        return buf.getvalue()


def _row_json(r: ScaleRow) -> dict:
    d = asdict(r)
    d["bound"] = round(r.bound, 6)
    d["ratio"] = round(r.ratio, 6)
    return d


def auto_probability(n: int) -> float:
    factor = float(calibration_value("scale.connectivity_factor"))
    if n < 2: return 1.0
    return min(1.0, factor * math.log(n) / n)


def run_scale(sizes: Sequence[int], trials: int, k: int = 2, sigma: int = 1,
              model: GraphModel = GraphModel.GNP, p: Union[float, str, None] = "auto",
              mode: FailureMode = FailureMode.EDGE, seed: int = 0,
              workers: Optional[int] = None) -> ScaleTable:
    """Builds one structure per (n, trial) and records |E(H)| against the size bound."""
    sizes = list(sizes)
    if not sizes or sizes != sorted(sizes) or len(set(sizes)) != len(sizes):
        raise ValueError(f"sizes must be a strictly ascending list, got {sizes}")
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    if sigma < 1 or sigma > sizes[0]:
        raise ValueError(f"sigma must lie in [1, {sizes[0]}], got {sigma}")
    model = GraphModel(model)
    guard = float(calibration_value("ratio_guard.ft_bfs" if sigma == 1 else "ratio_guard.ft_mbfs"))
    table = ScaleTable(k, sigma, model.value, guard)
    for n in sizes:
        for trial in range(trials):
            trial_seed = seed + trial
            if model == GraphModel.GNP:
                prob = auto_probability(n) if p in (None, "auto") else float(p)
                g = gen_graph(model, n, prob, trial_seed)
            else:
                g = gen_graph(model, n, seed=trial_seed)
            st = build_ft_mbfs(g, list(range(sigma)), k, mode, workers)
            report = structure_stats(st)
            table.rows.append(ScaleRow(n, trial, trial_seed, g.m, report.edges, report.bound,
                                       report.ratio, report.ratio <= guard))
            logger.info(f"n={n} trial={trial}: |E(H)|={report.edges} ratio={report.ratio:.4f}")
    return table


def write_scale_csv(table: ScaleTable, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(table.to_csv())
    return path

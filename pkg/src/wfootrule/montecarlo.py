"""Monte Carlo replication of the finite-sample study.

Replication ``r`` of a scenario draws from ``stream(seed, scenario_id, r)``,
so results do not depend on the number of workers, and growing ``B`` leaves
earlier replications untouched.
"""

from __future__ import annotations

import csv
import io
import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.stats import rankdata

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .copulas import Copula, Gaussian, parse_copula
from .estimation import RankedSample, footrule_hat, phi_hat
from .sampling import DEFAULT_SEED, sample, stream
from .truth import TrueValues, true_values

__all__ = [
    "ESTIMATORS",
    "Scenario",
    "Summary",
    "McResult",
    "ScenarioError",
    "run_scenario",
    "run_table",
    "render_table",
    "bias_decay_report",
    "load_manifest",
    "CSV_COLUMNS",
]

ESTIMATORS = ("phi", "footrule", "gini")
CSV_COLUMNS = [
    "family", "param", "n", "truth_phi", "truth_footrule",
    "mean_phi", "bias_phi", "sd_phi",
    "mean_footrule", "bias_footrule", "sd_footrule",
    "seed", "B", "status",
]


class ScenarioError(RuntimeError):
    def __init__(self, message, replication):
        super().__init__(message)
        self.replication = replication


@dataclass(frozen=True)
class Scenario:
    copula: Copula
    n: int
    B: int
    seed: int = DEFAULT_SEED
    estimators: tuple[str, ...] = ("phi", "footrule")

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.B < 1:
            raise ValueError(f"B must be >= 1, got {self.B}")
        unknown = set(self.estimators) - set(ESTIMATORS)
        if unknown:
            raise ValueError(f"unknown estimators {sorted(unknown)}")

    @property
    def scenario_id(self) -> int:
        return zlib.crc32(f"{self.copula}|{self.n}".encode())


class Summary(NamedTuple):
    mean: float
    bias: float
    sd: float


@dataclass
class McResult:
    scenario: Scenario
    truth: TrueValues
    summary: dict[str, Summary] = field(default_factory=dict)
    estimates: dict[str, np.ndarray] = field(default_factory=dict)
    wall_time: float = 0.0
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _replicate(copula, n, seed, sid, start, stop, estimators):
    out = np.empty((stop - start, len(estimators)))
    for i, r in enumerate(range(start, stop)):
        try:
            batch = sample(copula, n, stream(seed, sid, r))
            rs = RankedSample(rankdata(batch.u), rankdata(batch.v))
            phi = phi_hat(rs)
            foot = footrule_hat(rs)
        except Exception as exc:  # noqa: BLE001 - re-raised with the replication index
            raise ScenarioError(f"replication {r} failed: {exc}", r) from exc
        values = {"phi": phi, "footrule": foot, "gini": 2.0 / 3.0 * (phi + foot)}
        out[i] = [values[e] for e in estimators]
    return out


def _truth_of(truth: TrueValues, name: str) -> float:
    return {"phi": truth.phi_w, "footrule": truth.footrule, "gini": truth.gini}[name]


def run_scenario(s: Scenario, jobs: int = 1, executor=None) -> McResult:
    """Run all replications of ``s`` and summarise each estimator."""
    t0 = time.perf_counter()
    truth = true_values(s.copula)
    args = (s.copula, s.n, s.seed, s.scenario_id)
    if jobs <= 1 and executor is None:
        block = _replicate(*args, 0, s.B, s.estimators)
    else:
        chunks = max(1, min(s.B, 4 * max(jobs, 1)))
        edges = np.linspace(0, s.B, chunks + 1).astype(int)
        own = executor is None
        pool = executor or ProcessPoolExecutor(max_workers=jobs)
        try:
            futures = [pool.submit(_replicate, *args, int(a), int(b), s.estimators)
                       for a, b in zip(edges[:-1], edges[1:]) if b > a]
            block = np.concatenate([f.result() for f in futures])
        finally:
            if own:
                pool.shutdown()
    result = McResult(s, truth)
    for k, name in enumerate(s.estimators):
        x = block[:, k]
        # Two-pass moments about the first replicate: exact for constant estimators.
        d = x - x[0]
        mean = float(x[0] + np.mean(d))
        sd = float(np.std(d, ddof=1)) if len(x) > 1 else 0.0
        result.summary[name] = Summary(mean, mean - _truth_of(truth, name), sd)
        result.estimates[name] = x
    result.wall_time = time.perf_counter() - t0
    return result


def run_table(scenarios, jobs: int = 1) -> list[McResult]:
    """Run scenarios in order; failures yield results with ``error`` set."""
    results = []
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for s in scenarios:
            try:
                results.append(run_scenario(s, jobs, executor=pool))
            except ScenarioError as exc:
                results.append(McResult(s, true_values(s.copula), error=str(exc)))
    finally:
        if pool is not None:
            pool.shutdown()
    return results


def _family_label(c: Copula) -> tuple[str, str]:
    if isinstance(c, Gaussian):
        return "Gaussian", f"rho={c.rho:g}"
    if c.param is not None and type(c).__name__ in ("Clayton", "Gumbel", "Frank"):
        return type(c).__name__, f"theta={c.param:g}"
    return str(c), ""


def _fmt(x: float, digits: int) -> str:
    text = f"{x:.{digits}f}"
    return "0." + "0" * digits if float(text) == 0.0 else text


def _fmt_bias(x: float, digits: int) -> str:
    text = f"{x:+.{digits}f}"
    return "0." + "0" * digits if float(text) == 0.0 else text


def _rows(results, digits):
    for res in results:
        s = res.scenario
        c = s.copula
        row = {
            "family": c.family if c.param is not None else str(c),
            "param": "" if c.param is None else f"{c.param:g}",
            "label": _family_label(c),
            "n": s.n,
            "truth_phi": _fmt(res.truth.phi_w, digits),
            "truth_footrule": _fmt(res.truth.footrule, digits),
            "seed": s.seed, "B": s.B,
            "status": "ok" if res.ok else f"FAILED: {res.error}",
        }
        for name in ("phi", "footrule"):
            st = res.summary.get(name)
            row[f"mean_{name}"] = _fmt(st.mean, digits) if st else ""
            row[f"bias_{name}"] = _fmt_bias(st.bias, digits) if st else ""
            row[f"sd_{name}"] = _fmt(st.sd, digits) if st else ""
        yield row


def render_table(results, fmt: str = "md", digits: int = 5) -> str:
    """Render results as CSV (``fmt="csv"``) or an aligned Markdown table."""
    rows = list(_rows(results, digits))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n",
                                extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    if fmt != "md":
        raise ValueError(f"unknown format {fmt!r}")
    header = ["Copula", "Param.", "n", "Phi_C", "phi_C",
              "Phi_n mean", "Phi_n bias", "Phi_n SD",
              "phi_n mean", "phi_n bias", "phi_n SD"]
    keys = ["n", "truth_phi", "truth_footrule",
            "mean_phi", "bias_phi", "sd_phi", "mean_footrule", "bias_footrule", "sd_footrule"]
    body = [[*r["label"], *(str(r[k]) for k in keys)] for r in rows]
    for r, line in zip(rows, body):
        if r["status"] != "ok":
            line[5] = r["status"]
    widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h)
              for i, h in enumerate(header)]

    def fmt_line(cells):
        padded = [c.ljust(w) if i < 2 else c.rjust(w) for i, (c, w) in enumerate(zip(cells, widths))]
        return "| " + " | ".join(padded) + " |"

    sep = "|" + "|".join(
        ("-" * (w + 2)) if i < 2 else ("-" * (w + 1) + ":") for i, w in enumerate(widths)) + "|"
    return "\n".join([fmt_line(header), sep, *(fmt_line(b) for b in body)]) + "\n"


def bias_decay_report(results) -> list[dict]:
    """Ratios of |bias| and SD between consecutive sample sizes per copula.

    An O(1/n) bias halves from n=100 to n=200; an O(n^-1/2) SD shrinks by
    about 0.71.
    """
    groups: dict[str, list[McResult]] = {}
    for res in results:
        if res.ok:
            groups.setdefault(str(res.scenario.copula), []).append(res)
    report = []
    for key, items in groups.items():
        items.sort(key=lambda r: r.scenario.n)
        for a, b in zip(items[:-1], items[1:]):
            for name in a.summary.keys() & b.summary.keys():
                sa, sb = a.summary[name], b.summary[name]
                report.append({
                    "copula": key,
                    "estimator": name,
                    "n_from": a.scenario.n,
                    "n_to": b.scenario.n,
                    "bias_ratio": _ratio(sb.bias, sa.bias),
                    "sd_ratio": _ratio(sb.sd, sa.sd),
                })
    return report


def _ratio(num, den):
    if num == den:
        return 1.0
    return num / den if den != 0 else math.nan


def load_manifest(path: str | Path | None = None, scale: float = 1.0,
                  seed: int | None = None) -> list[Scenario]:
    """Read a TOML manifest; ``None`` loads the bundled 30-scenario grid.

    Each ``[[scenario]]`` block has ``family``, optional ``param``, ``n``
    (an integer or a list) and ``B``. ``scale`` multiplies every ``B``.
    """
    if path is None:
        text = resources.files("wfootrule").joinpath("data/grid.toml").read_text()
    else:
        text = Path(path).read_text()
    data = tomllib.loads(text)
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    base_seed = int(data.get("seed", DEFAULT_SEED) if seed is None else seed)
    scenarios = []
    for i, block in enumerate(data.get("scenario", [])):
        missing = {"family", "n", "B"} - block.keys()
        if missing:
            raise ValueError(f"scenario block {i} is missing keys {sorted(missing)}")
        family = str(block["family"])
        spec = family if "param" not in block else f"{family}:{block['param']}"
        copula = parse_copula(spec)
        sizes = block["n"] if isinstance(block["n"], list) else [block["n"]]
        reps = max(1, int(round(block["B"] * scale)))
        for n in sizes:
            scenarios.append(Scenario(copula, int(n), reps, base_seed))
    return scenarios

"""Experiment orchestration: multi-restart comparisons of the two ansatz
families, component analysis, negativity correlation, scalability sweeps,
and deterministic CSV/SVG artifact emission.

Directory layout per experiment:
  out/<experiment>/{runs.csv, aggregate.csv, summary.json, *.svg,
                    graphs/*.edgelist}
"""

from __future__ import annotations

import concurrent.futures
import json
import math
import os
import statistics
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.stats

from . import svgplot
from .ansatz import HqwParams, variant_params_from_hqw
from .errors import ParameterError
from .graphs import max_cut_value, mis_optimum, random_connected_graph, save_edgelist
from .hamiltonian import maxcut_hamiltonian, mis_hamiltonian, mixer_hamiltonian, jordan_negativity
from .optimizer import (
    OptimizerConfig,
    TIE_TOL,
    aggregate,
    classify_pair,
    final_amplitudes,
    objective_value,
    optimize_run,
    relative_improvement,
)
from .simulator import StateVector, eigenspace_projections

RUNS_HEADER = "graph_id,algo,restart,seed,final_energy,one_minus_r,n_steps,n_params"
AGG_HEADER = "graph_id,algo,mean_gap,best_gap,std_gap,n_restarts"


@dataclass(frozen=True)
class BenchmarkConfig:
    problem: str = "maxcut"
    n: int = 8
    m_min: int = 18
    m_max: int = 23
    count: int = 10
    qaoa_depth: int = 2
    hqw_steps: int = None  # defaults to 2 * qaoa_depth (fairness rule)
    optimizer: OptimizerConfig = field(default_factory=lambda: OptimizerConfig(restarts=20))
    out_dir: str = "out"
    emit_traces: bool = False
    tie_tol: float = TIE_TOL
    threads: int = 1

    def __post_init__(self):
        if self.problem not in ("maxcut", "mis"):
            raise ParameterError("problem must be 'maxcut' or 'mis'")
        if self.hqw_steps is None:
            object.__setattr__(self, "hqw_steps", 2 * self.qaoa_depth)


@dataclass
class BenchmarkTable:
    rows: list
    summary: dict
    records: list = field(default_factory=list)


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return f"{x:.17g}"


def _run_one(args):
    return optimize_run(*args)


def _run_restarts(cfg: BenchmarkConfig, tasks):
    """Execute optimization tasks (serially or in a process pool) with a
    deterministic merge order."""
    if cfg.threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.threads) as ex:
            return list(ex.map(_run_one, tasks, chunksize=1))
    return [_run_one(t) for t in tasks]


def _problem_setup(cfg: BenchmarkConfig, graph):
    if cfg.problem == "maxcut":
        diag, _ = maxcut_hamiltonian(graph)
        return diag.energies, max_cut_value(graph)
    diag = mis_hamiltonian(graph, 1.0)
    return diag.energies, None


def _generate_graphs(cfg: BenchmarkConfig):
    graphs = []
    for gid in range(cfg.count):
        graphs.append(
            random_connected_graph(
                cfg.n, cfg.m_min, cfg.m_max, cfg.optimizer.base_seed * 1000003 + gid
            )
        )
    return graphs


def _write(path, text):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)


def _records_csv(records) -> str:
    lines = [RUNS_HEADER]
    for r in records:
        lines.append(
            f"{r.graph_id},{r.algo},{r.restart},{r.seed},"
            f"{_fmt(r.final_energy)},{_fmt(r.one_minus_r)},{r.n_steps},{r.n_params}"
        )
    return "\n".join(lines) + "\n"


def _aggregate_csv(rows) -> str:
    lines = [AGG_HEADER]
    for row in rows:
        for algo in ("qaoa", "hqw"):
            lines.append(
                f"{row['graph_id']},{algo},{_fmt(row[f'mean_{algo}'])},"
                f"{_fmt(row[f'best_{algo}'])},{_fmt(row[f'std_{algo}'])},{row['n_restarts']}"
            )
    return "\n".join(lines) + "\n"


def _parse_aggregate_csv(text):
    """Plot inputs round-trip through the emitted CSV."""
    rows = {}
    for line in text.strip().splitlines()[1:]:
        gid, algo, mean_gap, best_gap, std_gap, n = line.split(",")
        rows.setdefault(int(gid), {})[algo] = (
            float(mean_gap),
            float(best_gap),
            float(std_gap),
        )
    return rows


def run_pair_comparison(cfg: BenchmarkConfig, graphs=None, experiment="maxcut"):
    """Run both algorithms on every graph of the class and aggregate.

    Max-Cut aggregates the gap metric 1-r; independent-set runs aggregate
    the raw objective energy (the gap metric does not apply there).
    """
    if graphs is None:
        graphs = _generate_graphs(cfg)
    out = os.path.join(cfg.out_dir, experiment)
    os.makedirs(os.path.join(out, "graphs"), exist_ok=True)
    for gid, g in enumerate(graphs):
        save_edgelist(g, os.path.join(out, "graphs", f"graph_{gid:03d}.edgelist"))

    all_records = []
    rows = []
    for gid, g in enumerate(graphs):
        energies, optimum = _problem_setup(cfg, g)
        row = {"graph_id": gid, "n_edges": g.n_edges, "n_restarts": cfg.optimizer.restarts}
        for algo, depth in (("qaoa", cfg.qaoa_depth), ("hqw", cfg.hqw_steps)):
            tasks = [
                (
                    algo,
                    cfg.problem,
                    energies,
                    cfg.n,
                    depth,
                    cfg.optimizer,
                    gid,
                    r,
                    optimum,
                    10,
                    cfg.emit_traces,
                )
                for r in range(cfg.optimizer.restarts)
            ]
            records = _run_restarts(cfg, tasks)
            all_records.extend(records)
            metric = [
                r.one_minus_r if cfg.problem == "maxcut" else r.final_energy
                for r in records
            ]
            best_metric = [
                1.0 - (-r.best_energy) / optimum if cfg.problem == "maxcut" else r.best_energy
                for r in records
            ]
            mean, best, std = aggregate(metric)
            row[f"mean_{algo}"] = mean
            row[f"best_{algo}"] = min(best, min(best_metric))
            row[f"std_{algo}"] = std
        row["winner"] = classify_pair(row["mean_qaoa"], row["mean_hqw"], cfg.tie_tol)
        row["rel_improvement_pct"] = relative_improvement(row["mean_qaoa"], row["mean_hqw"])
        rows.append(row)

    improvements = [
        r["rel_improvement_pct"] for r in rows if r["rel_improvement_pct"] is not None
    ]
    wins_hqw = sum(1 for r in rows if r["winner"] == "hqw")
    wins_qaoa = sum(1 for r in rows if r["winner"] == "qaoa")
    ties = sum(1 for r in rows if r["winner"] == "tie")
    summary = {
        "avg_gap_qaoa": float(np.mean([r["mean_qaoa"] for r in rows])),
        "avg_gap_hqw": float(np.mean([r["mean_hqw"] for r in rows])),
        "wins_qaoa": wins_qaoa,
        "wins_hqw": wins_hqw,
        "ties": ties,
        "win_rate_hqw": wins_hqw / len(rows),
        "mean_rel_improvement_pct": float(np.mean(improvements)) if improvements else None,
        "median_rel_improvement_pct": (
            float(statistics.median(improvements)) if improvements else None
        ),
    }

    runs_csv = _records_csv(all_records)
    agg_csv = _aggregate_csv(rows)
    _write(os.path.join(out, "runs.csv"), runs_csv)
    _write(os.path.join(out, "aggregate.csv"), agg_csv)
    _write(os.path.join(out, "summary.json"), json.dumps(summary, indent=2) + "\n")

    parsed = _parse_aggregate_csv(agg_csv)
    qs = [parsed[g]["qaoa"][0] for g in sorted(parsed)]
    hs = [parsed[g]["hqw"][0] for g in sorted(parsed)]
    log_axes = cfg.problem == "maxcut"
    _write(
        os.path.join(out, "scatter_mean.svg"),
        svgplot.scatter_svg(
            hs, qs,
            "Per-graph mean metric: walk ansatz vs baseline",
            "HQW", "QAOA", log=log_axes, diagonal=True,
        ),
    )
    if improvements:
        _write(
            os.path.join(out, "improvement_hist.svg"),
            svgplot.histogram_svg(
                improvements, "Relative improvement distribution", "improvement [%]"
            ),
        )
    return BenchmarkTable(rows, summary, all_records)


def run_maxcut_benchmark(cfg: BenchmarkConfig, graphs=None, experiment="maxcut"):
    if cfg.problem != "maxcut":
        raise ParameterError("config problem must be maxcut")
    return run_pair_comparison(cfg, graphs, experiment)


def run_mis_benchmark(cfg: BenchmarkConfig, graphs=None, experiment="mis"):
    if cfg.problem != "mis":
        raise ParameterError("config problem must be mis")
    return run_pair_comparison(cfg, graphs, experiment)


# ---------------------------------------------------------------------------
# component analysis

def run_component_analysis(cfg: BenchmarkConfig, depths, graph=None, experiment="components"):
    """Four-way comparison per depth: optimized baseline, optimized walk,
    and the two interleaving variants evaluated (not re-optimized) at the
    walk's per-step angles.  Records mean/std energies and the projection
    probabilities onto the 4 lowest analysis eigenspaces."""
    if any(not 1 <= p <= 10 for p in depths):
        raise ParameterError("depths must lie in [1, 10]")
    if graph is None:
        graph = random_connected_graph(cfg.n, cfg.m_min, cfg.m_max, cfg.optimizer.base_seed + 77)
    out = os.path.join(cfg.out_dir, experiment)
    os.makedirs(os.path.join(out, "graphs"), exist_ok=True)
    save_edgelist(graph, os.path.join(out, "graphs", "graph_000.edgelist"))
    energies, optimum = _problem_setup(cfg, graph)
    sign = -1.0 if cfg.problem == "maxcut" else 1.0
    analysis = sign * energies  # lowest eigenspaces of the analysis operator
    n_distinct = len(np.unique(analysis))
    k_proj = min(4, n_distinct)

    algos = ["qaoa", "hqw", "variant1", "variant2"]
    table = []
    for p in depths:
        energies_by_algo = {a: [] for a in algos}
        proj_by_algo = {a: [] for a in algos}

        def record_state(algo, kind, params):
            amp = final_amplitudes(kind, params, energies, cfg.n)
            sv = StateVector(amp, cfg.n, len(amp) == 2 * len(energies))
            proj_by_algo[algo].append(
                [pr for _, pr in eigenspace_projections(sv, analysis, k_proj)]
            )

        tasks = [
            ("qaoa", cfg.problem, energies, cfg.n, p, cfg.optimizer, 0, r, optimum, 10, False)
            for r in range(cfg.optimizer.restarts)
        ]
        for rec in _run_restarts(cfg, tasks):
            energies_by_algo["qaoa"].append(rec.final_energy)
            record_state("qaoa", "qaoa", rec.final_params)

        tasks = [
            ("hqw", cfg.problem, energies, cfg.n, 2 * p, cfg.optimizer, 0, r, optimum, 10, False)
            for r in range(cfg.optimizer.restarts)
        ]
        for rec in _run_restarts(cfg, tasks):
            energies_by_algo["hqw"].append(rec.final_energy)
            record_state("hqw", "hqw", rec.final_params)
            hp = HqwParams.from_flat(rec.final_params)
            for algo, parity in (("variant1", "odd"), ("variant2", "even")):
                vp = variant_params_from_hqw(hp, parity).flat()
                energies_by_algo[algo].append(
                    objective_value("qaoa", vp, energies, cfg.n, sign)
                )
                record_state(algo, "qaoa", vp)

        row = {"depth": p}
        for a in algos:
            vals = np.asarray(energies_by_algo[a])
            row[f"mean_{a}"] = float(vals.mean())
            row[f"std_{a}"] = float(vals.std(ddof=1)) if len(vals) > 1 else 0.0
            projs = np.asarray(proj_by_algo[a]).mean(axis=0)
            for j in range(k_proj):
                row[f"proj{j + 1}_{a}"] = float(projs[j])
        table.append(row)

    cols = ["depth"]
    for a in algos:
        cols += [f"mean_{a}", f"std_{a}"] + [f"proj{j + 1}_{a}" for j in range(k_proj)]
    lines = [",".join(cols)]
    for row in table:
        lines.append(",".join(_fmt(row[c]) if c != "depth" else str(row[c]) for c in cols))
    csv_text = "\n".join(lines) + "\n"
    _write(os.path.join(out, "components.csv"), csv_text)

    parsed = [dict(zip(cols, line.split(","))) for line in csv_text.strip().splitlines()[1:]]
    xs = [int(r["depth"]) for r in parsed]
    ground = float((sign * energies).min())
    series = [
        (a, [float(r[f"mean_{a}"]) for r in parsed], [float(r[f"std_{a}"]) for r in parsed])
        for a in algos
    ]
    _write(
        os.path.join(out, "energy_vs_depth.svg"),
        svgplot.lines_svg(xs, series, "Mean final energy vs depth", "depth p", "objective", hline=ground),
    )
    proj_series = [(a, [float(r[f"proj1_{a}"]) for r in parsed], None) for a in algos]
    _write(
        os.path.join(out, "ground_projection.svg"),
        svgplot.lines_svg(xs, proj_series, "Ground-eigenspace probability vs depth", "depth p", "probability"),
    )
    return table


# ---------------------------------------------------------------------------
# negativity correlation

def pearson_and_fit(xs, ys):
    """Sample Pearson correlation and least-squares line; p-value via the
    t distribution when at least 5 points are available."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) < 2:
        raise ParameterError("need at least two points")
    if np.var(xs) == 0:
        raise ParameterError("degenerate: zero variance in x")
    if np.var(ys) == 0:
        raise ParameterError("degenerate: zero variance in y")
    r = float(np.corrcoef(xs, ys)[0, 1])
    slope, intercept = (float(v) for v in np.polyfit(xs, ys, 1))
    p_value = None
    if len(xs) >= 5 and abs(r) < 1.0:
        t = r * math.sqrt((len(xs) - 2) / (1 - r * r))
        p_value = float(2 * scipy.stats.t.sf(abs(t), len(xs) - 2))
    return r, slope, intercept, p_value


def run_negativity_correlation(cfg: BenchmarkConfig, instance_count: int, experiment="correlation"):
    """Per instance: incompatibility measure |N_min| of the problem/mixer
    pair vs the mean-gap relative improvement of the walk ansatz."""
    if instance_count < 10:
        raise ParameterError("need at least 10 instances")
    out = os.path.join(cfg.out_dir, experiment)
    os.makedirs(os.path.join(out, "graphs"), exist_ok=True)
    # spread edge counts so the incompatibility measure actually varies
    m_lo = max(cfg.n, 10)
    m_hi = cfg.n * (cfg.n - 1) // 2
    m_values = np.linspace(m_lo, m_hi, instance_count).round().astype(int)

    pairs = []
    excluded = []
    rows = []
    for gid, m in enumerate(m_values):
        g = random_connected_graph(cfg.n, int(m), int(m), cfg.optimizer.base_seed * 7919 + gid)
        save_edgelist(g, os.path.join(out, "graphs", f"graph_{gid:03d}.edgelist"))
        _, hc_pauli = maxcut_hamiltonian(g)
        # spectral normalization: the Frobenius variant is dominated by the
        # identity component of the cut operator at this size and barely
        # varies across instances, hiding the incompatibility signal
        n_min = jordan_negativity(hc_pauli, mixer_hamiltonian(cfg.n), norm="spectral")
        energies, optimum = _problem_setup(replace(cfg, problem="maxcut"), g)
        gaps = {}
        for algo, depth in (("qaoa", cfg.qaoa_depth), ("hqw", cfg.hqw_steps)):
            tasks = [
                (algo, "maxcut", energies, cfg.n, depth, cfg.optimizer, gid, r, optimum, 10, False)
                for r in range(cfg.optimizer.restarts)
            ]
            gaps[algo], _, _ = aggregate([rec.one_minus_r for rec in _run_restarts(cfg, tasks)])
        imp = relative_improvement(gaps["qaoa"], gaps["hqw"])
        row = {
            "graph_id": gid,
            "n_edges": g.n_edges,
            "n_min": n_min,
            "abs_n_min": abs(n_min),
            "gap_qaoa": gaps["qaoa"],
            "gap_hqw": gaps["hqw"],
            "rel_improvement": imp,
        }
        rows.append(row)
        if imp is None:
            excluded.append(gid)
        else:
            pairs.append((abs(n_min), imp / 100.0))

    cols = ["graph_id", "n_edges", "n_min", "abs_n_min", "gap_qaoa", "gap_hqw", "rel_improvement"]
    lines = [",".join(cols)]
    for row in rows:
        lines.append(
            ",".join(
                str(row[c]) if c in ("graph_id", "n_edges") else _fmt(row[c]) for c in cols
            )
        )
    csv_text = "\n".join(lines) + "\n"
    _write(os.path.join(out, "correlation.csv"), csv_text)

    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    r, slope, intercept, p_value = pearson_and_fit(xs, ys)
    result = {
        "n_instances": len(pairs),
        "excluded_ties": excluded,
        "pearson_r": r,
        "slope": slope,
        "intercept": intercept,
        "p_value": p_value,
    }
    _write(os.path.join(out, "fit.json"), json.dumps(result, indent=2) + "\n")

    parsed = [line.split(",") for line in csv_text.strip().splitlines()[1:]]
    px = [float(row[3]) for row in parsed if row[6] != "nan"]
    py = [float(row[6]) / 100.0 for row in parsed if row[6] != "nan"]
    _write(
        os.path.join(out, "correlation.svg"),
        svgplot.scatter_svg(
            px, py, "Incompatibility vs relative improvement",
            "|N_min|", "relative improvement", fit=(slope, intercept),
        ),
    )
    return pairs, r, slope, intercept, p_value, result


# ---------------------------------------------------------------------------
# scalability

def run_scalability(cfg: BenchmarkConfig, depths=(1, 2, 3, 4), graph=None, experiment="scale"):
    """Depth sweep (baseline vs walk only) on a single larger instance,
    annotated with the brute-force ground energy."""
    if graph is None:
        if cfg.problem == "maxcut":
            graph = random_connected_graph(cfg.n, cfg.m_min, cfg.m_max, cfg.optimizer.base_seed + 99)
        else:
            graph = random_connected_graph(cfg.n, cfg.m_min, cfg.m_max, cfg.optimizer.base_seed + 98)
    out = os.path.join(cfg.out_dir, experiment)
    os.makedirs(os.path.join(out, "graphs"), exist_ok=True)
    save_edgelist(graph, os.path.join(out, "graphs", "graph_000.edgelist"))
    energies, optimum = _problem_setup(cfg, graph)
    sign = -1.0 if cfg.problem == "maxcut" else 1.0
    ground = float((sign * energies).min())
    if cfg.problem == "maxcut":
        assert abs(ground + max_cut_value(graph)) < 1e-9
    else:
        assert abs(ground + mis_optimum(graph)) < 1e-9  # penalty 1: ground = -alpha(G)

    table = []
    for p in depths:
        row = {"depth": p, "ground_energy": ground}
        for algo, depth in (("qaoa", p), ("hqw", 2 * p)):
            tasks = [
                (algo, cfg.problem, energies, cfg.n, depth, cfg.optimizer, 0, r, optimum, 10, False)
                for r in range(cfg.optimizer.restarts)
            ]
            recs = _run_restarts(cfg, tasks)
            vals = np.asarray([r.final_energy for r in recs])
            row[f"mean_{algo}"] = float(vals.mean())
            row[f"std_{algo}"] = float(vals.std(ddof=1)) if len(vals) > 1 else 0.0
            row[f"best_{algo}"] = float(vals.min())
        table.append(row)

    cols = ["depth", "ground_energy", "mean_qaoa", "std_qaoa", "best_qaoa", "mean_hqw", "std_hqw", "best_hqw"]
    lines = [",".join(cols)]
    for row in table:
        lines.append(",".join(str(row["depth"]) if c == "depth" else _fmt(row[c]) for c in cols))
    csv_text = "\n".join(lines) + "\n"
    _write(os.path.join(out, "scale.csv"), csv_text)

    parsed = [dict(zip(cols, line.split(","))) for line in csv_text.strip().splitlines()[1:]]
    xs = [int(r["depth"]) for r in parsed]
    series = [
        (a, [float(r[f"mean_{a}"]) for r in parsed], [float(r[f"std_{a}"]) for r in parsed])
        for a in ("qaoa", "hqw")
    ]
    _write(
        os.path.join(out, "convergence.svg"),
        svgplot.lines_svg(xs, series, "Mean final energy vs depth", "depth p", "objective", hline=ground),
    )
    return table

"""Command-line interface: benchmark experiments, algebra reports, the
incompatibility measure, and Pontryagin sweeps.

Exit codes: 0 success, 1 usage error, 2 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import bench
from .algebra import dimension_inequality_report, theorem1_check
from .control import ControlInterval, pmp_sweep, sweep_rows_to_csv
from .errors import (
    CapacityError,
    DimensionMismatchError,
    DomainError,
    ParameterError,
    StructureError,
)
from .graphs import load_edgelist, make_graph, random_connected_graph
from .hamiltonian import jordan_negativity, maxcut_hamiltonian, mixer_hamiltonian
from .optimizer import OptimizerConfig


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="hqwopt", description="Hybrid-quantum-walk variational toolkit")
    p.add_argument("--seed", type=int, default=7, help="base seed for all RNG streams")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--paper-scale", action="store_true", help="full-protocol scale (slow)")
    p.add_argument("--threads", type=int, default=1, help="worker processes for restarts")
    p.add_argument("--config", default=None, help="JSON file overriding config fields")
    sub = p.add_subparsers(dest="command", required=True)

    pb = sub.add_parser("bench", help="benchmark experiments")
    bsub = pb.add_subparsers(dest="experiment", required=True)
    bsub.add_parser("maxcut", help="sparse and dense Max-Cut classes")
    bsub.add_parser("mis", help="independent-set class")
    pc = bsub.add_parser("components", help="depth sweep of the four ansatz variants")
    pc.add_argument("--depths", type=int, nargs="+", default=[1, 2, 3, 4])
    pr = bsub.add_parser("correlation", help="incompatibility vs improvement")
    pr.add_argument("--instances", type=int, default=None)
    ps = bsub.add_parser("scale", help="larger-instance depth sweep")
    ps.add_argument("--problem", choices=["maxcut", "mis"], default="maxcut")
    ps.add_argument("--smoke", action="store_true", help="tiny end-to-end run")

    pa = sub.add_parser("algebra", help="Lie / Jordan-Lie structure report")
    pa.add_argument("--edgelist", default=None, help="graph file (default: single edge)")

    pn = sub.add_parser("negativity", help="Jordan incompatibility of a problem/mixer pair")
    pn.add_argument("--edgelist", default=None)
    pn.add_argument("--n", type=int, default=8)
    pn.add_argument("--edges", type=int, default=18)
    pn.add_argument("--norm", choices=("frobenius", "spectral"), default="frobenius")

    pp = sub.add_parser("pmp", help="Pontryagin sweep along a given schedule")
    pp.add_argument("--schedule", default=None, help="JSON list of {duration, u, axis?}")
    pp.add_argument("--edgelist", default=None, help="graph file (default: single edge)")
    pp.add_argument("--dt", type=float, default=0.01)
    return p


def _load_overrides(path):
    if path is None:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    return data


def _configs(args, overrides, **kw):
    opt_fields = set(OptimizerConfig.__dataclass_fields__)
    opt_kw = {
        "restarts": kw.pop("restarts", 20),
        "steps": kw.pop("steps", 300),
        "base_seed": args.seed,
    }
    opt_kw.update({k: v for k, v in overrides.items() if k in opt_fields})
    opt = OptimizerConfig(**opt_kw)
    cfg_fields = set(bench.BenchmarkConfig.__dataclass_fields__) - {"optimizer"}
    kw.update({k: v for k, v in overrides.items() if k in cfg_fields})
    unknown = set(overrides) - opt_fields - cfg_fields
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return bench.BenchmarkConfig(
        optimizer=opt, out_dir=args.out, threads=args.threads, **kw
    )


def _default_graph(args):
    if args.edgelist:
        return load_edgelist(args.edgelist)
    return make_graph(2, [(0, 1)])


def _cmd_bench(args, overrides):
    if args.experiment == "maxcut":
        count, restarts = (50, 100) if args.paper_scale else (10, 20)
        for name, lo, hi in (("maxcut_sparse", 18, 23), ("maxcut_dense", 24, 28)):
            cfg = _configs(
                args, overrides, problem="maxcut", n=8, m_min=lo, m_max=hi,
                count=count, qaoa_depth=2, restarts=restarts,
            )
            table = bench.run_maxcut_benchmark(cfg, experiment=name)
            print(f"{name}: {json.dumps(table.summary)}")
    elif args.experiment == "mis":
        count, restarts = (50, 100) if args.paper_scale else (10, 20)
        cfg = _configs(
            args, overrides, problem="mis", n=8, m_min=18, m_max=23,
            count=count, qaoa_depth=2, restarts=restarts,
        )
        table = bench.run_mis_benchmark(cfg)
        print(f"mis: {json.dumps(table.summary)}")
    elif args.experiment == "components":
        restarts = 100 if args.paper_scale else 20
        cfg = _configs(
            args, overrides, problem="maxcut", n=8, m_min=18, m_max=23, restarts=restarts
        )
        table = bench.run_component_analysis(cfg, args.depths)
        for row in table:
            print(
                f"p={row['depth']}: "
                + " ".join(f"{a}={row[f'mean_{a}']:.6f}" for a in ("qaoa", "hqw", "variant1", "variant2"))
            )
    elif args.experiment == "correlation":
        instances = args.instances or (19 if args.paper_scale else 12)
        restarts = 100 if args.paper_scale else 20
        cfg = _configs(
            args, overrides, problem="maxcut", n=8, qaoa_depth=2, restarts=restarts
        )
        *_, result = bench.run_negativity_correlation(cfg, instances)
        print(json.dumps(result, indent=2))
    else:  # scale
        if args.smoke:
            cfg = _configs(
                args, overrides, problem="maxcut", n=4, m_min=4, m_max=5,
                restarts=3, steps=60, qaoa_depth=1,
            )
            depths = (1, 2)
        else:
            restarts, steps = (200, 150) if args.paper_scale else (20, 150)
            if args.problem == "maxcut":
                cfg = _configs(
                    args, overrides, problem="maxcut", n=12, m_min=30, m_max=30,
                    restarts=restarts, steps=steps, qaoa_depth=1,
                )
            else:
                cfg = _configs(
                    args, overrides, problem="mis", n=10, m_min=20, m_max=25,
                    restarts=restarts, steps=steps, qaoa_depth=1,
                )
            depths = (1, 2, 3, 4)
        table = bench.run_scalability(cfg, depths=depths)
        for row in table:
            print(
                f"p={row['depth']}: qaoa={row['mean_qaoa']:.6f} hqw={row['mean_hqw']:.6f} "
                f"ground={row['ground_energy']:g}"
            )
    return 0


def _cmd_algebra(args):
    g = _default_graph(args)
    if g.n_vertices > 3:
        raise UsageError("algebra report limited to 3 position qubits")
    _, hc = maxcut_hamiltonian(g)
    hb = mixer_hamiltonian(g.n_vertices)
    report = theorem1_check(hc, hb, g.n_vertices)
    ineq = dimension_inequality_report(hc, hb, g.n_vertices)
    verdict = (
        "strict inequality asserted and holds"
        if ineq["inequality_asserted"] and ineq["strict_inequality"]
        else "recorded only (membership case, no assertion)"
        if not ineq["inequality_asserted"]
        else "VIOLATION"
    )
    payload = {
        "generators": {
            "problem": hc.serialize().splitlines(),
            "mixer": hb.serialize().splitlines(),
        },
        "dims": {k: report[k] for k in ("dim_g_q", "dim_l_q", "dim_k_q", "dim_g_h")},
        "identity_holds": report["identity_holds"],
        "max_membership_residual": report["max_membership_residual"],
        "jordan_element_in_dla": ineq["jordan_is_member"],
        "jordan_projection_residual": ineq["jordan_residual"],
        "four_times_dim_base_algebra": ineq["four_dim_g_q"],
        "strict_inequality": ineq["strict_inequality"],
        "verdict": verdict,
    }
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "algebra.json"), "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(
        f"dims: g_Q={report['dim_g_q']} L_Q={report['dim_l_q']} "
        f"K_Q={report['dim_k_q']} g_H={report['dim_g_h']}"
    )
    print(f"identity 3*L_Q + K_Q = g_H: {report['identity_holds']}")
    print(
        f"symmetrized-product element in base algebra: {ineq['jordan_is_member']} "
        f"(residual {ineq['jordan_residual']:.3e})"
    )
    print(f"dimension comparison: {verdict}")
    if ineq["inequality_asserted"] and not ineq["strict_inequality"]:
        raise StructureError("dimension inequality violated on a non-member instance")
    if not report["identity_holds"]:
        raise StructureError("structure identity violated")
    return 0


def _cmd_negativity(args):
    if args.edgelist:
        g = load_edgelist(args.edgelist)
    else:
        g = random_connected_graph(args.n, args.edges, args.edges, args.seed)
    _, hc = maxcut_hamiltonian(g)
    value = jordan_negativity(hc, mixer_hamiltonian(g.n_vertices), norm=args.norm)
    print(f"n_min = {value:.12f}  |n_min| = {abs(value):.12f}")
    return 0


def _cmd_pmp(args):
    g = _default_graph(args)
    diag, _ = maxcut_hamiltonian(g)
    hc_diag = diag.energies
    n = g.n_vertices
    hb = mixer_hamiltonian(n).to_dense()
    if args.schedule:
        with open(args.schedule) as fh:
            raw = json.load(fh)
    else:
        raw = [
            {"duration": 0.4, "u": 1.0},
            {"duration": 0.4, "u": 0.0, "axis": [1.0, 0.0, 0.0]},
            {"duration": 0.4, "u": 0.5},
        ]
    schedule = [
        ControlInterval(iv["duration"], iv["u"], tuple(iv.get("axis", (1.0, 0.0, 0.0))))
        for iv in raw
    ]
    dim = 2 << n
    psi0 = np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)
    report = pmp_sweep(psi0, schedule, args.dt, hc_diag, hb)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "pmp_trajectory.csv")
    with open(path, "w") as fh:
        fh.write(sweep_rows_to_csv(report["rows"]))
    axes = np.array([[r["nx"], r["ny"], r["nz"]] for r in report["rows"]])
    print(f"objective = {report['objective']:.12f}")
    print(f"overlap drift = {report['overlap_drift']:.3e}")
    print(f"axis std over time = {axes.std(axis=0)}")
    print(f"trajectory written to {path}")
    if report["overlap_drift"] >= 1e-8:
        raise StructureError("adjoint/state overlap drift exceeds tolerance")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        overrides = _load_overrides(args.config)
        if args.command == "bench":
            return _cmd_bench(args, overrides)
        if args.command == "algebra":
            return _cmd_algebra(args)
        if args.command == "negativity":
            return _cmd_negativity(args)
        return _cmd_pmp(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ParameterError, CapacityError, DimensionMismatchError, FileNotFoundError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (StructureError, DomainError, AssertionError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

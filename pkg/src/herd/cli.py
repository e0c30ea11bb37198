"""``herd`` command-line interface."""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from herd import __version__, _accel
from herd import centrality as cent
from herd import dynamics, energy, sim
from herd.errors import InfeasibleError, NotHurwitzError, NumericalError, OutOfRangeError
from herd.graph import EdgeListError, Graph, is_strongly_connected, largest_scc, read_edge_list
from herd.herdability import TIE_BREAK_POLICIES, herding_cover, is_herdable
from herd.structural import driver_node_count
from herd.synthetic import from_spec

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    synthetic: str | None = None
    directed: bool = True
    d: float = 1.0
    measure: str = "hc"
    katz_alpha: float | None = None
    top_fraction: float = 0.10
    tie_break: str = "min_id"
    rank_cutoff: float | None = None
    format: str = "json"
    jobs: int | None = None
    inputs: list = field(default_factory=list)
    node: str | None = None
    tf: float | None = None
    h: float | None = None
    out: str | None = None


def tolerances(config: RunConfig, n: int | None = None) -> dict:
    rank = config.rank_cutoff
    if rank is None and n is not None:
        rank = energy.RANK_EPS_PER_NODE * n
    return {
        "hurwitz": dynamics.HURWITZ_TOL,
        "lyapunov_residual_rel": dynamics.LYAP_RESIDUAL_TOL,
        "rank_eps": rank,
        "phase1": energy.PHASE1_TOL,
        "range": energy.RANGE_TOL,
        "hc_tie_rtol": cent.TIE_RTOL,
        "herding_margin_rel": sim.MARGIN_TOL,
        "energy_ratio_bounds": list(sim.ENERGY_RATIO_BOUNDS),
    }


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="herd", description="Herdability analysis of networked positive systems.")
    parser.add_argument("--version", action="version", version=f"herd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("input", nargs="?", help="edge-list file ('u v [w]' per line)")
        p.add_argument("--synthetic", metavar="SPEC",
                       help="generate instead of reading: erdos:n,p,seed | scalefree:n,m,seed")
        p.add_argument("--undirected", dest="directed", action="store_false")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        return p

    p = common(sub.add_parser("check", help="test input connectability for given input nodes"))
    p.add_argument("--inputs", required=True, help="comma-separated node labels")
    p = common(sub.add_parser("cover", help="minimal herding-node set"))
    p.add_argument("--tie-break", choices=TIE_BREAK_POLICIES, default="min_id")
    for name in ("centrality", "classic", "compare"):
        p = common(sub.add_parser(name, help=f"{name} report"))
        p.add_argument("--d", type=float, default=1.0)
        p.add_argument("--measure", default="hc", choices=("hc",) + cent.MEASURES)
        p.add_argument("--katz-alpha", type=float)
        p.add_argument("--top-fraction", type=float, default=0.10)
        p.add_argument("--rank-cutoff", type=float)
        p.add_argument("--jobs", type=int)
    common(sub.add_parser("drivers", help="driver-node count from maximum matching"))
    p = common(sub.add_parser("simulate", help="simulate minimum-energy herding from one node"))
    p.add_argument("--node", required=True)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--tf", default="auto")
    p.add_argument("--h", default="auto")
    p.add_argument("--rank-cutoff", type=float)
    p.add_argument("--out", help="write the trajectory CSV here")
    p = common(sub.add_parser("table", help="N, L, n_w, n_H, n_c summary row"))
    p.add_argument("--tie-break", choices=TIE_BREAK_POLICIES, default="min_id")
    return parser


def _auto(value):
    if value is None or value == "auto":
        return None
    return float(value)


def config_from_args(ns) -> RunConfig:
    cfg = RunConfig(command=ns.command, input=ns.input, synthetic=ns.synthetic,
                    directed=ns.directed, format=ns.format)
    for name in ("d", "measure", "katz_alpha", "top_fraction", "tie_break", "rank_cutoff",
                 "jobs", "node", "out"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if hasattr(ns, "inputs"):
        cfg.inputs = [s for s in ns.inputs.split(",") if s]
    if hasattr(ns, "tf"):
        cfg.tf = _auto(ns.tf)
        cfg.h = _auto(ns.h)
    if cfg.command == "classic" and cfg.measure == "hc":
        cfg.measure = "all"
    return cfg


def load_graph(cfg: RunConfig) -> Graph:
    if cfg.synthetic:
        return from_spec(cfg.synthetic, cfg.directed)
    if not cfg.input:
        raise ValueError("an input file or --synthetic is required")
    return read_edge_list(cfg.input, cfg.directed)


def _strong_part(g: Graph, notices: list) -> Graph:
    if is_strongly_connected(g):
        return g
    sub, _ = largest_scc(g)
    notices.append(f"graph is not strongly connected; using its largest SCC "
                   f"({sub.n} of {g.n} nodes)")
    return sub


def _per_node(g: Graph, scores) -> dict:
    return {g.labels[i]: (None if not math.isfinite(s) else float(s)) for i, s in enumerate(scores)}


def _dispatch(cfg: RunConfig, g: Graph, notices: list):
    """Return (payload dict, csv rows or None)."""
    if cfg.command == "check":
        ids = [g.node_of(lab) for lab in cfg.inputs]
        ok, unreached = is_herdable(g, ids)
        return {"herdable": ok, "inputs": cfg.inputs,
                "unreached": [g.labels[v] for v in sorted(unreached)]}, None

    if cfg.command == "cover":
        cover = herding_cover(g, cfg.tie_break)
        return cover.to_dict(g), [("node",)] + [(g.labels[v],) for v in cover.herding_nodes]

    if cfg.command == "drivers":
        res = driver_node_count(g)
        return res.to_dict(g), [("node",)] + [(g.labels[v],) for v in res.driver_nodes]

    if cfg.command == "table":
        cover = herding_cover(g, cfg.tie_break)
        drv = driver_node_count(g)
        return {"N": g.n, "L": g.edge_count, "Dir": "D" if g.directed else "U",
                "N_w": cover.N_w, "N_H": cover.N_H, "N_c": drv.N_c,
                "n_w": cover.n_w, "n_H": cover.n_H, "n_c": drv.n_c}, None

    if cfg.command == "simulate":
        node = g.node_of(cfg.node)
        if not is_strongly_connected(g):
            ok, unreached = is_herdable(g, [node])
            if not ok:
                raise InfeasibleError(f"node {cfg.node} cannot herd the graph; "
                                      f"{len(unreached)} node(s) unreachable")
        rec = sim.verify_herding(g, node, cfg.d, cfg.tf, cfg.h, cfg.rank_cutoff)
        if cfg.out:
            traj = rec.trajectory
            with open(cfg.out, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["t"] + [f"x_{i}" for i in range(g.n)] + ["u"])
                for t, x, u in zip(traj.t, traj.x, traj.u):
                    w.writerow([repr(float(t))] + [repr(float(v)) for v in x] + [repr(float(u[0]))])
        payload = {"node": cfg.node, "d": rec.d, "t_f": rec.t_f, "h": rec.h,
                   "predicted_energy": rec.predicted_energy, "realized_energy": rec.realized_energy,
                   "energy_ratio": rec.energy_ratio, "margin": rec.margin, "passed": rec.passed,
                   "x_final": _per_node(g, rec.x_final)}
        return payload, None

    if cfg.command == "classic" or (cfg.command == "centrality" and cfg.measure != "hc"):
        measures = cent.MEASURES if cfg.measure == "all" else (cfg.measure,)
        if "eigenvector" in measures:
            g = _strong_part(g, notices)
        reports = [cent.classic_centrality(g, m, cfg.katz_alpha) for m in measures]
        payload = {"measures": {r.measure: {"params": r.params, "scores": _per_node(g, r.scores)}
                                for r in reports}}
        rows = [("node",) + tuple(measures)]
        rows += [(g.labels[i],) + tuple(repr(float(r.scores[i])) for r in reports) for i in range(g.n)]
        return payload, rows

    g = _strong_part(g, notices)
    hc = cent.herdability_centrality(g, cfg.d, cfg.jobs, cfg.rank_cutoff)
    hub = cent.hub_degree_report(g, cfg.d, cfg.top_fraction, hc=hc)
    payload = {
        "nodes": list(g.labels),
        "Hc": _per_node(g, hc.Hc),
        "J": _per_node(g, hc.J),
        "argmin": [g.labels[v] for v in hc.argmin],
        "d": hc.d, "horizon": hc.horizon, "partial": hc.partial,
        "errors": {g.labels[i]: msg for i, msg in sorted(hc.errors.items())},
        "hub_degree": {"avg_degree": hub.avg_degree, "avg_degree_top": hub.avg_degree_top,
                       "top_fraction": hub.top_fraction,
                       "top_nodes": [g.labels[v] for v in hub.top_nodes]},
    }
    if cfg.command == "compare":
        entries = cent.overlap_report(g, cfg.d, hc=hc, katz_alpha=cfg.katz_alpha)
        payload["overlap"] = [{"measure": e.measure, "best_nodes": [g.labels[v] for v in e.best_nodes],
                               "hc_max": e.hc_max, "hc_min": e.hc_min, "attains_max": e.attains_max}
                              for e in entries]
        payload["any_attains_max"] = any(e.attains_max for e in entries)
    rows = [("node", "score")] + [(g.labels[i], repr(float(hc.Hc[i]))) for i in range(g.n)]
    return payload, rows


def run(cfg: RunConfig) -> tuple[int, str, list]:
    """Execute one command.  Returns (exit status, stdout text, notices)."""
    notices: list = []
    try:
        g = load_graph(cfg)
        payload, rows = _dispatch(cfg, g, notices)
    except (EdgeListError, OSError, KeyError, OutOfRangeError) as exc:
        return EXIT_INPUT, "", notices + [f"input error: {exc}"]
    except (NumericalError, NotHurwitzError, np.linalg.LinAlgError) as exc:
        return EXIT_NUMERIC, "", notices + [f"numerical failure: {exc}"]
    except ValueError as exc:
        return EXIT_INPUT, "", notices + [f"input error: {exc}"]
    if cfg.format == "csv" and rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return EXIT_OK, buf.getvalue(), notices
    meta = {"tool": "herd", "version": __version__, "backend": _accel.backend(),
            "config": asdict(cfg), "tolerances": tolerances(cfg, g.n), "notices": notices}
    text = json.dumps({"meta": meta, "result": payload}, indent=2, sort_keys=True)
    return EXIT_OK, text + "\n", notices


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    status, text, notices = run(cfg)
    for msg in notices:
        print(f"herd: {msg}", file=sys.stderr)
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

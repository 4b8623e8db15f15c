"""Command-line front end.

Subcommands:

* ``bounds``   - every bound for one graph plus the chain verdict
* ``theta-k``  - one weighted level value with optional witnesses
* ``hbracket`` - the certified h(G) bracket with certificate files
* ``batch``    - CSV sweep over a family range or a file of graph6 lines

Exit codes: 0 ok, 2 parse error, 3 solver error, 4 chain violation.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .certify import ChainViolationError, ChainReport, verify_chain
from .chromatic import SizeGuardError
from .formats import GraphParseError, encode_graph6, parse_dimacs, parse_edge_list, parse_graph6
from .graphs import FamilySpec, Graph, generate
from .hoffman import certificate_to_dict, h_bracket
from .theta import CertificationError, SolverFailure, theta_k

EXIT_PARSE = 2
EXIT_SOLVER = 3
EXIT_CHAIN = 4

CSV_COLUMNS = [
    "name", "n", "m", "alpha", "theta", "theta_complement", "chi_f",
    "chi_f_rational", "chi", "hoffman_adj", "ratio_adj", "h_lo", "h_hi",
    "chain_ok", "seconds",
]


class CliError(Exception):
    def __init__(self, message: str, code: int):
        self.code = code
        super().__init__(message)


def _fmt_float(x: float) -> float:
    """Round to 9 significant digits for stable report output."""
    return float(f"{x:.9g}")


def _fmt_rational(rat) -> str | None:
    return None if rat is None else f"{rat[0]}/{rat[1]}"


def _jsonify(obj):
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, np.floating):
        return _fmt_float(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def _emit_json(data: dict, args) -> str:
    payload = {"schema": 1, "tool": "spectral-chroma", "version": __version__}
    if not args.no_timestamp:
        payload["generated_at"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    payload.update(data)
    return json.dumps(_jsonify(payload), indent=2, sort_keys=True)


# -- input handling -----------------------------------------------------------


def _family_from_args(tokens: list[str], seed: int) -> FamilySpec:
    if not tokens:
        raise CliError("--family needs a kind", EXIT_PARSE)
    kind = tokens[0]
    params = []
    prob = 0.5
    for tok in tokens[1:]:
        try:
            params.append(int(tok))
        except ValueError:
            try:
                prob = float(tok)
            except ValueError:
                raise CliError(f"bad family parameter {tok!r}", EXIT_PARSE)
    try:
        return FamilySpec(kind=kind, parameters=tuple(params), seed=seed, probability=prob)
    except ValueError as e:
        raise CliError(str(e), EXIT_PARSE)


def _load_graph(args) -> tuple[str, Graph]:
    sources = [bool(args.family), bool(args.graph6), bool(args.input)]
    if sum(sources) != 1:
        raise CliError("exactly one of --family/--graph6/--input is required", EXIT_PARSE)
    try:
        if args.family:
            spec = _family_from_args(args.family, args.seed)
            return spec.name(), generate(spec)
        if args.graph6:
            return args.graph6, parse_graph6(args.graph6)
        text = Path(args.input).read_text()
        if args.format_in == "graph6" or (args.format_in == "auto" and not text.lstrip().startswith(("p", "c", "e"))):
            first = text.strip().splitlines()[0]
            return first, parse_graph6(first)
        if args.format_in == "dimacs" or text.lstrip().startswith(("p", "c")):
            return Path(args.input).name, parse_dimacs(text)
        return Path(args.input).name, parse_edge_list(text)
    except (GraphParseError, ValueError, OSError) as e:
        raise CliError(f"cannot load graph: {e}", EXIT_PARSE)


def _load_weights(path: str | None, g: Graph) -> np.ndarray:
    if path is None:
        return np.ones(g.n)
    try:
        entries = [float(line) for line in Path(path).read_text().split()]
    except (ValueError, OSError) as e:
        raise CliError(f"cannot read weights: {e}", EXIT_PARSE)
    if len(entries) != g.n:
        raise CliError(f"weights file has {len(entries)} entries, graph has {g.n}", EXIT_PARSE)
    return np.asarray(entries)


def _report_dict(rep: ChainReport) -> dict:
    return {
        "name": rep.name,
        "graph6": rep.graph6,
        "n": rep.n,
        "m": rep.m_edges,
        "alpha": rep.alpha,
        "theta": rep.theta,
        "theta_complement": rep.theta_complement,
        "chi_f": rep.chi_f,
        "chi_f_rational": _fmt_rational(rep.chi_f_rational),
        "chi": rep.chi,
        "hoffman_adj": rep.hoffman_adjacency,
        "ratio_adj": rep.ratio_adjacency,
        "h_bracket": [rep.h_lo, rep.h_hi],
        "chain_ok": rep.chain_ok,
    }


def _write_certificates(out: str | None, name: str, g: Graph, bracket) -> list[str]:
    if out is None:
        return []
    cert_dir = Path(f"{out}.cert")
    cert_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for cert in bracket.lo_certificates:
        path = cert_dir / f"{name}.level-{cert.m}.json"
        path.write_text(json.dumps(_jsonify(certificate_to_dict(g, cert)), indent=2, sort_keys=True))
        written.append(str(path))
    coloring = bracket.coloring
    if coloring is not None:
        path = cert_dir / f"{name}.fractional-coloring.json"
        path.write_text(
            json.dumps(
                _jsonify(
                    {
                        "schema": 1,
                        "kind": "fractional-coloring",
                        "graph6": encode_graph6(g),
                        "chi_f": coloring.value,
                        "chi_f_rational": _fmt_rational(bracket.chi_f_rational),
                        "cocliques": [list(s) for s in coloring.cocliques],
                        "weights": coloring.weights,
                    }
                ),
                indent=2,
                sort_keys=True,
            )
        )
        written.append(str(path))
    return written


# -- subcommands -----------------------------------------------------------------


def _cmd_bounds(args) -> int:
    name, g = _load_graph(args)
    try:
        rep = verify_chain(g, budget=args.budget, seed=args.seed, name=name)
    except ChainViolationError as e:
        sys.stderr.write(f"chain violation: {e}\n")
        return EXIT_CHAIN
    except (SolverFailure, CertificationError) as e:
        sys.stderr.write(f"solver failure: {e}\n")
        return EXIT_SOLVER
    except SizeGuardError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_PARSE
    data = _report_dict(rep)
    if args.out:
        _write_certificates(args.out, name, g, rep.bracket)
    _output(args, _emit_json(data, args), _bounds_text(data))
    return 0


def _bounds_text(d: dict) -> str:
    lines = [f"{d['name']} (n={d['n']}, m={d['m']})"]
    rat = f"  ({d['chi_f_rational']})" if d.get("chi_f_rational") else ""
    lines.append(f"  alpha               {d['alpha']}")
    lines.append(f"  theta               {d['theta']:.6f}")
    lines.append(f"  theta(complement)   {d['theta_complement']:.6f}")
    lines.append(f"  chi_f               {d['chi_f']:.6f}{rat}")
    lines.append(f"  chi                 {d['chi']}")
    lines.append(f"  hoffman(adjacency)  {d['hoffman_adj']}")
    ratio = d["ratio_adj"]
    lines.append(f"  ratio(adjacency)    {ratio if ratio is None else f'{ratio:.6f}'}")
    lines.append(f"  h bracket           [{d['h_bracket'][0]}, {d['h_bracket'][1]}]")
    lines.append(f"  chain               {'ok' if d['chain_ok'] else 'VIOLATED'}")
    return "\n".join(lines)


def _cmd_theta_k(args) -> int:
    name, g = _load_graph(args)
    w = _load_weights(args.weights, g)
    try:
        res = theta_k(g, w, args.k)
    except (SolverFailure, CertificationError) as e:
        sys.stderr.write(f"solver failure: {e}\n")
        return EXIT_SOLVER
    except ValueError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_PARSE
    data = {
        "name": name,
        "graph6": encode_graph6(g),
        "k": res.k,
        "w_total": float(res.w.sum()),
        "value": res.value,
        "gap": res.gap,
        "value_lower": res.value_lower,
        "value_upper": res.value_upper,
        "solver_relative_gap": res.solver_gap,
    }
    if args.witness:
        data["witnesses"] = {
            "X": res.dual_x,
            "Z": res.primal_z,
            "Y": res.primal_y,
            "eta": res.eta,
        }
    text = (
        f"theta_{args.k:g}({name}; w) = {res.value:.9g}   "
        f"(gap {res.gap:.2e}, bracket [{res.value_lower:.9g}, {res.value_upper:.9g}])"
    )
    _output(args, _emit_json(data, args), text)
    return 0


def _cmd_hbracket(args) -> int:
    name, g = _load_graph(args)
    try:
        bracket = h_bracket(g, budget=args.budget, seed=args.seed)
    except (SolverFailure, CertificationError) as e:
        sys.stderr.write(f"solver failure: {e}\n")
        return EXIT_SOLVER
    data = {
        "name": name,
        "graph6": encode_graph6(g),
        "h_bracket": [bracket.lo, bracket.hi],
        "chi_f": bracket.chi_f,
        "chi_f_rational": _fmt_rational(bracket.chi_f_rational),
        "theta_complement": bracket.theta_complement,
        "certificates": [
            {"m": c.m, "achieved": c.achieved, "source": c.source}
            for c in bracket.lo_certificates
        ],
    }
    files = _write_certificates(args.out, name, g, bracket)
    if files:
        data["certificate_files"] = files
    text = f"h({name}) in [{bracket.lo}, {bracket.hi}]  (chi_f {bracket.chi_f:.6g}, theta_bar {bracket.theta_complement:.6g})"
    _output(args, _emit_json(data, args), text)
    return 0


def _iter_batch_graphs(args):
    if args.family:
        tokens = list(args.family)
        rng = None
        for pos, tok in enumerate(tokens[1:], start=1):
            if ".." in tok:
                lo, hi = tok.split("..")
                for val in range(int(lo), int(hi) + 1):
                    sub = tokens[:pos] + [str(val)] + tokens[pos + 1:]
                    spec = _family_from_args(sub, args.seed)
                    yield spec.name(), generate(spec)
                return
        spec = _family_from_args(tokens, args.seed)
        yield spec.name(), generate(spec)
        return
    if args.input:
        for line in Path(args.input).read_text().splitlines():
            line = line.strip()
            if line:
                yield line, parse_graph6(line)
        return
    raise CliError("batch needs --family or --input", EXIT_PARSE)


def _csv_row(rep: ChainReport) -> dict:
    return {
        "name": rep.name,
        "n": rep.n,
        "m": rep.m_edges,
        "alpha": rep.alpha,
        "theta": f"{rep.theta:.9g}",
        "theta_complement": f"{rep.theta_complement:.9g}",
        "chi_f": f"{rep.chi_f:.9g}",
        "chi_f_rational": _fmt_rational(rep.chi_f_rational) or "",
        "chi": rep.chi,
        "hoffman_adj": "" if rep.hoffman_adjacency is None else rep.hoffman_adjacency,
        "ratio_adj": "" if rep.ratio_adjacency is None else f"{rep.ratio_adjacency:.9g}",
        "h_lo": rep.h_lo,
        "h_hi": rep.h_hi,
        "chain_ok": "ok" if rep.chain_ok else "violated",
        "seconds": f"{rep.seconds:.3f}",
    }


def _cmd_batch(args) -> int:
    out_path = Path(args.out) if args.out else None
    done: set[str] = set()
    if out_path and out_path.exists():
        with out_path.open() as fh:
            for row in csv.DictReader(fh):
                done.add(row["name"])
    try:
        work = [(name, g) for name, g in _iter_batch_graphs(args) if name not in done]
    except GraphParseError as e:
        raise CliError(str(e), EXIT_PARSE)

    jobs = args.jobs or int(os.environ.get("SPECTRAL_CHROMA_JOBS", "1"))
    chain_failed = False
    rows = []

    def run_one(item):
        name, g = item
        try:
            return _csv_row(verify_chain(g, budget=args.budget, seed=args.seed, name=name))
        except ChainViolationError as e:
            row = _csv_row(e.report)
            row["chain_ok"] = "violated"
            return row

    if jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_one, work))  # preserves input order
    else:
        rows = [run_one(item) for item in work]
    chain_failed = any(r["chain_ok"] != "ok" for r in rows)

    if out_path:
        new_file = not out_path.exists()
        with out_path.open("a", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            if new_file:
                writer.writeheader()
            for row in rows:
                writer.writerow(row)
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return EXIT_CHAIN if chain_failed else 0


def _output(args, json_text: str, plain_text: str):
    body = json_text if args.format == "json" else plain_text
    if args.out and args.format == "json":
        Path(args.out).write_text(body + "\n")
    else:
        sys.stdout.write(body + "\n")


# -- argument parsing -------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, batch: bool = False):
    p.add_argument("--family", nargs="+", metavar="KIND [PARAM...]",
                   help="generate a graph family, e.g. --family cycle 5")
    p.add_argument("--graph6", help="inline graph6 string")
    p.add_argument("--input", help="path to a graph file" + (" (graph6 lines)" if batch else ""))
    p.add_argument("--format-in", choices=["auto", "graph6", "dimacs", "edges"], default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10000, help="search iteration budget")
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.add_argument("--out", help="output path (reports; certificates go to <out>.cert/)")
    p.add_argument("--no-timestamp", action="store_true", help="omit timestamps (stable output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-chroma",
        description="Eigenvalue-sum and semidefinite bounds for graph coloring",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="all bounds and the chain verdict for one graph")
    _add_common(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("theta-k", help="weighted theta level value")
    _add_common(p)
    p.add_argument("--k", type=float, required=True, help="trace level (real, in [0,n])")
    p.add_argument("--weights", help="file with one nonnegative weight per line")
    p.add_argument("--witness", action="store_true", help="include witnesses in JSON output")
    p.set_defaults(func=_cmd_theta_k)

    p = sub.add_parser("hbracket", help="certified h(G) bracket")
    _add_common(p)
    p.set_defaults(func=_cmd_hbracket)

    p = sub.add_parser("batch", help="CSV sweep over many graphs")
    _add_common(p, batch=True)
    p.add_argument("--jobs", type=int, default=None,
                   help="concurrent graphs (default $SPECTRAL_CHROMA_JOBS or 1)")
    p.set_defaults(func=_cmd_batch)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        sys.stderr.write(f"{e}\n")
        return e.code
    except GraphParseError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

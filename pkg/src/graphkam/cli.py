"""Command line front-end.

    graphkam critical --input problem.json --c 4
    graphkam alpha-grid --input problem.json --grid -8:8:0.5 --format csv
    graphkam beta --input problem.json --h 1
    graphkam decompose --input problem.json --measure mu.json
    graphkam compile --input network.json --out problem.json
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import itertools
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import io
from .errors import NumericalError, ValidationError
from .graph import Cochain0, boundary, coboundary, pairing
from .mather import GAP_TOL, beta, check_graph_property, mather_measures, shifted
from .measures import FiniteMeasure, decompose_circuits, is_closed, rotation_vector
from .network import check_compiled, compile_network
from .weak_kam import CRITICAL_TOL, critical_value, solve

COMMANDS = ("validate", "critical", "alpha-grid", "beta", "mather", "decompose", "compile")


@dataclass
class JobConfig:
    command: str
    input: str
    c: list[float] | None = None
    h: list[float] | None = None
    grid: list[tuple[float, float, float]] = field(default_factory=list)
    measure: str | None = None
    tol: float | None = None
    format: str = "json"
    seed: int = 0
    out: str | None = None


def parse_vector(text: str | None) -> list[float] | None:
    if text is None:
        return None
    return [float(x) for x in text.split(",") if x.strip()]


def parse_grid(text: str) -> list[tuple[float, float, float]]:
    out = []
    for part in text.split(","):
        try:
            lo, hi, step = (float(x) for x in part.split(":"))
        except ValueError:
            raise ValidationError(f"grid axis {part!r} is not lo:hi:step") from None
        if not (np.isfinite(lo) and np.isfinite(hi) and np.isfinite(step)) or step <= 0 or hi < lo:
            raise ValidationError(f"grid axis {part!r} needs finite bounds and a positive step")
        out.append((lo, hi, step))
    return out


def grid_axis(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(round((hi - lo) / step)) + 1
    return lo + step * np.arange(n)


def _vector(values, b: int, name: str) -> np.ndarray:
    if values is None:
        return np.zeros(b)
    if len(values) != b:
        raise ValidationError(f"--{name} needs {b} coordinates, got {len(values)}")
    return np.asarray(values, dtype=float)


# --------------------------------------------------------------- commands


def _measure_json(mu: FiniteMeasure) -> list[dict]:
    return mu.to_json()["atoms"]


def cmd_validate(cfg: JobConfig) -> dict:
    data = io.read_json(cfg.input)
    checks, errors = [], []
    rng = np.random.default_rng(cfg.seed)
    if "arcs" in data:
        spec = io.NetworkSpec.from_json(data)
        graph, h = compile_network(spec)
        for p in graph.pairs:
            for e in (p, "-" + p):
                rep = check_compiled(h.branch(e))
                errors += [f"{e}: {v}" for v in rep.violations]
        checks.append("compiled edges: monotone, concave, sublinear")
    else:
        graph, h = io.problem_from_json(data)
    checks.append(f"graph: {graph.n_vertices} vertices, {graph.n_pairs} pairs, betti {graph.betti}")

    errors += h.check_symmetry()
    checks.append("reversal symmetry")

    g0 = Cochain0(graph, rng.normal(size=graph.n_vertices))
    for z in graph.basis.cycles:
        if abs(pairing(coboundary(g0), z.chain()) - pairing(g0, boundary(z.chain()))) > 1e-9:
            errors.append("pairing identity fails on a basis cycle")
        if np.max(np.abs(boundary(z.chain()).values), initial=0.0) > 0:
            errors.append("basis cycle has non-zero boundary")
    checks.append("homology basis and pairing")

    for e in graph.edges:
        b = h.branch(e)
        lv = np.sort(b.a_floor + np.abs(rng.normal(size=3)) * (1.0 + abs(b.a_floor)) + 1e-6)
        s = [b.sigma(a) for a in lv]
        if not (s[0] < s[1] < s[2]):
            errors.append(f"{e}: sigma not increasing")
        q = float(abs(rng.normal()) * 2.0)
        if b.lagrangian(q) + lv[0] < q * s[0] - 1e-9 * (1.0 + abs(q * s[0])):
            errors.append(f"{e}: Fenchel-Young inequality fails at q={q:.3g}")
        if abs(b.lagrangian(0.0) + b.a_floor) > 1e-9 * (1.0 + abs(b.a_floor)):
            errors.append(f"{e}: L(0) differs from -a_e")
    checks.append("edge Hamiltonian monotonicity and Fenchel-Young samples")

    if cfg.measure or "atoms" in data:
        mdata = io.read_json(cfg.measure) if cfg.measure else data
        mu = FiniteMeasure.from_json(graph, mdata)
        if not is_closed(mu):
            errors.append("NotClosed: measure flux has non-zero boundary")
        checks.append("measure")
    return {"ok": not errors, "checks": checks, "errors": errors}


def cmd_critical(cfg: JobConfig) -> dict:
    graph, h = io.load_problem(cfg.input)
    c = _vector(cfg.c, graph.betti, "c")
    wk = solve(shifted(h, c), cfg.tol or CRITICAL_TOL)
    return {
        "c": c.tolist(),
        "alpha": wk.level,
        "a0": h.a0(),
        "aubry_edges": list(wk.aubry_edges),
        "Q": wk.speeds,
        "subsolution": wk.subsolution.as_dict(),
    }


def cmd_alpha_grid(cfg: JobConfig) -> dict:
    graph, h = io.load_problem(cfg.input)
    b = graph.betti
    axes = cfg.grid or [(0.0, 0.0, 1.0)]
    if len(axes) == 1 and b > 1:
        axes = axes * b
    if len(axes) != b:
        raise ValidationError(f"--grid needs {b} axes, got {len(axes)}")
    tol = cfg.tol or CRITICAL_TOL
    rows = []
    # cells are evaluated in grid order; each one is independent
    for point in itertools.product(*(grid_axis(*ax) for ax in axes)):
        c = np.array(point)
        rows.append({**{f"c{i + 1}": float(x) for i, x in enumerate(c)},
                     "alpha": critical_value(shifted(h, c), tol)})
    return {"rows": rows}


def cmd_beta(cfg: JobConfig) -> dict:
    graph, h = io.load_problem(cfg.input)
    hv = _vector(cfg.h, graph.betti, "h")
    res = beta(hv, h, tol=cfg.tol or GAP_TOL)
    return {
        "h": hv.tolist(),
        "beta": res.value,
        "optimal_c": res.optimal_c.tolist(),
        "dual_value": res.dual_value,
        "gap": res.gap,
        "level": res.level,
        "measure": _measure_json(res.measure),
        "components": [
            {"weight": k.weight, "circuit": list(k.path.support.edges), "measure": _measure_json(k.measure)}
            for k in res.components
        ],
        "irreducible_feasible": res.irreducible_feasible,
    }


def cmd_mather(cfg: JobConfig) -> dict:
    graph, h = io.load_problem(cfg.input)
    c = _vector(cfg.c, graph.betti, "c")
    ms = mather_measures(c, h)
    return {
        "c": c.tolist(),
        "alpha": ms.alpha,
        "mather_set": [{"edge": e, "q": q} for e, q in ms.mather_set],
        "irreducible_measures": [_measure_json(mu) for mu in ms.irreducible_measures],
        "circuits": [list(z) for z in ms.circuits],
        "rotation_vectors": ms.rotation_vectors.tolist(),
        "subdifferential_hull_certified": False,
        "graph_property": check_graph_property(ms),
    }


def cmd_decompose(cfg: JobConfig) -> dict:
    data = io.read_json(cfg.input)
    graph, _ = io.problem_from_json(data)
    mdata = io.read_json(cfg.measure) if cfg.measure else data
    mu = FiniteMeasure.from_json(graph, mdata)
    comps = decompose_circuits(mu)
    return {
        "rotation_vector": rotation_vector(mu).chain.as_dict(),
        "circuits": [
            {
                "weight": k.weight,
                "path": [list(t) for t in k.path.triples],
                "measure": _measure_json(k.measure),
            }
            for k in comps
        ],
    }


def cmd_compile(cfg: JobConfig) -> dict:
    spec = io.load_network(cfg.input)
    graph, h = compile_network(spec)
    return io.problem_to_json(graph, h)


HANDLERS = {
    "validate": cmd_validate,
    "critical": cmd_critical,
    "alpha-grid": cmd_alpha_grid,
    "beta": cmd_beta,
    "mather": cmd_mather,
    "decompose": cmd_decompose,
    "compile": cmd_compile,
}


# ----------------------------------------------------------------- output


def to_csv(result: dict) -> str:
    buf = _io.StringIO()
    if "rows" in result:
        rows = result["rows"]
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        w.writeheader()
        w.writerows({k: repr(v) if isinstance(v, float) else v for k, v in r.items()} for r in rows)
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in result.items():
            w.writerow([k, v if isinstance(v, (int, float, str)) else json.dumps(v)])
    return buf.getvalue()


def render(result: dict, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(result)
    return json.dumps(result, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphkam", description="Weak KAM and Aubry-Mather on finite graphs")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", required=True, help="problem, measure or network JSON")
    p.add_argument("--c", help="cohomology coordinates, comma separated")
    p.add_argument("--h", help="homology coordinates, comma separated")
    p.add_argument("--grid", help='per-axis "lo:hi:step", comma separated')
    p.add_argument("--measure", help="measure JSON for validate/decompose")
    p.add_argument("--tol", type=float)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    return p


def config_from_args(args) -> JobConfig:
    return JobConfig(
        command=args.command,
        input=args.input,
        c=parse_vector(args.c),
        h=parse_vector(args.h),
        grid=parse_grid(args.grid) if args.grid else [],
        measure=args.measure,
        tol=args.tol,
        format=args.format,
        seed=args.seed,
        out=args.out,
    )


def run(cfg: JobConfig) -> tuple[dict, int]:
    result = HANDLERS[cfg.command](cfg)
    code = 0 if result.get("ok", True) else 2
    return result, code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        result, code = run(cfg)
    except ValidationError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (KeyError, TypeError, ValueError, OSError) as exc:
        print(f"ValidationError: malformed input ({type(exc).__name__}: {exc})", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    text = render(result, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

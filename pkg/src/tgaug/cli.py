"""Command-line interface.

Subcommands: ``check`` (connectivity report for a .tg file), ``solve``
(run a solver on a problem manifest), ``reduce`` (generate gadget
instances from classic problems), and ``expand`` (emit the temporal
expansion of a pair-demand instance).  All output is deterministic;
exit codes are 0 for success/feasible, 1 for infeasible/not connected,
and 2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import augmentation as aug
from . import octo as octo_mod
from . import reductions as red_mod
from . import steiner_expansion as exp_mod
from .temporal_graph import (
    NON_STRICT,
    STRICT,
    ParseError,
    TemporalEdge,
    TemporalGraph,
    format_candidates,
    format_tg,
    parse_candidates,
    parse_tg,
)

_SEMANTICS_FLAG = {"strict": STRICT, "nonstrict": NON_STRICT}


def _dump(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _load_manifest(path: str) -> dict:
    try:
        data = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("manifest must be a JSON object")
    return data


def _requirement_from_manifest(spec: dict) -> aug.Requirement:
    kind = spec.get("type")
    if kind == "all":
        return aug.All()
    if kind == "source":
        return aug.Source(int(spec["vertex"]))
    if kind == "pairs":
        pairs = tuple((int(u), int(v)) for u, v in spec["pairs"])
        demand = spec.get("demand")
        return aug.Pairs(pairs, None if demand is None else int(demand))
    raise ParseError(f"unknown requirement type {kind!r}")


def _requirement_to_manifest(req: aug.Requirement) -> dict:
    if isinstance(req, aug.All):
        return {"type": "all"}
    if isinstance(req, aug.Source):
        return {"type": "source", "vertex": req.vertex}
    return {
        "type": "pairs",
        "pairs": [[u, v] for u, v in req.pairs],
        "demand": req.effective_demand,
    }


def _problem_from_manifest(manifest: dict, manifest_path: str, args) -> aug.AugmentationProblem:
    root = Path(manifest_path).parent
    base = parse_tg(_read(str(root / manifest["graph"])))
    candidates = ()
    if manifest.get("candidates"):
        candidates = parse_candidates(_read(str(root / manifest["candidates"])))
    semantics = manifest.get("semantics", NON_STRICT)
    if getattr(args, "semantics", None):
        semantics = _SEMANTICS_FLAG[args.semantics]
    cost = manifest.get("cost_model", aug.COST_EDGE)
    if getattr(args, "cost", None):
        cost = {"edge": aug.COST_EDGE, "group": aug.COST_GROUP}[args.cost]
    budget = manifest.get("budget")
    if getattr(args, "budget", None) is not None:
        budget = args.budget
    return aug.AugmentationProblem(
        base,
        frozenset(candidates),
        _requirement_from_manifest(manifest.get("requirement", {"type": "all"})),
        semantics,
        cost,
        budget,
        manifest.get("lifespan"),
    )


def cmd_check(args) -> int:
    g = parse_tg(_read(args.graph))
    semantics = _SEMANTICS_FLAG[args.semantics]
    connected = g.is_temporally_connected(semantics)
    components = {
        str(t): [list(block) for block in g.snapshot_components(t).blocks]
        for t in range(1, g.lifespan + 1)
    }
    report = {
        "schema": 1,
        "connected": connected,
        "semantics": semantics,
        "n": g.n,
        "lifespan": g.lifespan,
        "components_per_time": components,
    }
    if args.format == "json":
        print(_dump(report))
    else:
        print(f"n={g.n} lifespan={g.lifespan} semantics={semantics}")
        for t in range(1, g.lifespan + 1):
            blocks = " ".join(
                "{" + ",".join(map(str, b)) + "}" for b in g.snapshot_components(t).blocks
            )
            print(f"t={t}: {blocks}")
        print("connected" if connected else "not connected")
    return 0 if connected else 1


def _detect_one_plus_one(problem: aug.AugmentationProblem) -> bool:
    if not isinstance(problem.requirement, aug.All):
        return False
    if problem.semantics != NON_STRICT or problem.cost_model != aug.COST_EDGE:
        return False
    base = problem.base
    if base.lifespan != 1:
        return False
    wanted = {
        TemporalEdge(u, v, 2) for u in range(base.n) for v in range(u + 1, base.n)
    }
    return problem.candidates == frozenset(wanted)


def _solve_tca(problem: aug.AugmentationProblem, args) -> tuple[dict, int]:
    engine = args.engine
    if engine == "auto":
        if _detect_one_plus_one(problem):
            selected = aug.solve_one_plus_one(problem.base)
            if problem.budget is not None and len(selected) > problem.budget:
                outcome: aug.SolveOutcome = aug.Infeasible("budget_exceeded")
            else:
                outcome = aug.Solution(
                    tuple(sorted(selected, key=lambda e: e.key)), len(selected)
                )
            engine_used = "one-plus-one"
        else:
            outcome = aug.solve_exact(problem, threads=args.threads)
            engine_used = "subset"
    elif engine == "expansion":
        outcome = exp_mod.solve_tpca_via_expansion(problem)
        engine_used = "expansion"
    else:
        outcome = aug.solve_exact(problem, threads=args.threads)
        engine_used = "subset"

    if args.cross_check and isinstance(problem.requirement, aug.Pairs):
        gates = len(problem.candidates)
        if gates <= 12 and len(problem.requirement.pairs) <= 3:
            other = (
                aug.solve_exact(problem)
                if engine_used == "expansion"
                else exp_mod.solve_tpca_via_expansion(problem)
            )
            mine = outcome.cost if isinstance(outcome, aug.Solution) else None
            theirs = other.cost if isinstance(other, aug.Solution) else None
            if mine != theirs:
                raise RuntimeError(f"engine disagreement: {mine} != {theirs}")

    if isinstance(outcome, aug.Solution):
        assert aug.verify_solution(problem, outcome.selected)
    data = aug.solution_to_json(outcome, problem)
    data["engine"] = engine_used
    return data, 0 if outcome.feasible else 1


def cmd_solve(args) -> int:
    manifest = _load_manifest(args.manifest)
    kind = manifest.get("kind", "tca")
    if kind == "octo":
        root = Path(args.manifest).parent
        matrix = octo_mod.parse_matrix(_read(str(root / manifest["matrix"])))
        budget = manifest.get("budget")
        if getattr(args, "budget", None) is not None:
            budget = args.budget
        result = octo_mod.solve_octo(matrix, budget)
        data = octo_mod.octo_result_to_json(result)
        print(_dump(data))
        return 0 if result.solved else 1
    if kind != "tca":
        raise ParseError(f"unknown manifest kind {kind!r}")
    problem = _problem_from_manifest(manifest, args.manifest, args)
    data, code = _solve_tca(problem, args)
    if args.format == "json":
        print(_dump(data))
    else:
        if data["feasible"]:
            edges = " ".join(f"{{{e['u']},{e['v']}}}@{e['t']}" for e in data["selected"])
            print(f"cost {data['cost']}: {edges or '(nothing to add)'}")
        else:
            print(data["reason"])
    return code


def cmd_reduce(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    text = _read(args.source)
    if args.kind == "dsc":
        inst = red_mod.parse_set_system(text, args.budget)
        reduction = red_mod.reduce_dsc(inst)
        (out / "instance.mat").write_text(octo_mod.format_matrix(reduction.matrix))
        manifest = {
            "schema": 1,
            "kind": "octo",
            "matrix": "instance.mat",
            "budget": reduction.budget,
        }
        (out / "manifest.json").write_text(_dump(manifest) + "\n")
        print(
            f"matrix {reduction.matrix.n_rows}x{reduction.matrix.n_cols} "
            f"budget {reduction.budget}"
        )
        return 0

    if args.kind == "ds":
        inst = red_mod.parse_static_graph(text, args.budget)
        problem = red_mod.reduce_dominating_set(inst, args.mode).problem
        notes = {}
    elif args.kind == "hs":
        system = red_mod.parse_set_system(text, args.budget)
        problem = red_mod.reduce_hitting_set(system, args.mode).problem
        notes = {}
    else:  # 3sat
        cnf = red_mod.parse_dimacs(text)
        reduction = red_mod.reduce_3sat(cnf)
        problem = reduction.problem
        notes = {"standard_budget": reduction.standard_budget}
    (out / "instance.tg").write_text(format_tg(problem.base))
    (out / "instance.cand").write_text(format_candidates(problem.candidates))
    manifest = {
        "schema": 1,
        "kind": "tca",
        "graph": "instance.tg",
        "candidates": "instance.cand",
        "requirement": _requirement_to_manifest(problem.requirement),
        "semantics": problem.semantics,
        "cost_model": problem.cost_model,
        "budget": problem.budget,
        **notes,
    }
    (out / "manifest.json").write_text(_dump(manifest) + "\n")
    print(
        f"{problem.base.n} vertices, {len(problem.base.edges)} base edges, "
        f"{len(problem.candidates)} candidates, budget {problem.budget}"
    )
    return 0


def cmd_expand(args) -> int:
    manifest = _load_manifest(args.manifest)
    if manifest.get("kind", "tca") != "tca":
        raise ParseError("expansion needs a tca manifest")
    problem = _problem_from_manifest(manifest, args.manifest, args)
    if not isinstance(problem.requirement, aug.Pairs):
        raise ParseError("expansion needs a pairs requirement")
    full = problem.base.augment(problem.candidates)
    weights = {e: (1 if e in problem.candidates else 0) for e in full.edges}
    inst = exp_mod.TGSteinerInstance.from_weights(
        full, weights, problem.requirement.pairs, problem.requirement.effective_demand
    )
    exp, _ = exp_mod.build_expansion(inst, problem.semantics)
    if args.format == "dot":
        sys.stdout.write(exp_mod.expansion_to_dot(exp))
    else:
        print(_dump(exp_mod.expansion_to_json(exp)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tgaug", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="connectivity report for a .tg file")
    p_check.add_argument("graph")
    p_check.add_argument("--semantics", choices=sorted(_SEMANTICS_FLAG), default="nonstrict")
    p_check.add_argument("--format", choices=["json", "text"], default="json")
    p_check.set_defaults(func=cmd_check)

    p_solve = sub.add_parser("solve", help="solve a problem manifest")
    p_solve.add_argument("manifest")
    p_solve.add_argument("--engine", choices=["subset", "expansion", "auto"], default="auto")
    p_solve.add_argument("--semantics", choices=sorted(_SEMANTICS_FLAG))
    p_solve.add_argument("--cost", choices=["edge", "group"])
    p_solve.add_argument("--budget", type=int)
    p_solve.add_argument("--threads", type=int, default=1)
    p_solve.add_argument("--format", choices=["json", "text"], default="json")
    p_solve.add_argument("--cross-check", action="store_true", dest="cross_check")
    p_solve.set_defaults(func=cmd_solve)

    p_reduce = sub.add_parser("reduce", help="generate a gadget instance bundle")
    p_reduce.add_argument("kind", choices=["ds", "hs", "dsc", "3sat"])
    p_reduce.add_argument("source")
    p_reduce.add_argument("budget", type=int)
    p_reduce.add_argument("--out", required=True)
    p_reduce.add_argument("--mode", choices=list(red_mod.MODES), default=red_mod.MODE_SIMPLE)
    p_reduce.set_defaults(func=cmd_reduce)

    p_expand = sub.add_parser("expand", help="emit the temporal expansion")
    p_expand.add_argument("manifest")
    p_expand.add_argument("--semantics", choices=sorted(_SEMANTICS_FLAG))
    p_expand.add_argument("--format", choices=["dot", "json"], default="dot")
    p_expand.set_defaults(func=cmd_expand)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

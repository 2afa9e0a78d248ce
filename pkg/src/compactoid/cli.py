"""Command-line runner: ``compactoid <command> [options]``.

Exit codes: 0 every verdict as expected, 1 a verdict mismatch, 2 a parse
error, 3 an enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from dataclasses import dataclass, field
from importlib import resources

from .ellis import (
    EllisModel,
    check_left_topological,
    check_pr_e,
    check_right_topological,
    ellis_classify,
    ellis_map,
)
from .errors import BudgetExceeded, CompactoidError
from .graphmap import check_condition_F, graph_map, verify_closure_symmetry
from .invsys import (
    DEFAULT_BUDGET,
    BuilderModel,
    classify_threads,
    closure_levelwise,
)
from .posets import PREDICATES, check_implications, classify, compare, verify_map
from .relcore import FinMap, FinRelation, compose_rel, product_map
from .vietoris import composition_discontinuity_witness, emit_cover, u_cover, ends_cover

COMMANDS = ("ellis", "graph", "condf", "classify", "compare", "counterexamples")

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3


class ScenarioError(CompactoidError):
    pass


_MODEL = re.compile(r"^\s*(E|G)\s*\((.*)\)\s*$")


def build_model(expr: str, depth: int = 4):
    """``az``, ``bz``, or ``E(...)`` / ``G(...)`` applied to a model expression."""
    m = _MODEL.match(expr)
    if m:
        inner = build_model(m.group(2), depth)
        return ellis_map(inner, depth) if m.group(1) == "E" else graph_map(inner, max(depth, 4))
    expr = expr.strip()
    if expr not in ("az", "bz"):
        raise ScenarioError(f"unknown model {expr!r}")
    return BuilderModel(expr)


@dataclass
class Section:
    title: str
    anchor: str
    lines: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    mismatches: list = field(default_factory=list)

    def render(self) -> str:
        out = [f"[{self.title}]", f"anchor: {self.anchor}"]
        out += self.lines
        for key, want, got in self.mismatches:
            out.append(f"MISMATCH {key}: expected {_fmt(want)}, got {_fmt(got)}")
        return "\n".join(out) + "\n"


def _fmt(v) -> str:
    return json.dumps(v, sort_keys=True, ensure_ascii=False)


# --- commands ----------------------------------------------------------------

def cmd_ellis(model: str, depth: int, budget: int, **_) -> Section:
    base = build_model(model, depth)
    M = ellis_classify(base, depth, budget=budget)
    E = M.model
    right = check_right_topological(M)
    left = check_left_topological(M)
    pr = check_pr_e(E, 8)
    shown = E.catalogue(3)
    data = {
        "model": base.name,
        "elements": [str(e) for e in shown],
        "limits": [str(e) for e in E.limit_points()],
        "right_topological": right.ok,
        "left_topological": left.ok,
        "left_witness": None if left.ok else [str(left.witness[0]), str(left.witness[1])],
        "pr_e_bijective": pr.bijective and pr.embeds,
        "associative": M.check_associativity(4) is None,
        "unit": M.check_unit() is None,
    }
    if isinstance(base, BuilderModel) and base.kind == "bz":
        data["table"] = sign_table(E)
    s = Section(f"ellis {base.name}", "the enveloping semigroup is the closure of the translations in X^X")
    s.lines.append("catalogue: " + ", ".join(data["elements"][:3]) + ", ..., "
                   + ", ".join(data["elements"][-3:]))
    s.lines.append("identified with: " + ", ".join(
        f"{e} -> {base.label(E.pr_e(e))}" for e in shown if e.is_limit or e.k in (-1, 0, 1)))
    if "table" in data:
        for key in sorted(data["table"]):
            s.lines.append(f"table {key} = {data['table'][key]}")
    s.lines.append(f"right topological: {right.ok}")
    s.lines.append(f"left topological: {left.ok}" + ("" if left.ok else f" (witness s = {data['left_witness'][0]}, point = {data['left_witness'][1]})"))
    s.lines.append(f"pr_e bijective: {data['pr_e_bijective']}")
    s.lines.append(f"associative on |k| <= 4: {data['associative']}")
    s.data = data
    return s


def sign_table(E: EllisModel) -> dict:
    """The nine sign cases of the two-point table, through ``f -> f(e)``."""
    reps = {"-inf": E.limit_of(-1), "int": E.embed(2), "+inf": E.limit_of(1)}
    out = {}
    for a, x in reps.items():
        for b, y in reps.items():
            val = E.base.label(E.pr_e(E.compose(x, y)))
            if a == b == "int":
                val = "x+y" if val == "4" else val
            elif val == "2":
                val = "int"
            out[f"{a}.{b}"] = val
    return out


def cmd_graph(model: str, depth: int, budget: int, **_) -> Section:
    base = build_model(model, depth)
    closures = [closure_levelwise(base, n, budget) for n in range(1, depth + 1)]
    tc = classify_threads(base, {c.n: c.relations for c in closures}, budget)
    G = graph_map(base, max(depth, 4), budget)
    sym = verify_closure_symmetry(base, depth, budget, {c.n: c.relations for c in closures})
    cmp = compare(G, base, min(depth, 4))
    data = {
        "model": base.name,
        "limits": [str(x) for x in tc.limits],
        "translations_resolved": [min(tc.translations), max(tc.translations)],
        "level_sizes": {str(c.n): len(c.relations) for c in closures},
        "stabilization_bounds": {str(c.n): c.bound for c in closures},
        "symmetric": sym.ok,
        "compare_with_base": cmp.relation,
    }
    s = Section(f"graph {base.name}", "closure of the translation graphs in the Vietoris hyperspace")
    for c in closures:
        s.lines.append(f"level {c.n}: {len(c.relations)} relations, last growth at |k| = {c.bound}")
    s.lines.append(f"threads at depth {depth}: GraphOf(k) for {tc.translations[0]} <= k <= {tc.translations[-1]}, "
                   + ", ".join(data["limits"]))
    s.lines.append(f"closed under converse and both shifts: {sym.ok}")
    s.lines.append(f"{G.name} {cmp.relation} {base.name}")
    s.data = data
    return s


def cmd_condf(model: str, n: int, v_scale: int, **_) -> Section:
    base = build_model(model)
    make = ends_cover if base.limit_of(1) == base.limit_of(-1) else u_cover
    u, v = make(n), make(v_scale * n)
    verdict = check_condition_F(base, u, v)
    data = {"model": base.name, "n": n, "v_scale": v_scale, "ok": verdict.ok, "witness": verdict.witness}
    s = Section(f"condf {base.name} n={n} v={v_scale}n",
                "star-cover criterion for the graph closure to add nothing")
    s.lines.append(f"u = {emit_cover(u)}")
    s.lines.append(f"v = {emit_cover(v)}")
    s.lines.append(f"holds: {verdict.ok}")
    if verdict.witness:
        w = verdict.witness
        s.lines.append(f"witness: g = {w['g']}, h = {w['h']}, u-block {w['u_block']}, y = {w['y']} ({w['clause']})")
    s.data = data
    return s


def cmd_classify(model: str, depth: int, **_) -> Section:
    m = build_model(model, depth)
    rec = classify(m)
    check_implications(rec)
    data = {key: rec.verdicts[key] for key in PREDICATES}
    data["model"] = m.name
    data["implications_consistent"] = True
    if "s_involution" in rec.extra:
        data["s_involution"] = rec.extra["s_involution"]
    if "s_involution_witness" in rec.extra:
        x, y, lhs, rhs = rec.extra["s_involution_witness"]
        data["s_involution_witness"] = [m.label(x), m.label(y), m.label(lhs), m.label(rhs)]
    if "inverses" in rec.extra:
        data["limit_inverses"] = rec.extra["inverses"]
    s = Section(f"classify {m.name}", "taxonomy of compactifications and its implication chains")
    for key in PREDICATES:
        line = f"{key}: {rec.mark(key)}"
        if rec.verdicts[key] is False and key in rec.witnesses:
            line += f" ({rec.witnesses[key]})"
        s.lines.append(line)
    if "s_involution_witness" in data:
        x, y, lhs, rhs = data["s_involution_witness"]
        s.lines.append(f"s is not an involution: s({x} . {y}) = {lhs} but s({y}) . s({x}) = {rhs}")
    if "limit_inverses" in data:
        s.lines.append("inverses of limits: " + ", ".join(f"{k}* = {v}" for k, v in sorted(data["limit_inverses"].items())))
    s.data = data
    return s


def cmd_compare(a: str, b: str, depth: int, **_) -> Section:
    m1, m2 = build_model(a, depth), build_model(b, depth)
    c = compare(m1, m2, depth)
    s = Section(f"compare {m1.name} {m2.name}", "order of compactifications by maps fixing the group")
    s.lines.append(f"{m1.name} {c.relation} {m2.name}")
    for label, phi in (("forward", c.forward), ("backward", c.backward)):
        if phi is not None:
            v = verify_map(phi)
            s.lines.append(f"{label} map: " + ", ".join(f"{k}={v.checks[k]}" for k in sorted(v.checks))
                           + "; source levels " + " ".join(f"{n}<-{m}" for n, (m, _) in sorted(phi.levels.items())))
    s.data = {"a": m1.name, "b": m2.name, "depth": depth, "relation": c.relation}
    return s


def hyperspace_projection_counterexample():
    """A non-injective onto map whose image of a composite is strictly smaller."""
    phi = FinMap((0, 1, 1), 2)
    S = FinRelation.from_pairs(3, 3, [(0, 1)])
    R = FinRelation.from_pairs(3, 3, [(2, 2)])
    lhs = product_map(phi, compose_rel(R, S))
    rhs = compose_rel(product_map(phi, R), product_map(phi, S))
    return phi, R, S, lhs, rhs


def cmd_counterexamples(seed: int = 0, **_) -> Section:
    s = Section("counterexamples", "constructed failures of continuity and of structure")
    data = {}
    grid = {}
    for n in (4, 6, 8, 10):
        w = composition_discontinuity_witness(n)
        grid[str(n)] = w.holds
        rs = sorted(w.RS)
        s.lines.append(f"grid n={n}: RS = {rs} in W: {w.RS_in_W}; RS' outside W for all a < 1/2: "
                       f"{not any(m for _, _, m in w.perturbed)}")
    data["composition_left_discontinuity"] = grid
    phi, R, S, lhs, rhs = hyperspace_projection_counterexample()
    data["hyperspace_map_not_multiplicative"] = lhs != rhs and lhs.pairs() <= rhs.pairs()
    s.lines.append(f"onto map {list(phi.images)}: image of RS = {sorted(lhs.pairs())}, "
                   f"product of images = {sorted(rhs.pairs())}")
    bz = BuilderModel("bz")
    rec = classify(bz)
    x, y, lhs_p, rhs_p = rec.extra["s_involution_witness"]
    data["bz_s_not_involution"] = [bz.label(x), bz.label(y), bz.label(lhs_p), bz.label(rhs_p)]
    s.lines.append(f"bz: s({bz.label(x)} . {bz.label(y)}) = {bz.label(lhs_p)} but "
                   f"s({bz.label(y)}) . s({bz.label(x)}) = {bz.label(rhs_p)}")
    left = check_left_topological(bz)
    data["bz_left_witness"] = [bz.label(left.witness[0]), bz.label(left.witness[1])]
    s.lines.append(f"bz: left multiplication by {data['bz_left_witness'][0]} is discontinuous at "
                   f"{data['bz_left_witness'][1]}")
    s.data = data
    return s


HANDLERS = {
    "ellis": cmd_ellis,
    "graph": cmd_graph,
    "condf": cmd_condf,
    "classify": cmd_classify,
    "compare": cmd_compare,
    "counterexamples": cmd_counterexamples,
}

_DEFAULTS = {"model": "bz", "depth": 5, "budget": DEFAULT_BUDGET, "seed": 0, "n": 3, "v_scale": 2,
             "a": "bz", "b": "az"}
_PARAMS = {
    "ellis": {"model", "depth", "budget"},
    "graph": {"model", "depth", "budget"},
    "condf": {"model", "n", "v_scale"},
    "classify": {"model", "depth"},
    "compare": {"a", "b", "depth"},
    "counterexamples": {"seed"},
}


# --- scenarios ---------------------------------------------------------------

def validate_scenario(sc) -> list[dict]:
    if not isinstance(sc, dict) or not isinstance(sc.get("commands", []), list):
        raise ScenarioError("a scenario is an object with a 'commands' list")
    cmds = []
    for i, c in enumerate(sc.get("commands", [])):
        if not isinstance(c, dict) or c.get("cmd") not in HANDLERS:
            raise ScenarioError(f"command {i}: 'cmd' must be one of {', '.join(COMMANDS)}")
        extra = set(c) - _PARAMS[c["cmd"]] - {"cmd", "expect"}
        if extra:
            raise ScenarioError(f"command {i}: unknown parameters {sorted(extra)}")
        if not isinstance(c.get("expect", {}), dict):
            raise ScenarioError(f"command {i}: 'expect' must be an object")
        params = {k: c.get(k, _DEFAULTS[k]) for k in _PARAMS[c["cmd"]]}
        cmds.append({"cmd": c["cmd"], "params": params, "expect": c.get("expect", {})})
    return cmds


def _compare(section: Section, expect: dict) -> None:
    for key in sorted(expect):
        got = section.data.get(key)
        if got != expect[key]:
            section.mismatches.append((key, expect[key], got))


def run(scenario: dict, seed: int | None = None) -> tuple[str, dict, int]:
    """Execute a scenario; returns (text report, machine report, exit code)."""
    cmds = validate_scenario(scenario)
    seed = scenario.get("seed", 0) if seed is None else seed
    random.seed(seed)
    sections = []
    for c in cmds:
        params = dict(c["params"])
        if c["cmd"] == "counterexamples":
            params["seed"] = seed
        sec = HANDLERS[c["cmd"]](**params)
        _compare(sec, c["expect"])
        sections.append(sec)
    name = scenario.get("name", "scenario")
    text = f"# scenario {name} (seed {seed})\n" + "".join("\n" + s.render() for s in sections)
    mismatches = sum(len(s.mismatches) for s in sections)
    text += f"\nsummary: {len(sections)} sections, {mismatches} mismatches\n"
    machine = {
        "scenario": name,
        "seed": seed,
        "sections": [
            {"title": s.title, "anchor": s.anchor, "data": s.data,
             "mismatches": [{"key": k, "expected": w, "got": g} for k, w, g in s.mismatches]}
            for s in sections
        ],
    }
    return text, machine, EXIT_MISMATCH if mismatches else EXIT_OK


def load_bundled(name: str) -> dict:
    try:
        text = resources.files("compactoid.scenarios").joinpath(f"{name}.json").read_text()
    except FileNotFoundError as exc:
        raise ScenarioError(f"no bundled scenario {name!r}") from exc
    return json.loads(text)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc


# --- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", metavar="PATH", help="also write a JSON report")
    common.add_argument("--expect", metavar="PATH", help="JSON object of expected result values")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="largest |k| swept")

    p = argparse.ArgumentParser(prog="compactoid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    for name in ("ellis", "graph", "classify"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--model", default="bz", help="az, bz, E(...) or G(...)")
        sp.add_argument("--depth", type=int, default=5)
    sp = sub.add_parser("condf", parents=[common])
    sp.add_argument("--model", default="bz", choices=["az", "bz"])
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--v-scale", dest="v_scale", type=int, default=2)
    sp = sub.add_parser("compare", parents=[common])
    sp.add_argument("--a", default="bz")
    sp.add_argument("--b", default="az")
    sp.add_argument("--depth", type=int, default=4)
    sub.add_parser("counterexamples", parents=[common])
    sp = sub.add_parser("run", parents=[common])
    sp.add_argument("scenario", help="path to a scenario JSON file, or the name of a bundled one")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            sc = load_bundled(args.scenario) if not args.scenario.endswith(".json") else _load_json(args.scenario)
        else:
            params = {k: getattr(args, k) for k in _PARAMS[args.command] if hasattr(args, k)}
            cmd = {"cmd": args.command, **params}
            if args.expect:
                cmd["expect"] = _load_json(args.expect)
            sc = {"name": args.command, "seed": args.seed, "commands": [cmd]}
        text, machine, code = run(sc, args.seed if args.command != "run" else sc.get("seed", args.seed))
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    sys.stdout.write(text)
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(machine, fh, indent=2, sort_keys=True, ensure_ascii=False)
            fh.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())

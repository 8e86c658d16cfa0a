"""Command-line front end.

Exit codes: 0 verdict computed, 1 error (including parse errors), 2 an
explicitly inconclusive search. JSON output is stable-ordered for diffing.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .classify import (
    SEARCH_TARGETS,
    coregular_obstruction,
    find_forbidden_descendant,
    is_ci,
    is_coregular,
    random_setting,
)
from .core import QuiverSetting, ReductionTrace, is_strongly_connected
from .corpus import (
    SINGLE_SETTING_CHECKS,
    CorpusConfig,
    PROPERTY_NAMES,
    minimize_counterexample,
    run_corpus,
)
from .cycles import f_value, primitive_cycles
from .errors import ParseError, QuiverError
from .io import parse_file, parse_setting, serialize_setting, setting_to_json, to_dot
from .localquiver import Decomposition, glue_subquiver, local_quiver
from .reductions import reduce_fully
from .toric import min_generators

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _load(path: str) -> QuiverSetting:
    return parse_file(path)


def _trace_lines(trace: ReductionTrace) -> list[str]:
    return [f"step {i}: {s.describe()}" for i, s in enumerate(trace, start=1)]


def _trace_json(trace: ReductionTrace) -> list[dict]:
    return [
        {
            "kind": s.kind,
            "params": [list(p) if isinstance(p, tuple) else p for p in s.params],
            "before": setting_to_json(s.before),
            "after": setting_to_json(s.after),
            "free_vars": s.free_vars,
        }
        for s in trace
    ]


def _write_step_dots(trace: ReductionTrace, directory: str) -> None:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for i, s in enumerate(trace, start=1):
        (out / f"step{i:03d}.dot").write_text(to_dot(s.after), encoding="utf-8")


# -- commands -----------------------------------------------------------------


def cmd_parse(args) -> int:
    s = _load(args.file)
    if args.json:
        _emit_json(setting_to_json(s))
    else:
        sys.stdout.write(serialize_setting(s))
    return EXIT_OK


def cmd_dot(args) -> int:
    s = _load(args.file)
    text = to_dot(s)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_cycles(args) -> int:
    s = _load(args.file)
    cycles = primitive_cycles(s)
    f = None
    if s.alpha_is_one() and is_strongly_connected(s):
        f = len(cycles) + s.vertex_count - s.arrow_count - 1
    if args.json:
        payload = {"primitive_cycles": len(cycles)}
        if f is not None:
            payload["f_value"] = f
        if args.list:
            payload["cycles"] = [list(c.arrows) for c in cycles]
        _emit_json(payload)
        return EXIT_OK
    if f is not None:
        print(f"primitive cycles: {len(cycles)}, F(Q): {f}")
    else:
        print(f"primitive cycles: {len(cycles)}")
    if args.list:
        for c in cycles:
            print(" ", ",".join(c.arrows))
    return EXIT_OK


def cmd_reduce(args) -> int:
    s = _load(args.file)
    steps = tuple(x.strip().upper() for x in args.steps.split(",")) if args.steps else ("RI", "RII", "RIII", "RIV")
    res = reduce_fully(s, steps=steps)
    if args.dot:
        _write_step_dots(res.trace, args.dot)
    if args.json:
        _emit_json(
            {
                "terminals": [setting_to_json(t) for t in res.terminals],
                "free_variables": res.free_vars_total,
                "trace": _trace_json(res.trace) if args.trace else len(res.trace),
            }
        )
        return EXIT_OK
    if args.trace:
        for line in _trace_lines(res.trace):
            print(line)
    for t in res.terminals:
        kind = "point" if (t.vertex_count <= 1 and t.arrow_count == 0) else t.describe()
        print(f"terminal: {kind}")
    print(f"free variables: {res.free_vars_total}")
    return EXIT_OK


def cmd_generators(args) -> int:
    s = _load(args.file)
    rep = min_generators(s)
    if args.json:
        _emit_json(rep.to_json())
        return EXIT_OK
    for r in rep.per_multiset:
        if r.e_value == 0 and not args.all:
            continue
        u = "+".join(aid if m == 1 else f"{m}*{aid}" for aid, m in r.multiset)
        weak = "yes" if r.has_weak_partition else "no"
        print(f"U: {u} | two-cycle partitions: {r.strong_partition_count} | weak: {weak} | E(U): {r.e_value}")
    for g in rep.generators:
        print(f"  {g.describe()}  [degree {g.degree}]")
    print(f"total minimal generators: {rep.total}")
    return EXIT_OK


def cmd_classify(args) -> int:
    s = _load(args.file)
    if args.descendants:
        return _classify_descendants(s, args)
    if args.coregular:
        verdict = is_coregular(s)
        obstruction = coregular_obstruction(s)
        payload = {
            "coregular": verdict.answer,
            "terminals": [t.describe() for t in verdict.terminals],
            "free_variables": verdict.free_vars,
            "obstruction": obstruction.status,
        }
        if args.json:
            payload["trace"] = _trace_json(verdict.trace)
            _emit_json(payload)
        else:
            print(f"coregular: {str(verdict.answer).lower()}")
            print(f"terminal factors: {', '.join(t.describe() for t in verdict.terminals)}")
            print(f"obstruction search: {obstruction.status}")
        return EXIT_INCONCLUSIVE if obstruction.status == "inconclusive" else EXIT_OK
    # default: --ci
    if not s.alpha_is_one():
        raise QuiverError("the C.I. verdict needs all dimensions 1; use --coregular instead")
    verdict = is_ci(s)
    rep = min_generators(s) if is_strongly_connected(s) else None
    f = f_value(s) if is_strongly_connected(s) else None
    if args.json:
        payload = {
            "ci": verdict.answer,
            "free_variables": verdict.free_vars,
            "terminals": [t.describe() for t in verdict.terminals],
            "trace": _trace_json(verdict.trace),
        }
        if rep is not None:
            payload["min_generators"] = rep.total
            payload["f_value"] = f
        _emit_json(payload)
        return EXIT_OK
    print(f"CI: {str(verdict.answer).lower()}")
    if rep is not None:
        print(f"certificate: min_generators={rep.total} F={f} (C.I. iff equal)")
    print(f"terminal factors: {', '.join(t.describe() for t in verdict.terminals)}")
    return EXIT_OK


def _classify_descendants(s: QuiverSetting, args) -> int:
    targets = [t.strip().lower() for t in args.descendants.split(",")]
    for t in targets:
        if t not in SEARCH_TARGETS:
            raise QuiverError(f"unknown target {t!r} (known: {', '.join(SEARCH_TARGETS)})")
    r = find_forbidden_descendant(s, targets, budget=args.budget)
    if args.json:
        payload = {"status": r.status, "states_explored": r.states_explored}
        if r.found:
            payload["target"] = r.target
            payload["trace"] = _trace_json(r.trace)
        _emit_json(payload)
    else:
        if r.found:
            print(f"descendant found: {r.target} after {len(r.trace)} step(s)")
            for line in _trace_lines(r.trace):
                print(line)
        else:
            print(f"descendant search: {r.status} ({r.states_explored} states)")
    return EXIT_INCONCLUSIVE if r.status == "inconclusive" else EXIT_OK


def cmd_descendants(args) -> int:
    args.descendants = args.targets
    return _classify_descendants(_load(args.file), args)


def cmd_glue(args) -> int:
    s = _load(args.file)
    subset = [v.strip() for v in args.vertices.split(",") if v.strip()]
    out = glue_subquiver(s, subset)
    if args.json:
        _emit_json(setting_to_json(out))
    else:
        sys.stdout.write(serialize_setting(out))
    return EXIT_OK


def _parse_decomposition(path: str) -> Decomposition:
    parts = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 4 or toks[0] != "mult" or toks[2] != "dims":
            raise ParseError("expected 'mult <a> dims <v>=<k>,...'", lineno)
        try:
            mult = int(toks[1])
            beta = {}
            for item in toks[3].split(","):
                v, k = item.split("=")
                beta[v.strip()] = int(k)
        except ValueError:
            raise ParseError("malformed decomposition entry", lineno) from None
        parts.append((mult, beta))
    return Decomposition.of(parts)


def cmd_local(args) -> int:
    s = _load(args.file)
    dec = _parse_decomposition(args.decomposition)
    out = local_quiver(s, dec)
    if args.json:
        _emit_json(setting_to_json(out))
    else:
        sys.stdout.write(serialize_setting(out))
    return EXIT_OK


def cmd_random(args) -> int:
    s = random_setting(
        args.seed,
        args.vertices,
        args.arrows,
        strongly_connected=args.sc,
        loopless=args.loopless,
        min_degree=args.min_degree,
        max_dim=args.max_dim,
    )
    text = serialize_setting(s)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_corpus(args) -> int:
    cfg = CorpusConfig()
    if args.config:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        cfg = CorpusConfig(**raw)
    if args.seeds is not None:
        cfg.seeds = args.seeds
    if args.seed_start is not None:
        cfg.seed_start = args.seed_start
    if args.max_vertices is not None:
        cfg.max_vertices = args.max_vertices
    if args.max_arrows is not None:
        cfg.max_arrows = args.max_arrows
    if args.budget is not None:
        cfg.budget = args.budget
    if args.properties:
        cfg.properties = tuple(p.strip() for p in args.properties.split(","))

    results = run_corpus(cfg)
    failed = False
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        extra = f", inconclusive={r.inconclusive}" if r.inconclusive else ""
        print(f"{status} {r.name}: {r.checked} checks, {len(r.violations)} violations{extra}")
        if not r.passed:
            failed = True
            v = r.violations[0]
            counterexample = v.setting
            if args.minimize and r.name in SINGLE_SETTING_CHECKS:
                counterexample = minimize_counterexample(v.setting, SINGLE_SETTING_CHECKS[r.name])
            out = Path(args.out_dir or ".") / f"counterexample-{r.name}.qv"
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(serialize_setting(counterexample), encoding="utf-8")
            print(f"  first violation (seed {v.seed}): {v.message}")
            print(f"  counterexample written to {out}")
            print(
                "  reproduce: quiverci corpus "
                f"--properties {r.name} --seed-start {v.seed} --seeds 1"
            )
    return EXIT_ERROR if failed else EXIT_OK


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="quiverci",
        description="Decide smoothness and complete-intersection-ness of quiver "
        "semisimple-moduli, with checkable certificates.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("parse", cmd_parse, help="validate a .qv file and echo its canonical form")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")

    sp = add("dot", cmd_dot, help="emit DOT for a setting")
    sp.add_argument("file")
    sp.add_argument("--out")

    sp = add("cycles", cmd_cycles, help="count primitive cycles and F(Q)")
    sp.add_argument("file")
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--json", action="store_true")

    sp = add("reduce", cmd_reduce, help="run the reduction calculus to termination")
    sp.add_argument("file")
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("--steps", help="comma list among ri,rii,riii,riv")
    sp.add_argument("--dot", metavar="DIR", help="write one DOT file per step")
    sp.add_argument("--json", action="store_true")

    sp = add("generators", cmd_generators, help="minimal generators of the relations ideal")
    sp.add_argument("file")
    sp.add_argument("--all", action="store_true", help="also list multisets with E(U)=0")
    sp.add_argument("--json", action="store_true")

    sp = add("classify", cmd_classify, help="top-level verdicts with certificates")
    sp.add_argument("file")
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--ci", action="store_true", help="complete-intersection verdict (default)")
    group.add_argument("--coregular", action="store_true")
    group.add_argument("--descendants", metavar="TARGETS", help="comma list among g1,g2,c1")
    sp.add_argument("--budget", type=int, default=100_000)
    sp.add_argument("--json", action="store_true")

    sp = add("descendants", cmd_descendants, help="bounded forbidden-descendant search")
    sp.add_argument("file")
    sp.add_argument("--targets", default="g1,g2")
    sp.add_argument("--budget", type=int, default=100_000)
    sp.add_argument("--json", action="store_true")

    sp = add("glue", cmd_glue, help="glue a strongly connected vertex subset")
    sp.add_argument("file")
    sp.add_argument("--vertices", required=True, metavar="A,B,...")
    sp.add_argument("--json", action="store_true")

    sp = add("local", cmd_local, help="local quiver of a decomposition file")
    sp.add_argument("file")
    sp.add_argument("--decomposition", required=True, metavar="FILE")
    sp.add_argument("--json", action="store_true")

    sp = add("random", cmd_random, help="deterministic random setting")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--vertices", type=int, required=True)
    sp.add_argument("--arrows", type=int, required=True)
    sp.add_argument("--sc", action="store_true", help="require strong connectivity")
    sp.add_argument("--loopless", action="store_true")
    sp.add_argument("--min-degree", type=int, default=0)
    sp.add_argument("--max-dim", type=int, default=1)
    sp.add_argument("--out")

    sp = add("corpus", cmd_corpus, help="run the property suites over seeded corpora")
    sp.add_argument("--config", help="JSON file with CorpusConfig fields")
    sp.add_argument("--seeds", type=int)
    sp.add_argument("--seed-start", type=int)
    sp.add_argument("--max-vertices", type=int)
    sp.add_argument("--max-arrows", type=int)
    sp.add_argument("--budget", type=int)
    sp.add_argument("--properties", help=f"comma list among {','.join(PROPERTY_NAMES)}")
    sp.add_argument("--minimize", action="store_true", help="shrink counterexamples")
    sp.add_argument("--out-dir")

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except QuiverError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

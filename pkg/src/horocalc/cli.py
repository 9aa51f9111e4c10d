"""Command-line surface: deterministic JSON reports over the library ops.

Every report embeds the schema version, tool version, group hash, seed and
budget outcomes, so repeated runs with the same configuration are byte
identical. Exit codes: 0 ok, 2 typed domain error, 3 budget, 4 parse.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import BudgetExceededError, HorocalcError, ParseError
from .groups import MarkedGroup, load_group, parse_word, standard_group
from .metric import DEFAULT_STATE_CAP, DistanceTable, ball

SCHEMA = 1


def _jsonable(obj):
    """Recursively convert report objects into deterministic JSON values."""
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (frozenset, set)):
        return sorted(_jsonable(v) for v in obj)
    if hasattr(obj, "__dataclass_fields__"):
        return {k: _jsonable(getattr(obj, k)) for k in obj.__dataclass_fields__}
    return obj


def _emit(args, result: dict, group: MarkedGroup | None, budgets: dict) -> None:
    doc = {
        "schema": SCHEMA,
        "tool": "horocalc",
        "version": __version__,
        "command": args.command,
        "seed": args.seed,
        "threads": args.threads,
        "group_hash": group.group_hash if group is not None else None,
        "budgets": _jsonable(budgets),
        "result": _jsonable(result),
    }
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.out and args.format == "json":
        Path(args.out).write_text(text)
        sys.stdout.write(json.dumps({"written": args.out}, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _emit_csv(args, rows: list[dict]) -> None:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _jsonable(v) for k, v in row.items()})
    if args.out:
        Path(args.out).write_text(buf.getvalue())
        sys.stdout.write(json.dumps({"written": args.out}, sort_keys=True) + "\n")
    else:
        sys.stdout.write(buf.getvalue())


def _load_group_arg(args, default_preset: str | None = None) -> MarkedGroup:
    if getattr(args, "group", None):
        path = Path(args.group)
        if not path.exists() and os.sep not in str(args.group):
            # allow preset names through --group for convenience
            try:
                return standard_group(str(args.group))
            except ParseError:
                pass
        return load_group(path)
    if default_preset is not None:
        return standard_group(default_preset)
    raise ParseError("this command needs --group (file path or preset name)")


def _parse_ray(text: str):
    from .horoboundary import DigitizedRay, PeriodicRay

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"ray spec is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("ray spec must be a JSON object")
    if "digitized" in doc:
        a, b = doc["digitized"]
        return DigitizedRay((int(a), int(b)))
    if "periodic" in doc:
        body = doc["periodic"]
        return PeriodicRay(parse_word(body.get("prefix", "")), parse_word(body["block"]))
    raise ParseError("ray spec needs a 'digitized' or 'periodic' key")


def _parse_pair(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(",")
        return (int(a), int(b))
    except ValueError as exc:
        raise ParseError(f"expected 'a,b' integers, got {text!r}") from exc


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.split(",") if tok]


# -- ball cache ---------------------------------------------------------


def _cache_dir(args) -> Path | None:
    cache = args.cache or os.environ.get("HOROCALC_CACHE")
    if not cache:
        return None
    path = Path(cache)
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_ball_jsonl(table: DistanceTable, path: Path) -> None:
    with open(path, "w") as fh:
        fh.write(json.dumps({"schema": SCHEMA, "kind": "ball-cache",
                             "group_hash": table.group_hash,
                             "radius": table.radius}, sort_keys=True) + "\n")
        for key in sorted(table.entries):
            fh.write(json.dumps({"key": list(key), "dist": table.entries[key]},
                                sort_keys=True) + "\n")


def read_ball_jsonl(path: Path, group_hash: str) -> DistanceTable | None:
    """Load a cached ball; None when missing or invalidated by hash mismatch."""
    try:
        with open(path) as fh:
            header = json.loads(fh.readline())
            if header.get("group_hash") != group_hash or header.get("kind") != "ball-cache":
                return None
            entries = {}
            for line in fh:
                rec = json.loads(line)
                entries[tuple(rec["key"])] = rec["dist"]
            return DistanceTable(group_hash, header["radius"], entries)
    except (OSError, json.JSONDecodeError, KeyError):
        return None


def cached_ball(group: MarkedGroup, radius: int, cache_dir: Path | None,
                max_entries: int | None = None) -> tuple[DistanceTable, str]:
    """Ball with JSONL cache reuse; returns (table, "hit"|"miss"|"nocache")."""
    if cache_dir is None:
        return ball(group, radius, max_entries=max_entries), "nocache"
    for have in range(radius, radius + 16):
        path = cache_dir / f"{group.group_hash[:16]}_r{have}.jsonl"
        if path.exists():
            table = read_ball_jsonl(path, group.group_hash)
            if table is not None and table.radius >= radius:
                entries = {k: d for k, d in table.entries.items() if d <= radius}
                return DistanceTable(group.group_hash, radius, entries), "hit"
    table = ball(group, radius, max_entries=max_entries)
    write_ball_jsonl(table, cache_dir / f"{group.group_hash[:16]}_r{radius}.jsonl")
    return table, "miss"


# -- subcommands --------------------------------------------------------


DEFAULT_RADIUS_BUDGET = {"abelian": 60, "heisenberg": 30, "cartan": 16}


def cmd_ball(args):
    group = _load_group_arg(args)
    budget = DEFAULT_RADIUS_BUDGET[group.kind]
    if args.radius > budget and args.max_entries is None:
        raise BudgetExceededError(
            f"radius {args.radius} exceeds the default budget {budget} for "
            f"{group.kind} groups; pass --max-entries to override with a memory cap"
        )
    table, cache_state = cached_ball(group, args.radius, _cache_dir(args),
                                     max_entries=args.max_entries)
    if args.out and args.format == "jsonl":
        write_ball_jsonl(table, Path(args.out))
    result = {
        "radius": table.radius,
        "size": len(table),
        "sphere_sizes": table.sphere_sizes(),
        "cache": cache_state,
        "out": args.out if args.format == "jsonl" else None,
    }
    _emit(args, result, group, {"radius": args.radius, "max_entries": args.max_entries})
    return 0


def cmd_dist(args):
    from .metric import word_length

    group = _load_group_arg(args)
    word = parse_word(args.word)
    g = group.evaluate(word)
    budget = args.budget if args.budget is not None else len(word)
    res = word_length(group, g, budget=budget, state_cap=args.state_cap)
    result = {
        "word": list(word),
        "length": res.length,
        "status": res.status,
        "certified": res.status == "exact",
        "lower_bound": res.lower_bound,
    }
    _emit(args, result, group, {"budget": budget, "state_cap": args.state_cap,
                                "outcome": res.status})
    return 0


def cmd_geodesic_check(args):
    from .metric import geodesic_certificate_by_face, is_geodesic_word

    group = _load_group_arg(args)
    word = parse_word(args.word)
    cert = geodesic_certificate_by_face(group, word)
    geodesic = cert.certified or is_geodesic_word(group, word, state_cap=args.state_cap)
    result = {
        "word": list(word),
        "geodesic": geodesic,
        "face_certified": cert.certified,
        "face": None,
    }
    if cert.certified and cert.face is not None:
        from .metric import projected_polytope

        poly = projected_polytope(group)
        result["face"] = [list(p) for p in sorted(poly.points[i] for i in cert.face.members)]
    _emit(args, result, group, {"state_cap": args.state_cap})
    return 0


def cmd_ray(args):
    from .horoboundary import ray_prefix, validate_ray

    group = _load_group_arg(args)
    spec = _parse_ray(args.ray)
    letters = ray_prefix(spec, args.length)
    status = validate_ray(group, spec, min(args.length, 64), state_cap=args.state_cap)
    ab = group.evaluate(letters).abelianized()
    result = {
        "spec": spec.describe(),
        "letters": list(letters),
        "abelianization": list(ab),
        "geodesic_validation": status,
    }
    _emit(args, result, group, {"length": args.length})
    return 0


def cmd_busemann(args):
    from .horoboundary import busemann_eval

    group = _load_group_arg(args)
    spec = _parse_ray(args.ray)
    word = parse_word(args.element)
    est = busemann_eval(group, spec, word, horizon=args.horizon, state_cap=args.state_cap)
    result = {
        "spec": spec.describe(),
        "element": list(word),
        "estimate": est,
    }
    _emit(args, result, group, {"horizon": args.horizon, "state_cap": args.state_cap,
                                "exhausted": est.exhausted})
    return 0


def cmd_compare_rays(args):
    from .horoboundary import reduced_equiv, same_busemann

    group = _load_group_arg(args)
    s1 = _parse_ray(args.ray1)
    s2 = _parse_ray(args.ray2)
    if args.criterion == "switch1b":
        res = same_busemann(group, s1, s2, args.n_max, args.m_max, state_cap=args.state_cap)
    elif args.criterion == "switch2b":
        res = reduced_equiv(group, s1, s2, args.slack, args.n_max, args.m_max,
                            state_cap=args.state_cap)
    else:
        raise ParseError("criterion must be switch1b or switch2b")
    result = {"ray1": s1.describe(), "ray2": s2.describe(), "criterion": args.criterion,
              "comparison": res, "verified_up_to": [args.n_max, args.m_max]}
    _emit(args, result, group, {"n_max": args.n_max, "m_max": args.m_max,
                                "slack": args.slack, "outcome": res.status})
    return 0


def cmd_census(args):
    from .classifier import orbit_census

    group = _load_group_arg(args)
    rep = orbit_census(group)
    result = {"mode": rep.mode, "orbits": rep.count,
              "keys": [_census_key_doc(k) for k in rep.orbit_keys]}
    _emit(args, result, group, {})
    return 0


def _census_key_doc(key):
    if key[0] == "noncomm":
        return {"type": "noncommutative", "face": [list(p) for p in key[1]]}
    return {"type": "commutative", "face": [list(p) for p in key[1]],
            "full_face": [list(p) for p in key[2]] if key[2] != ("improper",) else "improper"}


def cmd_anagram(args):
    from .classifier import anagram_set

    group = _load_group_arg(args)
    word = parse_word(args.word)
    res = anagram_set(group, word, max_states=args.max_states)
    result = {"word": list(word), "offsets": sorted(res.offsets), "delta": res.delta}
    _emit(args, result, group, {"max_states": args.max_states})
    return 0


def cmd_cartan_audit(args):
    from .cartan import bound_audit_lower, bound_audit_upper

    group = standard_group("cartan")
    u = _parse_pair(args.direction)
    if args.audit == "lower":
        rep = bound_audit_lower(u, args.n, args.delta, mode=args.mode,
                                samples=args.samples, seed=args.seed)
        if args.format == "csv":
            rows = [
                {
                    "delta": r["delta"],
                    "length": r["length"],
                    "words": r["words"],
                    "max_pairing": Fraction(r["max6"], 6),
                    "reference": Fraction(rep.reference6, 6),
                }
                for r in rep.per_delta
            ]
            _emit_csv(args, rows)
            return 0
        _emit(args, {"lower": rep}, group, {"n": args.n, "delta": args.delta,
                                            "mode": args.mode})
        return 0
    rep = bound_audit_upper(u, parse_word(args.element), _parse_range(args.n_range),
                            state_cap=args.state_cap)
    if args.format == "csv":
        _emit_csv(args, rep.rows)
        return 0
    _emit(args, {"upper": rep}, group, {"n_range": args.n_range,
                                        "state_cap": args.state_cap,
                                        "complete": rep.complete})
    return 0


def cmd_distinctness(args):
    from .cartan import distinctness_witness

    group = standard_group("cartan")
    rep = distinctness_witness(_parse_pair(args.u), _parse_pair(args.v),
                               powers=_parse_range(args.powers), horizon=args.horizon,
                               state_cap=args.state_cap)
    _emit(args, {"distinctness": rep}, group,
          {"horizon": args.horizon, "state_cap": args.state_cap})
    return 0


def cmd_stabilizer(args):
    from .cartan import stabilizer_escape

    group = standard_group("cartan")
    rep = stabilizer_escape(_parse_pair(args.u), parse_word(args.element),
                            powers=_parse_range(args.powers), horizon=args.horizon,
                            state_cap=args.state_cap, m_override=args.m)
    _emit(args, {"stabilizer_escape": rep}, group,
          {"horizon": args.horizon, "state_cap": args.state_cap,
           "complete": rep.complete})
    return 0


def cmd_subfinsler(args):
    from .subfinsler import (
        SymmetricPolygon,
        auto_polygon,
        class_fingerprint,
        discrete_vs_continuous,
    )

    group = _load_group_arg(args, default_preset="h1")
    if args.polygon == "auto":
        polygon = auto_polygon(group)
    else:
        polygon = SymmetricPolygon(json.loads(args.polygon))
    cls = _parse_class(args.cls)
    result = {"polygon": [list(v) for v in polygon.vertices], "class": args.cls}
    if args.fingerprint is not None:
        fp = class_fingerprint(group, polygon, cls, args.fingerprint)
        result["fingerprint"] = [[list(k), v] for k, v in fp]
    if args.compare:
        rep = discrete_vs_continuous(group, polygon, cls, sequence=args.compare,
                                     n=args.n, radius=args.window)
        result["comparison"] = rep
    _emit(args, result, group, {"window": args.window, "n": args.n})
    return 0


def _parse_class(text: str):
    from .subfinsler import Mixed, NonVertical, Vertical

    if text == "vertical":
        return Vertical()
    if text.startswith("nonvertical:"):
        k, r = text.split(":", 1)[1].split(",")
        return NonVertical(int(k), Fraction(r))
    if text.startswith("mixed:"):
        parts = text.split(":", 1)[1].split(",")
        i, r = int(parts[0]), Fraction(parts[1])
        orientation = parts[2] if len(parts) > 2 else "le"
        variant = int(parts[3]) if len(parts) > 3 else 1
        return Mixed(i, r, orientation, variant)
    raise ParseError(
        "class must be vertical, nonvertical:k,r or mixed:i,r[,le|ge][,1|2]"
    )


def cmd_selftest(args):
    import random

    from .classifier import anagram_set
    from .groups import cartan_word_element
    from .metric import ball as _ball
    from .reference import brute_force_anagram_offsets, naive_ball
    from .winding import cartan_path_oracle

    rng = random.Random(args.seed)
    checks = {}

    h1 = standard_group("h1")
    ca = standard_group("cartan")

    ok = True
    for G in (h1, ca):
        for _ in range(300):
            w = [rng.choice(G.labels) for _ in range(rng.randint(0, 8))]
            g = G.evaluate(w)
            h = G.evaluate([rng.choice(G.labels) for _ in range(rng.randint(0, 8))])
            k = G.evaluate([rng.choice(G.labels) for _ in range(rng.randint(0, 8))])
            ok &= (g * h) * k == g * (h * k)
            ok &= (g * g.inverse()).is_identity()
    checks["group_laws"] = ok

    ok = True
    for _ in range(100):
        w = [rng.choice(ca.labels) for _ in range(rng.randint(0, 10))]
        g = cartan_word_element(w)
        e, a, b = cartan_path_oracle(w)
        ok &= g.endpoint == e and g.area == a and g.barycenter == b
    checks["cartan_winding_oracle"] = ok

    checks["ball_vs_naive_h1"] = _ball(h1, 4).entries == naive_ball(h1, 4)
    checks["ball_vs_naive_cartan"] = _ball(ca, 3).entries == naive_ball(ca, 3)

    ok = True
    for _ in range(25):
        w = tuple(rng.choice(h1.labels) for _ in range(rng.randint(0, 7)))
        dp = anagram_set(h1, w).offsets
        bf = brute_force_anagram_offsets(h1, w) if w else {0}
        ok &= dp == frozenset(bf)
    checks["anagram_dp_vs_bruteforce"] = ok

    passed = all(checks.values())
    _emit(args, {"passed": passed, "checks": checks}, None, {})
    return 0 if passed else 2


# -- parser -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horocalc",
        description="exact horofunction and Busemann computations on nilpotent Cayley graphs",
    )
    parser.add_argument("--version", action="version", version=f"horocalc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, group_required=True):
        p.add_argument("--group", help="group JSON file or preset name")
        p.add_argument("--cache", help="ball cache directory (env HOROCALC_CACHE)")
        p.add_argument("--out", help="write the report/export to this path")
        p.add_argument("--format", default="json", choices=["json", "csv", "jsonl"])
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1,
                       help="cap on internal parallelism (current ops are sequential)")
        p.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)

    p = sub.add_parser("ball", help="exact metric ball")
    common(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--max-entries", type=int, default=None)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("dist", help="exact word length of a word's value")
    common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("geodesic-check", help="is the word geodesic?")
    common(p)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_geodesic_check)

    p = sub.add_parser("ray", help="materialize a ray prefix")
    common(p)
    p.add_argument("--ray", required=True)
    p.add_argument("--length", type=int, default=20)
    p.set_defaults(func=cmd_ray)

    p = sub.add_parser("busemann", help="monotone Busemann estimate")
    common(p)
    p.add_argument("--ray", required=True)
    p.add_argument("--element", required=True)
    p.add_argument("--horizon", type=int, default=20)
    p.set_defaults(func=cmd_busemann)

    p = sub.add_parser("compare-rays", help="switching criteria for two rays")
    common(p)
    p.add_argument("--ray1", required=True)
    p.add_argument("--ray2", required=True)
    p.add_argument("--criterion", default="switch1b", choices=["switch1b", "switch2b"])
    p.add_argument("--slack", type=int, default=0)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--m-max", type=int, default=30)
    p.set_defaults(func=cmd_compare_rays)

    p = sub.add_parser("census", help="orbit census over letter subsets")
    common(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("anagram", help="anagram offset set of a word")
    common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--max-states", type=int, default=500_000)
    p.set_defaults(func=cmd_anagram)

    p = sub.add_parser("cartan-audit", help="cube-root bound audits")
    common(p, group_required=False)
    p.add_argument("--audit", default="lower", choices=["lower", "upper"])
    p.add_argument("--direction", required=True, help="a,b")
    p.add_argument("--n", type=int, default=6, help="ray prefix length (lower audit)")
    p.add_argument("--delta", type=int, default=2)
    p.add_argument("--mode", default="exhaustive", choices=["exhaustive", "search"])
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--element", default="x y x~ y~", help="central word (upper audit)")
    p.add_argument("--n-range", default="2..8", help="ray lengths (upper audit)")
    p.set_defaults(func=cmd_cartan_audit)

    p = sub.add_parser("distinctness", help="separating central element evidence")
    common(p, group_required=False)
    p.add_argument("--u", required=True, help="a,b")
    p.add_argument("--v", required=True, help="a,b")
    p.add_argument("--powers", default="1")
    p.add_argument("--horizon", type=int, default=16)
    p.set_defaults(func=cmd_distinctness)

    p = sub.add_parser("stabilizer", help="stabilizer escape evidence")
    common(p, group_required=False)
    p.add_argument("--u", required=True, help="a,b")
    p.add_argument("--element", required=True, help="word for g")
    p.add_argument("--powers", default="1")
    p.add_argument("--horizon", type=int, default=12)
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(func=cmd_stabilizer)

    p = sub.add_parser("subfinsler", help="continuous boundary classes vs windows")
    common(p)
    p.add_argument("--polygon", default="auto")
    p.add_argument("--class", dest="cls", default="vertical")
    p.add_argument("--compare", default=None,
                   help="central | vertex:LABEL | edge:L1,L2,p,q")
    p.add_argument("--window", type=int, default=8)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--fingerprint", type=int, default=None)
    p.set_defaults(func=cmd_subfinsler)

    p = sub.add_parser("selftest", help="oracle-equivalence suites")
    common(p, group_required=False)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"horocalc: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except ParseError as exc:
        print(f"horocalc: parse error: {exc}", file=sys.stderr)
        return 4
    except HorocalcError as exc:
        print(f"horocalc: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())

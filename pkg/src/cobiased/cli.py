"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (bad input content, failed
precondition, exceeded guard), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import bonds as bd
from .errors import CobiasError, NotLinearError
from .gains import (
    AdditiveGroup,
    class_from_gains,
    class_from_labeling,
    format_gains,
    is_realizable_over,
    normalize,
    parse_gains,
    parse_labeling,
    shifting_equivalent,
    bonds_agree,
)
from .graph import Multigraph, format_graph, parse_graph
from .join import JoinMatroid, Variant, enumerate_ljoins
from .planar import (
    FiniteGroup,
    format_multiplicative_gains,
    parse_multiplicative_gains,
    parse_rotation,
    planar_class_from_gains,
    planar_realizability,
)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _graph(path: str) -> Multigraph:
    return parse_graph(_read(path))


def _class(g: Multigraph, path: str) -> bd.LinearClass:
    return bd.parse_class(_read(path), g)


def _edges(xs) -> list[int]:
    return sorted(xs)


def _class_json(lc: bd.LinearClass) -> dict[str, Any]:
    return {"trivial": lc.trivial, "bonds": [list(b.key) for b in lc.sorted_bonds]}


def _elements(jm: JoinMatroid, xs) -> list[int | str]:
    return ["*" if x == jm.e0 else x for x in sorted(xs)]


Output = tuple[str, Any]  # (text, json payload)


# --- commands ---------------------------------------------------------------------------


def cmd_bonds(a: argparse.Namespace) -> Output:
    g = _graph(a.graph)
    bs = bd.enumerate_bonds(g, max_vertices=a.max_vertices)
    text = "".join(f"bond {' '.join(map(str, b.key))}\n" for b in bs)
    return text, {"bonds": [{"edges": list(b.key), "side": sorted(b.side)} for b in bs]}


def cmd_tribonds(a: argparse.Namespace) -> Output:
    g = _graph(a.graph)
    ts = bd.enumerate_tribonds(g, max_vertices=a.max_vertices)
    lines = [f"tribond {' '.join(map(str, _edges(t.edges)))} parts {'|'.join(','.join(map(str, sorted(p))) for p in t.parts)}" for t in ts]
    payload: dict[str, Any] = {
        "tribonds": [{"edges": _edges(t.edges), "parts": [sorted(p) for p in t.parts],
                      "bonds": [list(b.key) for b in t.bonds]} for t in ts]
    }
    if a.dibonds:
        ds = bd.enumerate_dibonds(g, max_vertices=a.max_vertices)
        lines += [f"dibond {' '.join(map(str, _edges(d.edges)))} {d.kind.value}" for d in ds]
        payload["dibonds"] = [{"edges": _edges(d.edges), "kind": d.kind.value,
                               "bonds": [list(b.key) for b in d.bonds]} for d in ds]
    return "".join(x + "\n" for x in lines), payload


def cmd_validate_class(a: argparse.Namespace) -> Output:
    g = _graph(a.graph)
    lc = _class(g, a.cls)
    additive, witness = bd.is_additive(g, lc)
    text = f"linear bonds={len(lc)} trivial={'yes' if lc.trivial else 'no'} additive={'yes' if additive else 'no'}\n"
    if witness is not None:
        text += f"odd tribond {' '.join(map(str, _edges(witness.edges)))}\n"
    payload = {"linear": True, **_class_json(lc), "additive": additive,
               "odd_tribond": None if witness is None else _edges(witness.edges)}
    return text, payload


def cmd_enumerate_classes(a: argparse.Namespace) -> Output:
    g = _graph(a.graph)
    classes = [lc for lc in bd.enumerate_linear_classes(g, max_bonds=a.max_bonds) if not (a.nontrivial and lc.trivial)]
    lines = ["class " + " ".join(str(b) for b in lc.sorted_bonds) for lc in classes]
    lines = sorted(lines)
    lines.append(f"count {len(classes)}")
    payload = {"count": len(classes), "classes": sorted(([list(b.key) for b in lc.sorted_bonds] for lc in classes))}
    return "".join(x.rstrip() + "\n" for x in lines), payload


SHOW = ("bases", "circuits", "cocircuits", "rank")


def cmd_matroid(a: argparse.Namespace) -> Output:
    g = _graph(a.graph)
    jm = JoinMatroid(g, _class(g, a.cls), Variant(a.variant))
    show = a.show or list(SHOW)
    payload: dict[str, Any] = {"variant": jm.variant.value, "size": len(jm.ground)}
    for what in show:
        if what == "rank":
            payload["rank"] = jm.rank(jm.ground)
        else:
            payload[what] = [_elements(jm, x) for x in getattr(jm, what)()]
    return jm.dump(show), payload


def cmd_minor(a: argparse.Namespace) -> Output:
    g = _graph(a.graph)
    lc = _class(g, a.cls)
    minor = bd.contract_class if a.op == "contract" else bd.delete_class
    h, sub = minor(g, lc, a.edge)
    text = format_graph(h) + bd.format_class(sub)
    payload = {"graph": {"n": h.n, "edges": [list(e) for e in h.edges]}, "class": _class_json(sub)}
    return text, payload


def cmd_ljoins(a: argparse.Namespace) -> Output:
    g = _graph(a.graph)
    js = enumerate_ljoins(g, _class(g, a.cls))
    return "".join(f"ljoin {' '.join(map(str, _edges(j)))}\n" for j in js), {"ljoins": [_edges(j) for j in js]}


def cmd_gains_class(a: argparse.Namespace) -> Output:
    g = _graph(a.graph)
    lc = class_from_gains(parse_gains(_read(a.gains), g))
    return bd.format_class(lc), _class_json(lc)


def cmd_labeling_class(a: argparse.Namespace) -> Output:
    g = _graph(a.graph)
    lc = class_from_labeling(parse_labeling(_read(a.labels), g))
    return bd.format_class(lc), _class_json(lc)


def _forest(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad forest {text!r}") from None


def cmd_normalize(a: argparse.Namespace) -> Output:
    g = _graph(a.graph)
    ga = normalize(parse_gains(_read(a.gains), g), _forest(a.forest))
    payload = {"group": str(ga.group), "gains": [list(x) for x in ga.gains]}
    return format_gains(ga), payload


def cmd_equivalent(a: argparse.Namespace) -> Output:
    g = _graph(a.graph)
    ga1, ga2 = parse_gains(_read(a.gains1), g), parse_gains(_read(a.gains2), g)
    by_normal_form = shifting_equivalent(ga1, ga2)
    by_bonds = bonds_agree(ga1, ga2)
    if by_normal_form != by_bonds:  # pragma: no cover
        raise AssertionError("equivalence criteria disagree")
    word = "equivalent" if by_normal_form else "not-equivalent"
    return word + "\n", {"equivalent": by_normal_form}


def cmd_realizable(a: argparse.Namespace) -> Output:
    g = _graph(a.graph)
    lc = _class(g, a.cls)
    if a.planar:
        rs = parse_rotation(_read(a.planar), g)
        r = planar_realizability(rs, lc, FiniteGroup.parse(a.group), max_space=a.max_space)
        witness = None if r.witness is None else format_multiplicative_gains(r.witness)
    else:
        r = is_realizable_over(g, lc, AdditiveGroup.parse(a.group), max_space=a.max_space)
        witness = None if r.witness is None else format_gains(r.witness)
    payload = {"realizable": r.realizable, "searched": r.searched, "nodes": r.nodes,
               "witness": None if witness is None else witness.splitlines()}
    if witness is None:
        return f"not-realizable searched={r.searched}\n", payload
    return f"realizable searched={r.searched}\n" + witness, payload


def cmd_planar_class(a: argparse.Namespace) -> Output:
    g = _graph(a.graph)
    rs = parse_rotation(_read(a.rotation), g)
    lc = planar_class_from_gains(rs, parse_multiplicative_gains(_read(a.gains), g))
    return bd.format_class(lc), _class_json(lc)


def cmd_verify(a: argparse.Namespace) -> Output:
    from .verify import CRITERIA, Settings, run_criteria

    if a.corpus != "default":
        raise UsageError("only the default corpus is available")
    numbers = sorted(CRITERIA) if not a.criteria else _criteria(a.criteria)
    results = run_criteria(numbers, Settings(seed=a.seed, random_classes=a.random_classes))
    lines = [r.line(a.timings) for r in results]
    for r in results:
        lines += [f"  {f}" for f in r.failures]
    passed = sum(r.passed for r in results)
    lines.append(f"summary {passed}/{len(results)} criteria passed")
    payload = {"criteria": [{"number": r.number, "title": r.title, "passed": r.passed, "checks": r.checks,
                             "failures": r.failures, "notes": r.notes} for r in results]}
    if passed != len(results):
        raise _Failed("\n".join(lines) + "\n", payload)
    return "\n".join(lines) + "\n", payload


def _criteria(text: str) -> list[int]:
    from .verify import CRITERIA

    try:
        nums = sorted({int(x) for x in text.split(",")})
    except ValueError:
        raise UsageError(f"bad criteria list {text!r}") from None
    if any(k not in CRITERIA for k in nums):
        raise UsageError(f"criteria must be among {sorted(CRITERIA)}")
    return nums


class _Failed(Exception):
    """Verification ran to completion but something failed; output is still printed."""

    def __init__(self, text: str, payload: Any):
        super().__init__("verification failed")
        self.text, self.payload = text, payload


# --- parser --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")

    p = argparse.ArgumentParser(prog="cobiased", description="Cobiased graphs and their join matroids.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable[[argparse.Namespace], Output], help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("bonds", cmd_bonds, "list the bonds of a graph")
    sp.add_argument("graph")
    sp.add_argument("--max-vertices", type=int, default=bd.MAX_COMPONENT_VERTICES)

    sp = add("tribonds", cmd_tribonds, "list tribonds (and optionally dibonds)")
    sp.add_argument("graph")
    sp.add_argument("--dibonds", action="store_true")
    sp.add_argument("--max-vertices", type=int, default=bd.MAX_COMPONENT_VERTICES)

    sp = add("validate-class", cmd_validate_class, "check that a bond set is a linear class")
    sp.add_argument("graph")
    sp.add_argument("cls", metavar="class")

    sp = add("enumerate-classes", cmd_enumerate_classes, "list every linear class")
    sp.add_argument("graph")
    sp.add_argument("--nontrivial", action="store_true")
    sp.add_argument("--max-bonds", type=int, default=bd.MAX_CLASS_BONDS)

    sp = add("matroid", cmd_matroid, "bases, circuits, cocircuits and rank of J0 or J")
    sp.add_argument("graph")
    sp.add_argument("cls", metavar="class")
    sp.add_argument("--variant", choices=[v.value for v in Variant], default="j")
    sp.add_argument("--show", action="append", choices=SHOW)

    sp = add("minor", cmd_minor, "delete or contract an edge of a cobiased graph")
    sp.add_argument("graph")
    sp.add_argument("cls", metavar="class")
    sp.add_argument("--op", choices=["delete", "contract"], required=True)
    sp.add_argument("--edge", type=int, required=True)

    sp = add("ljoins", cmd_ljoins, "minimal forests with cobalanced partition")
    sp.add_argument("graph")
    sp.add_argument("cls", metavar="class")

    sp = add("gains-class", cmd_gains_class, "class of bonds with zero gain")
    sp.add_argument("graph")
    sp.add_argument("gains")

    sp = add("labeling-class", cmd_labeling_class, "class of bonds with zero label sum")
    sp.add_argument("graph")
    sp.add_argument("labels")

    sp = add("normalize", cmd_normalize, "shift gains to vanish off a maximal forest")
    sp.add_argument("graph")
    sp.add_argument("gains")
    sp.add_argument("--forest", help="comma-separated edge ids (default: the BFS forest)")

    sp = add("equivalent", cmd_equivalent, "decide shifting equivalence of two gain files")
    sp.add_argument("graph")
    sp.add_argument("gains1")
    sp.add_argument("gains2")

    sp = add("realizable", cmd_realizable, "search for gains realizing a class")
    sp.add_argument("graph")
    sp.add_argument("cls", metavar="class")
    sp.add_argument("--group", required=True, help="Z/n1xZ/n2..., or S3 with --planar")
    sp.add_argument("--planar", metavar="ROTATION", help="search multiplicative gains on this embedding")
    sp.add_argument("--max-space", type=int, default=10**7)

    sp = add("planar-class", cmd_planar_class, "class of a multiplicative gain map on a plane graph")
    sp.add_argument("graph")
    sp.add_argument("rotation")
    sp.add_argument("gains")

    sp = add("verify", cmd_verify, "run the acceptance criteria")
    sp.add_argument("--corpus", default="default")
    sp.add_argument("--criteria", help="comma-separated criterion numbers")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--random-classes", type=int, default=500)
    sp.add_argument("--timings", action="store_true", help="append wall-clock seconds (breaks byte-identical output)")
    return p


def _emit(text: str, payload: Any, as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, payload = args.fn(args)
    except UsageError as exc:
        print(f"cobiased: {exc}", file=sys.stderr)
        return 2
    except _Failed as exc:
        _emit(exc.text, exc.payload, args.json)
        return 1
    except NotLinearError as exc:
        print(f"cobiased: not a linear class: {exc}", file=sys.stderr)
        return 1
    except CobiasError as exc:
        print(f"cobiased: {exc}", file=sys.stderr)
        return 1
    _emit(text, payload, args.json)
    return 0


if __name__ == "__main__":
    sys.exit(main())

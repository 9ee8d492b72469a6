"""Exit-criteria runners over the default corpus.

Each criterion returns a :class:`CriterionResult`; nothing here raises on a
mismatch, so a report always covers every criterion.  All randomness is
seeded.
"""

from __future__ import annotations

import itertools
import os
import random
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

from .bonds import (
    LinearClass,
    OrientedBond,
    contract_class,
    delete_class,
    enumerate_bonds,
    enumerate_dibonds,
    enumerate_linear_classes,
    enumerate_tribonds,
    even_split_class,
    format_class,
    is_additive,
    nonseparating_class,
    random_linear_class,
    split_blocks,
    two_point_class,
    as_bond,
)
from .corpus import DEFAULT_CORPUS, ROTATIONS, k24_class, rotation
from .errors import (
    CobiasError,
    IsthmusDeletionError,
    LoopContractionError,
    UncobalancedIsthmusError,
)
from .gains import (
    AdditiveGroup,
    GainAssignment,
    QuotientLabeling,
    bond_gain,
    bond_values,
    bonds_agree,
    class_from_gains,
    class_from_labeling,
    cycle_shift,
    format_gains,
    format_labeling,
    gain_minor,
    gains_from_labeling,
    is_realizable_over,
    labeling_from_gains,
    labeling_minor,
    labeling_value,
    normalize,
    oriented_cycle,
    random_gains,
    random_labeling,
    scalar_invariance_check,
    shifting_equivalent,
    tree_gains_from_bonds,
)
from .graph import Multigraph, enumerate_cycles, enumerate_forests, format_graph, is_isthmus
from .join import JoinMatroid, Variant
from .oracle import (
    BruteForceMatroid,
    from_bases,
    from_circuits,
    from_cocircuits,
    from_rank,
    oracle_equal,
    oracle_from_independence,
    oracle_minor,
    to_cocircuits,
)
from .planar import FiniteGroup, MultiplicativeGains, format_multiplicative_gains, format_rotation, planar_realizability

EXHAUSTIVE_BONDS = 12
RANDOM_CLASSES = 500
GAIN_GROUPS = ("Z/2", "Z/3", "Z/5", "Z/2xZ/2")


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, what: str) -> None:
        self.checks += 1
        if not ok and len(self.failures) < 20:
            self.failures.append(what)
        elif not ok:
            self.failures.append("...")

    def line(self, timings: bool = False) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"criterion {self.number:>2} {status} {self.title}: {self.checks} checks, {len(self.failures)} failures"
        return out + f", {self.seconds:.1f}s" if timings else out


@dataclass
class Settings:
    seed: int = 0
    random_classes: int = RANDOM_CLASSES
    exhaustive_bonds: int = EXHAUSTIVE_BONDS
    corpus: dict[str, Multigraph] = field(default_factory=lambda: dict(DEFAULT_CORPUS))


def corpus_classes(g: Multigraph, s: Settings, salt: str, nontrivial: bool = False) -> Iterator[LinearClass]:
    """Every class when the bond count is small, else a seeded random sample of non-trivial ones."""
    if len(enumerate_bonds(g)) <= s.exhaustive_bonds:
        for lc in enumerate_linear_classes(g):
            if not (nontrivial and lc.trivial):
                yield lc
        return
    rng = random.Random(f"{s.seed}:{salt}")
    produced = 0
    while produced < s.random_classes:
        lc = random_linear_class(g, rng)
        if lc.trivial:
            continue
        produced += 1
        yield lc


def graphic_oracle(g: Multigraph) -> BruteForceMatroid:
    from .graph import is_forest

    return oracle_from_independence(tuple(range(g.m)), lambda s: is_forest(g, s))


def _timed(number: int, title: str, body: Callable[[CriterionResult], None]) -> CriterionResult:
    res = CriterionResult(number, title)
    t0 = time.perf_counter()
    try:
        body(res)
    except Exception as exc:  # a crash is a failed criterion, not a crashed report
        res.failures.append(f"crashed: {type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t0
    return res


# --- matroid criteria --------------------------------------------------------------------


def criterion_1(s: Settings) -> CriterionResult:
    def body(res: CriterionResult) -> None:
        for name, g in s.corpus.items():
            for lc in corpus_classes(g, s, f"c1:{name}", nontrivial=True):
                jm = JoinMatroid(g, lc, Variant.COMPLETE_JOIN)
                try:
                    family = jm.cocircuits()
                    from_cocircuits(jm.ground, family)  # axioms checked on the way
                    oracle = jm.oracle()
                except CobiasError as exc:
                    res.check(False, f"{name} {sorted(b.key for b in lc.bonds)}: {exc}")
                    continue
                res.check(sorted(map(sorted, to_cocircuits(oracle))) == sorted(map(sorted, family)),
                          f"{name} {sorted(b.key for b in lc.bonds)}")

    return _timed(1, "cocircuit family defines the complete join", body)


def criterion_2(s: Settings) -> CriterionResult:
    def body(res: CriterionResult) -> None:
        for name, g in s.corpus.items():
            for lc in corpus_classes(g, s, f"c2:{name}"):
                for variant in Variant:
                    jm = JoinMatroid(g, lc, variant)
                    tag = f"{name} {variant.value} {sorted(b.key for b in lc.bonds)}"
                    try:
                        ref = jm.oracle()
                        res.check(oracle_equal(ref, from_rank(jm.ground, jm.rank)), f"{tag}: rank")
                        if lc.trivial and variant is Variant.COMPLETE_JOIN:
                            continue  # enumerations are undefined here; criterion 3 covers it
                        res.check(oracle_equal(ref, from_bases(jm.ground, jm.bases())), f"{tag}: bases")
                        res.check(oracle_equal(ref, from_circuits(jm.ground, jm.circuits())), f"{tag}: circuits")
                        res.check(oracle_equal(ref, from_cocircuits(jm.ground, jm.cocircuits())), f"{tag}: cocircuits")
                    except CobiasError as exc:
                        res.check(False, f"{tag}: {exc}")

    return _timed(2, "rank, independence, bases, circuits and cocircuits agree", body)


def criterion_3(s: Settings) -> CriterionResult:
    def body(res: CriterionResult) -> None:
        for name, g in s.corpus.items():
            graphic = graphic_oracle(g)
            for lc in corpus_classes(g, s, f"c3:{name}"):
                j0 = JoinMatroid(g, lc, Variant.COMPLETE_JOIN).oracle()
                j = JoinMatroid(g, lc, Variant.JOIN).oracle()
                tag = f"{name} {sorted(b.key for b in lc.bonds)}"
                res.check(oracle_equal(oracle_minor(j0, "delete", g.m), graphic), f"{tag}: J0 minus e0")
                res.check(oracle_equal(oracle_minor(j0, "contract", g.m), j), f"{tag}: J0 contract e0")

    return _timed(3, "J0 extends M(G) and contracts to J", body)


def _minor_pairs(s: Settings) -> Iterator[tuple[str, Multigraph, LinearClass]]:
    for name, g in s.corpus.items():
        for lc in corpus_classes(g, s, f"c4:{name}"):
            yield name, g, lc


def criterion_4(s: Settings) -> CriterionResult:
    def body(res: CriterionResult) -> None:
        for name, g, lc in _minor_pairs(s):
            for variant in Variant:
                jm = JoinMatroid(g, lc, variant)
                parent = jm.oracle()
                for e in range(g.m):
                    for op in ("delete", "contract"):
                        # a graph loop contracts to the same minor as its deletion
                        graph_op = "delete" if op == "contract" and g.is_loop(e) else op
                        child = jm.minor(graph_op, e)
                        expected = oracle_minor(parent, op, e).relabel(jm.minor_relabeling(e))
                        res.check(oracle_equal(expected, child.oracle()),
                                  f"{name} {variant.value} {op} {e} {sorted(b.key for b in lc.bonds)}")

    return _timed(4, "matroid minors match minors of the cobiased graph", body)


def criterion_5(s: Settings) -> CriterionResult:
    def body(res: CriterionResult) -> None:
        a, b = s.corpus["bowtie"], s.corpus["two_triangles"]
        res.check([x.edges for x in enumerate_bonds(a)] == [x.edges for x in enumerate_bonds(b)], "bond sets")
        res.check(sorted(sorted(t.edges) for t in enumerate_tribonds(a))
                  == sorted(sorted(t.edges) for t in enumerate_tribonds(b)), "tribond sets")
        res.check(sorted(sorted(t.edges) for t in enumerate_dibonds(a))
                  == sorted(sorted(t.edges) for t in enumerate_dibonds(b)), "dibond sets")
        for lc in enumerate_linear_classes(a):
            twin = LinearClass(b, frozenset(as_bond(b, x.edges) for x in lc.bonds))
            for variant in Variant:
                res.check(oracle_equal(JoinMatroid(a, lc, variant).oracle(), JoinMatroid(b, twin, variant).oracle()),
                          f"{variant.value} {sorted(x.key for x in lc.bonds)}")

    return _timed(5, "vertex union leaves bonds, tribonds and join matroids unchanged", body)


# --- gains and labelings -------------------------------------------------------------------


def _random_cycle(g: Multigraph, cycles: list[frozenset[int]], rng: random.Random) -> list[tuple[int, int]]:
    steps = oriented_cycle(g, rng.choice(cycles))
    if rng.random() < 0.5:
        steps = [(e, g.other_end(e, t)) for e, t in reversed(steps)]
    return steps


def _random_shifts(ga: GainAssignment, cycles: list[frozenset[int]], rng: random.Random, k: int) -> GainAssignment:
    for _ in range(k):
        ga = cycle_shift(ga, _random_cycle(ga.graph, cycles, rng), ga.group.random_element(rng))
    return ga


def criterion_6(s: Settings) -> CriterionResult:
    def body(res: CriterionResult) -> None:
        for name, g in s.corpus.items():
            cycles = [c for c in enumerate_cycles(g) if not (len(c) == 1 and g.is_loop(next(iter(c))))]
            for spec in GAIN_GROUPS:
                grp = AdditiveGroup.parse(spec)
                rng = random.Random(f"{s.seed}:c6:{name}:{spec}")
                tag = f"{name} {spec}"
                for _ in range(100):
                    ga = random_gains(g, grp, rng)
                    try:
                        class_from_gains(ga)
                        res.check(True, "")
                    except CobiasError as exc:
                        res.check(False, f"{tag}: gain class invalid: {exc}")
                    n1 = normalize(ga)
                    res.check(normalize(n1) == n1, f"{tag}: normalization not idempotent")
                    res.check(bond_values(n1) == bond_values(ga), f"{tag}: normalization moved a bond gain")
                    res.check(n1.gains == tree_gains_from_bonds(ga), f"{tag}: normal form not forced by bond gains")
                    if cycles:
                        shifted = cycle_shift(ga, _random_cycle(g, cycles, rng), grp.random_element(rng))
                        res.check(bond_values(shifted) == bond_values(ga), f"{tag}: shift moved a bond gain")
                        res.check(normalize(shifted) == n1, f"{tag}: normal form not unique")
                for i in range(200):
                    ga1 = random_gains(g, grp, rng)
                    ga2 = _random_shifts(ga1, cycles, rng, 3) if cycles and i % 2 == 0 else random_gains(g, grp, rng)
                    res.check(shifting_equivalent(ga1, ga2) == bonds_agree(ga1, ga2), f"{tag}: equivalence criteria differ")
                if not cycles:
                    res.notes.append(f"{name}: acyclic, shift checks vacuous")

    return _timed(6, "gain classes, shifting and normalization", body)


def _maximal_forests(g: Multigraph) -> list[frozenset[int]]:
    full = g.n - g.num_components
    return [f for f in enumerate_forests(g) if len(f) == full]


def _blockified(g: Multigraph) -> Multigraph:
    loopless = Multigraph(g.n, tuple(uv for uv in g.edges if uv[0] != uv[1]))
    h, _ = split_blocks(loopless)
    return h


def criterion_7(s: Settings) -> CriterionResult:
    def body(res: CriterionResult) -> None:
        for name, g in s.corpus.items():
            forests = _maximal_forests(g)
            blocky = _blockified(g)
            bonds = enumerate_bonds(g)
            for spec in GAIN_GROUPS:
                grp = AdditiveGroup.parse(spec)
                rng = random.Random(f"{s.seed}:c7:{name}:{spec}")
                tag = f"{name} {spec}"
                for _ in range(30):
                    ql = random_labeling(g, grp, rng)
                    t1, t2 = rng.choice(forests), rng.choice(forests)
                    ga1 = gains_from_labeling(ql, t1)
                    for b in bonds:
                        for ob in (OrientedBond(b), OrientedBond(b).reversed()):
                            res.check(bond_gain(ga1, ob) == labeling_value(ql, ob), f"{tag}: labeling gains differ on {b}")
                    res.check(class_from_gains(ga1) == class_from_labeling(ql), f"{tag}: labeling gain class")
                    res.check(shifting_equivalent(ga1, gains_from_labeling(ql, t2)), f"{tag}: forest change")

                    ga = random_gains(blocky, grp, rng)
                    back = labeling_from_gains(ga)
                    res.check(class_from_labeling(back) == class_from_gains(ga), f"{tag}: labeling round trip")
                    res.check(shifting_equivalent(gains_from_labeling(back), ga), f"{tag}: gains round trip")

                    ga = random_gains(g, grp, rng)
                    lc_g, lc_l = class_from_gains(ga), class_from_labeling(ql)
                    for e in range(g.m):
                        _check_gain_minors(res, g, ga, lc_g, e, tag)
                        _check_labeling_minors(res, g, ql, lc_l, e, tag)

    return _timed(7, "labelings, gains and their minors", body)


def _check_gain_minors(res: CriterionResult, g: Multigraph, ga: GainAssignment, lc: LinearClass, e: int, tag: str) -> None:
    if g.is_loop(e):
        try:
            gain_minor(ga, "contract", e)
            res.check(False, f"{tag}: loop {e} contracted")
        except LoopContractionError:
            res.check(True, "")
    else:
        res.check(class_from_gains(gain_minor(ga, "contract", e)) == contract_class(g, lc, e)[1],
                  f"{tag}: gain contraction {e}")
    if not g.is_loop(e) and is_isthmus(g, e):
        try:
            gain_minor(ga, "delete", e)
            res.check(False, f"{tag}: isthmus {e} deleted from gains")
        except IsthmusDeletionError:
            res.check(True, "")
        return
    dm = gain_minor(ga, "delete", e)
    res.check(class_from_gains(dm) == delete_class(g, lc, e)[1], f"{tag}: gain deletion {e}")


def _check_labeling_minors(res: CriterionResult, g: Multigraph, ql: QuotientLabeling, lc: LinearClass, e: int, tag: str) -> None:
    if not g.is_loop(e):
        res.check(class_from_labeling(labeling_minor(ql, "contract", e)) == contract_class(g, lc, e)[1],
                  f"{tag}: labeling contraction {e}")
    bad = not g.is_loop(e) and is_isthmus(g, e) and as_bond(g, {e}) not in lc.bonds
    try:
        dm = labeling_minor(ql, "delete", e)
    except UncobalancedIsthmusError:
        res.check(bad, f"{tag}: labeling deletion {e} rejected")
        return
    res.check(not bad, f"{tag}: un-cobalanced isthmus {e} deleted")
    res.check(class_from_labeling(dm) == delete_class(g, lc, e)[1], f"{tag}: labeling deletion {e}")


# --- the non-realizable example ----------------------------------------------------------


REALIZABILITY_GROUPS = ("Z/2", "Z/3", "Z/4", "Z/2xZ/2", "Z/5", "Z/6")


def criterion_8(s: Settings) -> CriterionResult:
    def body(res: CriterionResult) -> None:
        lc = k24_class()  # validates on construction
        g = lc.graph
        res.check(len(lc) == 3, "class has three bonds")
        for spec in REALIZABILITY_GROUPS:
            r = is_realizable_over(g, lc, AdditiveGroup.parse(spec))
            res.check(not r.realizable, f"additive {spec} realizes the class")
            res.notes.append(f"{spec}: searched={r.searched} nodes={r.nodes}")
        rs = rotation("k24")
        groups = [FiniteGroup.cyclic(n) for n in range(1, 7)] + [FiniteGroup.from_additive(AdditiveGroup.cyclic(2, 2)), FiniteGroup.symmetric(3)]
        for grp in groups:
            r = planar_realizability(rs, lc, grp)
            res.check(not r.realizable, f"planar {grp.name} realizes the class")
            res.notes.append(f"planar {grp.name}: searched={r.searched} nodes={r.nodes}")

    return _timed(8, "the K_{2,4} class is not realizable by gains", body)


# --- example classes -----------------------------------------------------------------------


def _even_subsets(g: Multigraph) -> Iterator[frozenset[int]]:
    for k in range(g.n + 1):
        for w in itertools.combinations(g.vertices, k):
            w = frozenset(w)
            if all(len(w & c) % 2 == 0 for c in g.components):
                yield w


def criterion_9(s: Settings) -> CriterionResult:
    def body(res: CriterionResult) -> None:
        z2 = AdditiveGroup.cyclic(2)
        for name, g in s.corpus.items():
            comp = g.component_labels
            for a, b in itertools.combinations(g.vertices, 2):
                lc = two_point_class(g, a, b)
                res.check(is_additive(g, lc)[0], f"{name}: two-point {a},{b} not additive")
                if comp[a] == comp[b]:
                    labels = tuple((1,) if v in (a, b) else (0,) for v in g.vertices)
                    res.check(class_from_labeling(QuotientLabeling(g, z2, labels)) == lc,
                              f"{name}: two-point {a},{b} differs from its Z/2 labeling")
            for w in _even_subsets(g):
                res.check(is_additive(g, even_split_class(g, w))[0], f"{name}: even split {sorted(w)} not additive")
            for k in range(g.n + 1):
                for w in itertools.combinations(g.vertices, k):
                    nonseparating_class(g, w)  # raises if not linear
                    res.check(True, "")
        g = s.corpus["k4"]
        witness = next((w for w in itertools.combinations(g.vertices, 3)
                        if not is_additive(g, nonseparating_class(g, w))[0]), None)
        res.check(witness is not None, "no non-additive three-point class on K_4")
        if witness is not None:
            res.notes.append(f"non-additive witness on k4: W={list(witness)} tribond={is_additive(g, nonseparating_class(g, witness))[1]}")

    return _timed(9, "two-point, even-split and nonseparating classes", body)


def criterion_10(s: Settings) -> CriterionResult:
    def body(res: CriterionResult) -> None:
        for name, g in s.corpus.items():
            for p in (5, 7):
                grp = AdditiveGroup.cyclic(p)
                rng = random.Random(f"{s.seed}:c10:{name}:{p}")
                for _ in range(100):
                    a = rng.randrange(1, p)
                    res.check(scalar_invariance_check(random_gains(g, grp, rng), a), f"{name} Z/{p} gains a={a}")
                    res.check(scalar_invariance_check(random_labeling(g, grp, rng), a), f"{name} Z/{p} labeling a={a}")

    return _timed(10, "scalar multiples over prime fields keep the class", body)


# --- determinism ------------------------------------------------------------------------------


def write_corpus_files(root: Path, s: Settings) -> list[list[str]]:
    """Write every corpus input and return the CLI invocations exercising each command."""
    cmds: list[list[str]] = []
    for name, g in s.corpus.items():
        rng = random.Random(f"{s.seed}:c11:{name}")
        gp = root / f"{name}.graph"
        gp.write_text(format_graph(g))
        lc = random_linear_class(g, rng)
        while lc.trivial:  # trivial classes make the J0 enumerations refuse
            lc = random_linear_class(g, rng)
        cp = root / f"{name}.class"
        cp.write_text(format_class(lc))
        z3 = AdditiveGroup.cyclic(3)
        ga1, ga2 = random_gains(g, z3, rng), random_gains(g, z3, rng)
        (root / f"{name}.1.gains").write_text(format_gains(ga1))
        (root / f"{name}.2.gains").write_text(format_gains(ga2))
        (root / f"{name}.labels").write_text(format_labeling(random_labeling(g, z3, rng)))
        G, C = str(gp), str(cp)
        edge = str(rng.randrange(g.m))
        cmds += [
            ["bonds", G],
            ["tribonds", G, "--dibonds"],
            ["validate-class", G, C],
            ["matroid", G, C, "--variant", "j0"],
            ["matroid", G, C, "--variant", "j", "--show", "bases", "--show", "rank"],
            ["minor", G, C, "--op", "delete", "--edge", edge],
            ["ljoins", G, C],
            ["gains-class", G, str(root / f"{name}.1.gains")],
            ["labeling-class", G, str(root / f"{name}.labels")],
            ["normalize", G, str(root / f"{name}.1.gains")],
            ["equivalent", G, str(root / f"{name}.1.gains"), str(root / f"{name}.2.gains")],
            ["realizable", G, C, "--group", "Z/2"],
        ]
        if len(enumerate_bonds(g)) <= s.exhaustive_bonds:
            cmds.append(["enumerate-classes", G])
        if name in ROTATIONS:
            rp = root / f"{name}.rotation"
            rp.write_text(format_rotation(rotation(name)))
            s3 = FiniteGroup.symmetric(3)
            mg = MultiplicativeGains(g, s3, tuple(rng.randrange(6) for _ in range(g.m)))
            mp = root / f"{name}.s3.gains"
            mp.write_text(format_multiplicative_gains(mg))
            cmds += [["planar-class", G, str(rp), str(mp)], ["realizable", G, C, "--group", "Z/2", "--planar", str(rp)]]
    return cmds + [c + ["--json"] for c in cmds]


_DRIVER = """
import contextlib, io, json, sys
from cobiased.cli import main
out = []
for argv in json.loads(sys.stdin.read()):
    buf, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(err):
        code = main(argv)
    out.append([code, buf.getvalue(), err.getvalue()])
sys.stdout.write(json.dumps(out))
"""


def criterion_11(s: Settings, runs: int = 3) -> CriterionResult:
    import json

    def body(res: CriterionResult) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            cmds = write_corpus_files(Path(tmp), s)
            payload = json.dumps(cmds)
            outputs = []
            for run in range(runs):
                env = dict(os.environ, PYTHONHASHSEED=str(run + 1))
                proc = subprocess.run([sys.executable, "-c", _DRIVER], input=payload, capture_output=True,
                                      text=True, env=env, check=False)
                if proc.returncode != 0:
                    res.check(False, f"driver crashed: {proc.stderr.strip()[-300:]}")
                    return
                outputs.append(json.loads(proc.stdout))
            for i, argv in enumerate(cmds):
                first = outputs[0][i]
                res.check(first[0] == 0, f"{' '.join(argv[:1])} exited {first[0]}: {first[2].strip()}")
                res.check(all(o[i] == first for o in outputs[1:]), f"{' '.join(argv)} output differs between runs")
            res.notes.append(f"{len(cmds)} invocations x {runs} runs")

    return _timed(11, "CLI output is byte-identical across runs", body)


CRITERIA: dict[int, Callable[[Settings], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}


def run_criteria(numbers: list[int] | None = None, settings: Settings | None = None) -> list[CriterionResult]:
    s = settings or Settings()
    return [CRITERIA[k](s) for k in (numbers or sorted(CRITERIA))]

"""Structural analysis of contributing paths.

Builds the objects the size argument reasons about (detours, the P_high /
P_low split, standard / long / short classes, last legs, modified detours,
segments of converging families) from a built structure, and checks the
structural claims about them on concrete instances.

Single-source claims (last-leg disjointness, detour convergence, distinct
standard lengths, the short-standard length ceiling, the multifail count)
are only asserted for undirected single-source edge-failure builds. The
multi-source convergence claims are asserted for builds with two or more
sources. Everything else is reported as skipped.
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from ftbfs.sdk.builder import Assignment, FtStructure
from ftbfs.sdk.config import calibration_value
from ftbfs.sdk.errors import NonConvergingFamilyError
from ftbfs.sdk.graph import Edge, Element, FailureMode, Graph
from ftbfs.sdk.paths import (
    Vertices,
    common_prefix,
    detour,
    element_position,
    lex_path_avoiding,
    resolve_pair,
)
from ftbfs.sdk.utils import ceil_power, ceil_root

logger = logging.getLogger(__name__)


class PathClass(str, Enum):
    BASE = "base"
    SINGLE = "single"
    MULTIFAIL_P0 = "excluded-multifail-P0"
    NON_STANDARD = "nonStandard"
    LONG_STANDARD = "longStandard"
    SHORT_STANDARD = "shortStandard"


PAIR_CLASSES = (PathClass.NON_STANDARD, PathClass.LONG_STANDARD, PathClass.SHORT_STANDARD)
STANDARD_CLASSES = (PathClass.LONG_STANDARD, PathClass.SHORT_STANDARD)


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # pass | fail | skipped
    counterexample: Optional[dict] = None
    details: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    @classmethod
    def ok(cls, name: str, details: Optional[dict] = None) -> "CheckResult":
        return cls(name, "pass", None, details)

    @classmethod
    def skipped(cls, name: str, reason: str) -> "CheckResult":
        return cls(name, "skipped", None, {"reason": reason})

    def to_dict(self) -> dict:
        out = {"status": self.status}
        if self.counterexample is not None: out["counterexample"] = self.counterexample
        if self.details is not None: out["details"] = self.details
        return out


@dataclass(frozen=True)
class ClassifiedPath:
    assignment: Assignment
    p0: Vertices
    p1: Optional[Vertices]
    e1: Optional[Element]
    e2: Optional[Element]
    d0_p1: Vertices
    d1: Vertices
    d0: Vertices
    split_index: int
    path_class: PathClass
    pi_rank: int = 0  # position of e1 on P0, larger = earlier in the failure order
    last_path: Optional[Vertices] = None
    last_leg: Optional[Vertices] = None

    @property
    def vertices(self) -> Vertices:
        return self.assignment.path.vertices

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def source(self) -> int:
        return self.assignment.source

    @property
    def target(self) -> int:
        return self.assignment.target

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "failure": self.assignment.failure.to_json(),
            "path": list(self.vertices),
            "class": self.path_class.value,
            "d0P1": list(self.d0_p1),
            "d1": list(self.d1),
            "d0": list(self.d0),
            "vl": self.p0[self.split_index],
            "lastPath": list(self.last_path) if self.last_path else None,
            "lastLeg": list(self.last_leg) if self.last_leg else None,
        }


# --- thresholds ---

def split_index(p0_length: int, n: int, sigma: int = 1) -> int:
    """Index of v_l on P0: |P0[v_l, v]| = ceil((n/sigma)^(1/3)), or the source when P0 is shorter."""
    return max(0, p0_length - ceil_root(n, 3, sigma))


def long_threshold(n: int, sigma: int = 1) -> int:
    return ceil_power(n, 2, 3, sigma)


def _is_single_source_setting(st: FtStructure) -> bool:
    return len(st.sources) == 1 and not st.graph.directed and st.mode == FailureMode.EDGE


@dataclass(frozen=True)
class BaseSplit:
    """P0 of one source cut at v_l into its high and low parts (both hold v_l)."""
    source: int
    p0: Vertices
    index: int

    @property
    def high(self) -> Vertices:
        return self.p0[:self.index + 1]

    @property
    def low(self) -> Vertices:
        return self.p0[self.index:]


def base_splits(st: FtStructure, target: int) -> Dict[int, BaseSplit]:
    """The split of every source's P0 into the target, with sigma = |S|."""
    sigma = len(st.sources)
    splits = {}
    for s in st.sources:
        chain = st.chains.get((s, target))
        if s == target or chain is None or chain.p0 is None: continue
        p0 = chain.p0.vertices
        splits[s] = BaseSplit(s, p0, split_index(len(p0) - 1, st.graph.n, sigma))
    return splits


# --- classification ---

def _element_in(g: Graph, element: Element, vertices: Sequence[int], mode: FailureMode,
                interior: bool = False) -> bool:
    if mode == FailureMode.VERTEX:
        return element in (vertices[1:-1] if interior else vertices)
    return element_position(g, vertices, element, mode) is not None


def _e1_in_high(g: Graph, splits: Dict[int, BaseSplit], e1: Element, mode: FailureMode) -> bool:
    return any(_element_in(g, e1, sp.high, mode) for sp in splits.values())


def _rejoins_low(splits: Dict[int, BaseSplit], d0_p1: Vertices) -> bool:
    return any(d0_p1[-1] in sp.low for sp in splits.values())


def _classify(g: Graph, st: FtStructure, a: Assignment, splits: Dict[int, BaseSplit]) -> ClassifiedPath:
    chain = st.chains[(a.source, a.target)]
    p0 = chain.p0.vertices
    path = a.path.vertices
    sigma = len(st.sources)
    l = splits[a.source].index
    if len(a.failure) == 0:
        return ClassifiedPath(a, p0, None, None, None, (), (), (), l, PathClass.BASE)
    if len(a.failure) == 1:
        e1 = a.failure.items[0]
        entry = chain.entry(e1)
        return ClassifiedPath(a, p0, path, e1, None, entry.d0, (), detour(g, path, [p0]), l,
                              PathClass.SINGLE, entry.position)
    e1, e2 = resolve_pair(g, chain, a.failure)
    entry = chain.entry(e1)
    p1 = entry.p1.vertices
    d0_p1 = entry.d0
    d1 = detour(g, path, [p0, p1])
    d0 = detour(g, path, [p0])
    if not _element_in(g, e2, d0_p1, st.mode, interior=True):
        cls = PathClass.MULTIFAIL_P0
    elif _e1_in_high(g, splits, e1, st.mode) and _rejoins_low(splits, d0_p1):
        measured = d0_p1
        if sigma > 1:
            # several sources: long/short goes by the modified detour of P1
            family = {s: sp.p0 for s, sp in splits.items()}
            md1 = modified_detour(g, a.source, p1, (e1,), family, st.mode)
            if md1 is not None: measured = md1.md
        long_d = len(measured) - 1 >= long_threshold(g.n, sigma)
        cls = PathClass.LONG_STANDARD if long_d else PathClass.SHORT_STANDARD
    else:
        cls = PathClass.NON_STANDARD
    return ClassifiedPath(a, p0, p1, e1, e2, d0_p1, d1, d0, l, cls, entry.position)


def assign_last_leg(cp: ClassifiedPath, family: Sequence[ClassifiedPath]) -> ClassifiedPath:
    """Sets LP(P) and the last leg of P against its class family.

    Candidates are P0 and the tails of the family's P1 paths past the prefix
    they share with P0. LP(P) owns the last vertex of P before the target that
    lies on a candidate; P0 wins a tie, then the P1 earliest in failure order.
    The last leg is P from that vertex on, so it meets no candidate before v.
    """
    path = cp.vertices
    tails = sorted({(-c.pi_rank, c.p1, c.p1[common_prefix(cp.p0, c.p1) + 1:]) for c in family})
    k0 = max((j for j in range(len(path) - 1) if path[j] in cp.p0), default=-1)
    k1, owner = -1, None
    for j in range(len(path) - 2, -1, -1):
        hit = next((p1 for _, p1, tail in tails if path[j] in tail), None)
        if hit is not None:
            k1, owner = j, hit
            break
    if k0 >= k1:
        last_path, cut = cp.p0, k0
    else:
        last_path, cut = owner, k1
    return replace(cp, last_path=last_path, last_leg=tuple(path[cut:]))


def extract_contributing(st: FtStructure, target: int) -> List[ClassifiedPath]:
    """One classified path per assignment at the target, with last legs set per (source, class)."""
    g = st.graph
    splits = base_splits(st, target)
    classified = [_classify(g, st, a, splits) for a in st.assignments_at(target)]
    groups: Dict[Tuple[int, PathClass], List[ClassifiedPath]] = {}
    for cp in classified:
        if cp.path_class in PAIR_CLASSES:
            groups.setdefault((cp.source, cp.path_class), []).append(cp)
    result = []
    for cp in classified:
        family = groups.get((cp.source, cp.path_class))
        result.append(assign_last_leg(cp, family) if family else cp)
    return result


# --- checks ---

def check_last_leg_disjointness(paths: Sequence[ClassifiedPath], target: int) -> CheckResult:
    """Last legs of paths of one class pairwise meet only at the target and start at distinct vertices."""
    name = "lastLegDisjointness"
    legs = [cp for cp in paths if cp.last_leg]
    for i in range(len(legs)):
        for j in range(i + 1, len(legs)):
            a, b = legs[i].last_leg, legs[j].last_leg
            shared = sorted((set(a) & set(b)) - {target})
            if shared or a[0] == b[0]:
                return CheckResult(name, "fail", {
                    "paths": [list(legs[i].vertices), list(legs[j].vertices)],
                    "sharedVertex": shared[0] if shared else a[0],
                })
    return CheckResult.ok(name, {"paths": len(legs)})


def find_divergence(family: Sequence[Sequence[int]]) -> Optional[Tuple[int, int, int]]:
    """(i, j, vertex) for the first pair of members that meet and later split, else None.

    The vertex is the last one the two members share before splitting.
    """
    positions = [{x: k for k, x in enumerate(p)} for p in family]
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            a, b = family[i], family[j]
            first = next((k for k, x in enumerate(a) if x in positions[j]), None)
            if first is None: continue
            ka, kb = first, positions[j][a[first]]
            while ka + 1 < len(a) and kb + 1 < len(b) and a[ka + 1] == b[kb + 1]:
                ka, kb = ka + 1, kb + 1
            if ka != len(a) - 1 or kb != len(b) - 1:
                return i, j, a[ka]
    return None


def check_detour_convergence(family: Sequence[Sequence[int]], name: str = "detourConvergence") -> CheckResult:
    members = sorted({tuple(p) for p in family if len(p) > 1})
    found = find_divergence(members)
    if found is None:
        return CheckResult.ok(name, {"members": len(members)})
    i, j, vertex = found
    return CheckResult(name, "fail", {"paths": [list(members[i]), list(members[j])], "divergenceVertex": vertex})


def check_distinct_lengths(standard: Sequence[ClassifiedPath]) -> CheckResult:
    lengths = Counter(cp.length for cp in standard)
    repeated = sorted(length for length, count in lengths.items() if count > 1)
    details = {"histogram": {str(k): v for k, v in sorted(lengths.items())}}
    if repeated:
        clash = [list(cp.vertices) for cp in standard if cp.length == repeated[0]][:2]
        return CheckResult("distinctStandardLengths", "fail", {"length": repeated[0], "paths": clash}, details)
    return CheckResult.ok("distinctStandardLengths", details)


def check_length_ceiling(short: Sequence[ClassifiedPath], n: int) -> CheckResult:
    """|P| <= |P0| + 3 * ceil(n^(2/3)) for short standard paths."""
    slack = 3 * long_threshold(n)
    worst = max((cp.length - (len(cp.p0) - 1) for cp in short), default=0)
    details = {"maxExcess": worst, "ceiling": slack}
    for cp in short:
        if cp.length > len(cp.p0) - 1 + slack:
            return CheckResult("lengthCeiling", "fail", {"path": list(cp.vertices), "p0Length": len(cp.p0) - 1}, details)
    return CheckResult.ok("lengthCeiling", details)


@dataclass(frozen=True)
class MultifailCount:
    target: int
    count: int
    bound: int

    @property
    def within(self) -> bool:
        return self.count <= self.bound

    def to_dict(self) -> dict:
        return {"count": self.count, "bound": self.bound, "within": self.within}


def check_multifail_p0_count(st: FtStructure, target: int) -> MultifailCount:
    """Contributing paths at the target whose two failures both lie on P0, against ceil(c * sqrt(n))."""
    g = st.graph
    count = 0
    for a in st.assignments_at(target):
        if len(a.failure) != 2: continue
        p0 = st.chains[(a.source, target)].p0.vertices
        if all(_element_in(g, e, p0, st.mode) for e in a.failure):
            count += 1
    c = float(calibration_value("multifail_p0.c"))
    return MultifailCount(target, count, math.ceil(c * math.sqrt(g.n)))


# --- modified detours (multi-source) ---

@dataclass(frozen=True)
class ModifiedDetour:
    source: int
    failure: Tuple[Element, ...]
    path: Vertices
    mp_source: int
    mp: Vertices
    md: Vertices

    def to_json(self) -> dict:
        return {"source": self.source, "failure": [list(e) if isinstance(e, tuple) else e for e in self.failure],
                "path": list(self.path), "mpSource": self.mp_source, "md": list(self.md)}


@dataclass
class ModifiedDetourReport:
    target: int
    paths: List[ModifiedDetour] = field(default_factory=list)
    p1s: List[ModifiedDetour] = field(default_factory=list)
    p0_convergence: Optional[CheckResult] = None
    md_convergence: Optional[CheckResult] = None

    def to_dict(self) -> dict:
        return {"paths": [md.to_json() for md in self.paths], "p1s": [md.to_json() for md in self.p1s]}


def _failed_in_suffix(g: Graph, suffix: Sequence[int], failures: Sequence[Element], mode: FailureMode) -> bool:
    if mode == FailureMode.VERTEX:
        return any(x in suffix[1:] for x in failures)
    edges = {g.canonical(a, b) for a, b in zip(suffix, suffix[1:])}
    return any(e in edges for e in failures)


def modified_detour(g: Graph, source: int, path: Sequence[int], failures: Sequence[Element],
                    family: Dict[int, Vertices], mode: FailureMode) -> Optional[ModifiedDetour]:
    """MP: the last P0 member met by `path` whose suffix from the meeting vertex holds a failure.

    MD runs from that meeting vertex to the next vertex of `path` on any P0 member (or to v).
    """
    on_family = set()
    for q in family.values(): on_family.update(q)
    for j in range(len(path) - 2, -1, -1):
        y = path[j]
        for s, q in sorted(family.items()):
            if y not in q: continue
            if _failed_in_suffix(g, q[q.index(y):], failures, mode):
                z = next(k for k in range(j + 1, len(path)) if path[k] in on_family or k == len(path) - 1)
                return ModifiedDetour(source, tuple(failures), tuple(path), s, q, tuple(path[j:z + 1]))
    return None


def compute_modified_detours(st: FtStructure, target: int) -> ModifiedDetourReport:
    """MP/MD for every contributing path at the target and for its P1, plus both convergence checks."""
    g = st.graph
    family = {s: sp.p0 for s, sp in base_splits(st, target).items()}
    report = ModifiedDetourReport(target)
    report.p0_convergence = check_detour_convergence(list(family.values()), name="p0Convergence")
    standard_md = []
    classified = {(cp.source, cp.assignment.failure): cp for cp in extract_contributing(st, target)}
    for a in st.assignments_at(target):
        if len(a.failure) == 0: continue
        chain = st.chains[(a.source, target)]
        md = modified_detour(g, a.source, a.path.vertices, a.failure.items, family, st.mode)
        if md is not None: report.paths.append(md)
        if len(a.failure) != 2: continue
        e1, _ = resolve_pair(g, chain, a.failure)
        p1 = chain.entry(e1).p1.vertices
        md1 = modified_detour(g, a.source, p1, (e1,), family, st.mode)
        if md1 is None: continue
        report.p1s.append(md1)
        if classified[(a.source, a.failure)].path_class in STANDARD_CLASSES:
            standard_md.append(md1.md)
    report.md_convergence = check_detour_convergence(standard_md, name="modifiedDetourConvergence")
    return report


# --- segments ---

@dataclass(frozen=True)
class Segment:
    path_id: int
    start: int
    end: int
    vertices: Vertices
    representative: Optional[Vertices] = None
    representative_vertex: Optional[int] = None

    def to_json(self) -> dict:
        return {"pathId": self.path_id, "start": self.start, "end": self.end,
                "representative": list(self.representative) if self.representative else None,
                "representativeVertex": self.representative_vertex}


@dataclass
class SegmentDecomposition:
    base_paths: List[Vertices]
    segments: List[Segment]

    @property
    def within_bound(self) -> bool:
        return len(self.segments) <= 2 * len(self.base_paths)

    def to_dict(self) -> dict:
        return {"paths": len(self.base_paths), "segments": len(self.segments),
                "bound": 2 * len(self.base_paths), "withinBound": self.within_bound}


def compute_segments(g: Graph, base_paths: Sequence[Sequence[int]], target: int) -> SegmentDecomposition:
    """Cuts a converging family at path starts and merge points of its union."""
    family = sorted({tuple(p) for p in base_paths if len(p) > 1})
    found = find_divergence(family)
    if found is not None:
        raise NonConvergingFamilyError(*found)
    successor: Dict[int, int] = {}
    preds: Dict[int, set] = {}
    owner: Dict[Edge, int] = {}
    for pid, p in enumerate(family):
        for a, b in zip(p, p[1:]):
            successor[a] = b
            preds.setdefault(b, set()).add(a)
            owner.setdefault((a, b), pid)
    starts = {p[0] for p in family} | {x for x, ps in preds.items() if len(ps) > 1}
    segments = []
    for u in sorted(starts):
        if u not in successor: continue
        walk = [u]
        while walk[-1] in successor:
            walk.append(successor[walk[-1]])
            if walk[-1] in starts: break
        pid = owner[(walk[0], walk[1])]
        base = family[pid]
        below = base[base.index(walk[-1]):]
        avoid = frozenset(g.canonical(a, b) for a, b in zip(below, below[1:]))
        rep = lex_path_avoiding(g, u, target, edges=avoid) if u != target else None
        rep_vertex = None
        if rep:
            on_segment = set(walk)
            rep_vertex = max((x for x in rep if x in on_segment), key=rep.index)
        segments.append(Segment(pid, walk[0], walk[-1], tuple(walk),
                                tuple(rep) if rep else None, rep_vertex))
    return SegmentDecomposition(list(family), segments)


def _segment_check(g: Graph, family: Sequence[Sequence[int]], target: int, name: str) -> Tuple[CheckResult, Optional[dict]]:
    try:
        decomposition = compute_segments(g, family, target)
    except NonConvergingFamilyError as e:
        return CheckResult.skipped(name, str(e)), None
    summary = decomposition.to_dict()
    if not decomposition.within_bound:
        return CheckResult(name, "fail", summary), summary
    return CheckResult.ok(name, summary), summary


# --- full report ---

@dataclass
class TargetAnalysis:
    target: int
    classes: Dict[str, int]
    checks: Dict[str, CheckResult]
    segments: Dict[str, dict]
    lengths: Dict[str, int]
    multifail: Optional[MultifailCount] = None
    paths: List[ClassifiedPath] = field(default_factory=list)
    modified: Optional[ModifiedDetourReport] = None

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "classes": self.classes,
            "paths": [cp.to_json() for cp in self.paths],
            "checks": {k: v.to_dict() for k, v in self.checks.items()},
            "segments": self.segments,
            "lengths": self.lengths,
            "multifailP0": self.multifail.to_dict() if self.multifail else None,
            "modifiedDetours": self.modified.to_dict() if self.modified else None,
        }


@dataclass
class AnalysisReport:
    targets: List[TargetAnalysis]

    def summary(self) -> Dict[str, Dict[str, int]]:
        table: Dict[str, Dict[str, int]] = {}
        for t in self.targets:
            for name, result in t.checks.items():
                row = table.setdefault(name, {"pass": 0, "fail": 0, "skipped": 0})
                row[result.status] += 1
            if t.multifail is not None:
                row = table.setdefault("multifailP0Count", {"pass": 0, "fail": 0, "skipped": 0})
                row["pass" if t.multifail.within else "fail"] += 1
        return table

    @property
    def passed(self) -> bool:
        return all(row["fail"] == 0 for row in self.summary().values())

    def to_dict(self) -> dict:
        return {"status": "pass" if self.passed else "fail", "summary": self.summary(),
                "targets": [t.to_dict() for t in self.targets]}


def analyze_target(st: FtStructure, target: int) -> TargetAnalysis:
    g = st.graph
    paths = extract_contributing(st, target)
    classes = dict(sorted(Counter(cp.path_class.value for cp in paths).items()))
    checks: Dict[str, CheckResult] = {}
    segments: Dict[str, dict] = {}
    standard = [cp for cp in paths if cp.path_class in STANDARD_CLASSES]
    lengths = {str(k): v for k, v in sorted(Counter(cp.length for cp in standard).items())}
    multifail = None
    md = None
    if _is_single_source_setting(st):
        legs = [check_last_leg_disjointness([cp for cp in paths if cp.path_class == c], target)
                for c in PAIR_CLASSES]
        checks["lastLegDisjointness"] = next((r for r in legs if r.status == "fail"), legs[0])
        checks["detourConvergence"] = check_detour_convergence([cp.d0_p1 for cp in standard])
        checks["distinctStandardLengths"] = check_distinct_lengths(standard)
        checks["lengthCeiling"] = check_length_ceiling(
            [cp for cp in standard if cp.path_class == PathClass.SHORT_STANDARD], g.n)
        multifail = check_multifail_p0_count(st, target)
        if checks["detourConvergence"].status == "pass" and standard:
            checks["detourSegments"], segments["standardDetours"] = _segment_check(
                g, [cp.d0_p1 for cp in standard], target, "detourSegments")
    elif len(st.sources) > 1:
        md = compute_modified_detours(st, target)
        checks["p0Convergence"] = md.p0_convergence
        checks["modifiedDetourConvergence"] = md.md_convergence
        p0s = [sp.p0 for sp in base_splits(st, target).values()]
        if p0s:
            checks["p0Segments"], segments["p0Family"] = _segment_check(g, p0s, target, "p0Segments")
    return TargetAnalysis(target, classes, checks, segments, lengths, multifail, paths, md)


def analyze_structure(st: FtStructure) -> AnalysisReport:
    targets = sorted(st.last_edges)
    logger.info(f"Analyzing {len(targets)} targets ({len(st.assignments)} contributing paths)")
    return AnalysisReport([analyze_target(st, v) for v in targets])

"""Isomorph-free generation of candidate BH(q,m,n) matrices by weak canonical augmentation.

Nodes at level m are dephased m x n exponent matrices with pairwise orthogonal
rows. A child is obtained by appending a row with first entry 0; it is kept
only when the row deletion minimising the order below yields its actual
parent. Equivalent survivors are then siblings and are removed by comparing
canonical forms. The order on level-m classes is lexicographic on
(pair-type invariant, canonical form); the invariant is cheap and rejects most
children before any canonical labelling.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra import ButsonMatrix, dephase
from .equivalence import CanonicalForm, automorphism_order, canonical_form, form_digest
from .kernels import extend_rows

log = logging.getLogger(__name__)


class SearchLimitError(RuntimeError):
    pass


class DoubleCountError(AssertionError):
    pass


@dataclass
class SearchNode:
    matrix: ButsonMatrix
    canonical: CanonicalForm
    parentCanonical: CanonicalForm | None = None
    autOrder: int | None = None
    extCount: int | None = None

    @property
    def m(self) -> int:
        return self.matrix.m


@dataclass
class LevelReport:
    m: int
    classReps: list[SearchNode]
    orbitSizes: list[int]
    extensionCounts: list[int]
    labeledCountA: int
    labeledCountB: int | None = None

    @property
    def num_classes(self) -> int:
        return len(self.orbitSizes)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "classes": len(self.orbitSizes),
            "orbitSizes": [str(x) for x in self.orbitSizes],
            "extensionCounts": [str(x) for x in self.extensionCounts],
            "labeledCountA": str(self.labeledCountA),
            "labeledCountB": None if self.labeledCountB is None else str(self.labeledCountB),
        }


def group_order(q: int, m: int, n: int) -> int:
    return math.factorial(m) * q**m * math.factorial(n) * q**n


# --------------------------------------------------------------------------
# weak canonical parent

def _pair_types(L: np.ndarray, q: int) -> dict[tuple[int, int], tuple[int, ...]]:
    """Difference histogram of every row pair, canonical under cyclic shift and negation."""
    m = L.shape[0]
    D = (L[:, None, :] - L[None, :, :]) % q
    H = np.stack([(D == g).sum(axis=2) for g in range(q)], axis=2)
    neg = (-np.arange(q)) % q
    out = {}
    for i in range(m):
        for j in range(i + 1, m):
            h = H[i, j]
            hn = h[neg]
            out[i, j] = min(min(tuple(np.roll(h, s)) for s in range(q)), min(tuple(np.roll(hn, s)) for s in range(q)))
    return out


def deletion_keys(X: ButsonMatrix) -> list[tuple]:
    """Equivalence-invariant key of X with row r removed, for each r."""
    m = X.m
    types = _pair_types(X.L.astype(np.int64), X.q)
    keys = []
    for r in range(m):
        keys.append(tuple(sorted(t for (i, j), t in types.items() if r != i and r != j)))
    return keys


def _deleted(X: ButsonMatrix, r: int) -> ButsonMatrix:
    return dephase(X.delete_row(r))


def weak_parent_key(X: ButsonMatrix) -> tuple[tuple, CanonicalForm]:
    keys = deletion_keys(X)
    best = min(keys)
    forms = [canonical_form(_deleted(X, r)) for r, k in enumerate(keys) if k == best]
    return best, min(forms)


def weak_parent(X: SearchNode | ButsonMatrix) -> CanonicalForm:
    """Canonical form of the row deletion that is least in (invariant, form) order."""
    M = X.matrix if isinstance(X, SearchNode) else X
    if M.m < 2:
        raise ValueError("weak parent needs at least two rows")
    return weak_parent_key(M)[1]


def _accept_matrix(X: ButsonMatrix, parent_form: CanonicalForm) -> bool:
    keys = deletion_keys(X)
    best = min(keys)
    if keys[-1] != best:
        return False
    ties = [r for r, k in enumerate(keys[:-1]) if k == best]
    return all(parent_form <= canonical_form(_deleted(X, r)) for r in ties)


def accept(X: SearchNode) -> bool:
    """True iff the actual parent of X is its weak canonical parent."""
    parent = X.parentCanonical
    if parent is None:
        parent = canonical_form(_deleted(X.matrix, X.m - 1))
    return _accept_matrix(X.matrix, parent)


# --------------------------------------------------------------------------
# tree expansion

def extensions(X: SearchNode | ButsonMatrix) -> np.ndarray:
    """Rows (first entry 0) orthogonal to every row of X, lexicographically ordered."""
    M = X.matrix if isinstance(X, SearchNode) else X
    if M.m >= M.n:
        return np.zeros((0, M.n), dtype=np.int64)
    return extend_rows(M.L, M.q)


def children(X: SearchNode) -> tuple[list[SearchNode], int]:
    """Accepted, pairwise inequivalent children of X and the number of extension rows."""
    rows = extensions(X)
    seen: set[bytes] = set()
    out = []
    for v in rows:
        C = X.matrix.append_row(v)
        if not _accept_matrix(C, X.canonical):
            continue
        cf = canonical_form(C)
        if cf in seen:
            continue
        seen.add(cf)
        out.append(SearchNode(C, cf, X.canonical))
    return out, len(rows)


def root_node(q: int, n: int) -> SearchNode:
    M = ButsonMatrix(q, np.zeros((1, n), dtype=np.int64))
    return SearchNode(M, canonical_form(M), None)


# flat record kept per class: (exponent bytes, canonical form, aut order, extension count)
Record = tuple[bytes, bytes, int, int]


def _finish(node: SearchNode, limit: int, n: int, want_ext: bool) -> tuple[list[SearchNode], Record]:
    node.autOrder = automorphism_order(node.matrix)
    if node.m < min(limit, n):
        kids, ext = children(node)
    else:
        kids = []
        ext = len(extensions(node)) if (want_ext and node.m < n) else 0
    node.extCount = ext
    return kids, (node.matrix.L.astype(np.int8).tobytes(), node.canonical, node.autOrder, ext)


def explore_subtree(q: int, n: int, L_bytes: bytes, m: int, limit: int) -> dict[int, list[Record]]:
    """Depth-first expansion of one frontier node; returns records per level."""
    L = np.frombuffer(L_bytes, dtype=np.int8).reshape(m, n)
    M = ButsonMatrix(q, L)
    stack = [SearchNode(M, canonical_form(M), None)]
    out: dict[int, list[Record]] = {}
    while stack:
        node = stack.pop()
        kids, rec = _finish(node, limit, n, False)
        out.setdefault(node.m, []).append(rec)
        stack.extend(reversed(kids))
    return out


def _record_node(q: int, n: int, rec: Record) -> SearchNode:
    Lb, cf, aut, ext = rec
    M = ButsonMatrix(q, np.frombuffer(Lb, dtype=np.int8).reshape(-1, n))
    return SearchNode(M, cf, None, aut, ext)


class Journal:
    """Append-only JSON-lines record of completed frontier subtrees."""

    def __init__(self, path: str | os.PathLike, q: int, n: int, frontier: int, limit: int):
        self.path = Path(path)
        self.meta = {"q": q, "n": n, "frontier": frontier, "limit": limit}
        self.done: dict[str, dict[int, list[Record]]] = {}
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        entry = json.loads(line)
                    except json.JSONDecodeError:
                        break  # torn final line from an interrupted run
                    if "meta" in entry:
                        if entry["meta"] != self.meta:
                            raise ValueError(f"journal {self.path} belongs to a different run: {entry['meta']}")
                        continue
                    self.done[entry["key"]] = {
                        int(k): [(bytes.fromhex(a), bytes.fromhex(b), int(c), int(d)) for a, b, c, d in v]
                        for k, v in entry["levels"].items()
                    }
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(json.dumps({"meta": self.meta}) + "\n")

    def add(self, key: str, levels: dict[int, list[Record]]) -> None:
        entry = {
            "key": key,
            "levels": {str(k): [[a.hex(), b.hex(), str(c), str(d)] for a, b, c, d in v] for k, v in levels.items()},
        }
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        self.done[key] = levels


def classify(
    q: int,
    n: int,
    jobs: int = 1,
    frontier: int = 3,
    level_limit: int | None = None,
    journal: str | os.PathLike | None = None,
    keep_reps: str = "all",
) -> list[LevelReport]:
    """Classify candidate BH(q,m,n) matrices for m = 1..level_limit (default n).

    Levels up to ``frontier`` are expanded breadth first; each frontier node's
    subtree is then explored depth first, in worker processes when jobs > 1.
    ``keep_reps`` is "all" or "final" (representatives kept only at the last level).
    """
    if q < 1 or n < 1:
        raise ValueError("q and n must be positive")
    limit = n if level_limit is None else max(1, min(level_limit, n))
    frontier = max(1, min(frontier, limit))
    levels: dict[int, list[Record]] = {}

    layer = [root_node(q, n)]
    for m in range(1, frontier + 1):
        nxt = []
        for node in layer:
            if m < frontier:
                kids, rec = _finish(node, limit, n, True)
                nxt.extend(kids)
                levels.setdefault(m, []).append(rec)
        if m < frontier:
            layer = nxt
    # layer now holds the frontier nodes (level `frontier`)
    jr = Journal(journal, q, n, frontier, limit) if journal else None
    tasks = []
    for node in layer:
        key = form_digest(node.canonical)
        if jr is not None and key in jr.done:
            continue
        tasks.append((key, node.matrix.L.astype(np.int8).tobytes()))

    def merge(part: dict[int, list[Record]]) -> None:
        for k, v in part.items():
            levels.setdefault(k, []).extend(v)

    if jr is not None:
        for part in jr.done.values():
            merge(part)
    log.info("frontier level %d: %d nodes, %d to explore", frontier, len(layer), len(tasks))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futs = [(key, ex.submit(explore_subtree, q, n, Lb, frontier, limit)) for key, Lb in tasks]
            for key, fut in futs:
                part = fut.result()
                if jr is not None:
                    jr.add(key, part)
                merge(part)
    else:
        for key, Lb in tasks:
            part = explore_subtree(q, n, Lb, frontier, limit)
            if jr is not None:
                jr.add(key, part)
            merge(part)

    reports = []
    for m in range(1, limit + 1):
        recs = sorted(levels.get(m, []), key=lambda r: r[1])
        G = group_order(q, m, n)
        orbits = [G // r[2] for r in recs]
        keep = keep_reps == "all" or m == limit
        reps = [_record_node(q, n, r) for r in recs] if keep else []
        reports.append(LevelReport(m, reps, orbits, [r[3] for r in recs], sum(orbits)))
    _fill_method_b(q, n, reports)
    return reports


def _fill_method_b(q: int, n: int, reports: list[LevelReport]) -> None:
    for idx, rep in enumerate(reports):
        if rep.m == 1:
            rep.labeledCountB = q**n
        else:
            prev = reports[idx - 1]
            rep.labeledCountB = sum(o * q * e for o, e in zip(prev.orbitSizes, prev.extensionCounts))


def double_count_check(reports: list[LevelReport]) -> tuple[bool, list[str]]:
    """Compare orbit-stabilizer counts (A) with extension counts (B) level by level."""
    problems = []
    for idx, rep in enumerate(reports):
        if rep.labeledCountB is None:
            problems.append(f"level {rep.m}: method B count missing")
            continue
        if rep.labeledCountA != rep.labeledCountB:
            detail = f"level {rep.m}: A={rep.labeledCountA} B={rep.labeledCountB}"
            if idx:
                prev = reports[idx - 1]
                detail += "; parent classes (orbit, ext): " + ", ".join(
                    f"({o},{e})" for o, e in zip(prev.orbitSizes, prev.extensionCounts)
                )
            problems.append(detail)
    return not problems, problems


def require_consistent(reports: list[LevelReport]) -> None:
    ok, problems = double_count_check(reports)
    if not ok:
        raise DoubleCountError("; ".join(problems))

"""Equivalence graphs, canonical forms, automorphism orders and ACT classes.

A matrix L over Z_q is encoded as a two-coloured digraph. Every row i owns q
row-cells r(i,g) joined by a directed cycle g -> g+1, every column j owns q
column-cells c(j,h) likewise, and r(i,g) is joined to c(j, g + L[i,j]).
Colour-preserving isomorphisms of these graphs are exactly monomial
equivalences, so nauty's canonical labelling yields a canonical form.
"""

from __future__ import annotations

import hashlib
import os
import sqlite3
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pynauty

from .algebra import ButsonMatrix, act_variants

CanonicalForm = bytes


@dataclass(frozen=True)
class EquivalenceGraph:
    q: int
    m: int
    n: int
    arcs: tuple[tuple[int, int], ...]  # directed cycle arcs
    edges: tuple[tuple[int, int], ...]  # undirected incidence edges (row-cell, column-cell)

    @property
    def num_vertices(self) -> int:
        return self.q * (self.m + self.n)

    def row_cell(self, i: int, g: int) -> int:
        return i * self.q + g % self.q

    def col_cell(self, j: int, h: int) -> int:
        return (self.m + j) * self.q + h % self.q

    def coloring(self) -> list[set[int]]:
        split = self.m * self.q
        return [set(range(split)), set(range(split, self.num_vertices))]

    def to_pynauty(self) -> pynauty.Graph:
        adj: dict[int, list[int]] = {v: [] for v in range(self.num_vertices)}
        for u, v in self.arcs:
            adj[u].append(v)
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return pynauty.Graph(self.num_vertices, directed=True, adjacency_dict=adj, vertex_coloring=self.coloring())


def build_graph(M: ButsonMatrix) -> EquivalenceGraph:
    q, (m, n) = M.q, M.shape
    L = M.L.astype(np.int64)
    arcs = []
    if q >= 2:
        # for q = 2 the pair of opposite arcs is an undirected edge, whose only
        # non-trivial symmetry is the row (column) negation we want to allow
        for b in range(m + n):
            arcs.extend((b * q + g, b * q + (g + 1) % q) for g in range(q))
    I, J, G = np.meshgrid(np.arange(m), np.arange(n), np.arange(q), indexing="ij")
    rows = (I * q + G).ravel()
    cols = ((m + J) * q + (G + L[:, :, None]) % q).ravel()
    edges = tuple(zip(rows.tolist(), cols.tolist()))
    return EquivalenceGraph(q, m, n, tuple(arcs), edges)


def _graph_canonical(G: EquivalenceGraph) -> CanonicalForm:
    header = f"{G.q},{G.m},{G.n};".encode()
    return header + pynauty.certificate(G.to_pynauty())


def canonical_form(G: EquivalenceGraph | ButsonMatrix) -> CanonicalForm:
    """Canonical byte string; equal exactly for isomorphic graphs (equivalent matrices)."""
    if isinstance(G, ButsonMatrix):
        return _CACHE.get(G)
    return _graph_canonical(G)


def form_digest(cf: CanonicalForm, size: int = 16) -> str:
    """Short hex digest of a canonical form, used in file names and reports."""
    return hashlib.blake2b(cf, digest_size=size).hexdigest()


class CanonicalCache:
    """Memo of canonical forms keyed by a 128-bit hash of (q, shape, L).

    The full matrix key is stored next to each form, so a hash collision falls
    through to recomputation instead of returning a wrong form. When
    ``BUTSON_CACHE_DIR`` is set, forms are also persisted in an sqlite file.
    """

    def __init__(self, directory: str | os.PathLike | None = None, max_items: int = 1 << 20):
        self._mem: dict[bytes, tuple[bytes, bytes]] = {}
        self._lock = threading.Lock()
        self.max_items = max_items
        self.hits = 0
        self.misses = 0
        self._db = None
        if directory:
            path = Path(directory)
            path.mkdir(parents=True, exist_ok=True)
            self._db = sqlite3.connect(path / "canonical.sqlite", check_same_thread=False)
            self._db.execute("CREATE TABLE IF NOT EXISTS forms (h BLOB PRIMARY KEY, k BLOB, f BLOB)")

    @staticmethod
    def _key(M: ButsonMatrix) -> bytes:
        return f"{M.q},{M.m},{M.n};".encode() + M.L.astype(np.int8 if M.q < 128 else np.int16).tobytes()

    def get(self, M: ButsonMatrix) -> CanonicalForm:
        key = self._key(M)
        h = hashlib.blake2b(key, digest_size=16).digest()
        hit = self._mem.get(h)
        if hit is not None and hit[0] == key:
            self.hits += 1
            return hit[1]
        if self._db is not None:
            with self._lock:
                row = self._db.execute("SELECT k, f FROM forms WHERE h = ?", (h,)).fetchone()
            if row is not None and row[0] == key:
                self.hits += 1
                self._mem[h] = (key, row[1])
                return row[1]
        self.misses += 1
        cf = _graph_canonical(build_graph(M))
        with self._lock:
            if len(self._mem) >= self.max_items:
                self._mem.clear()
            self._mem[h] = (key, cf)
            if self._db is not None:
                self._db.execute("INSERT OR REPLACE INTO forms VALUES (?, ?, ?)", (h, key, cf))
                self._db.commit()
        return cf

    def clear(self) -> None:
        self._mem.clear()


_CACHE = CanonicalCache(os.environ.get("BUTSON_CACHE_DIR"))


def cache() -> CanonicalCache:
    return _CACHE


def are_equivalent(M1: ButsonMatrix, M2: ButsonMatrix) -> bool:
    if M1.q != M2.q or M1.shape != M2.shape:
        raise ValueError(f"cannot compare BH({M1.q},{M1.m},{M1.n}) with BH({M2.q},{M2.m},{M2.n})")
    return canonical_form(M1) == canonical_form(M2)


def graph_automorphism_order(M: ButsonMatrix) -> int:
    """Order of the colour-preserving automorphism group of the equivalence graph."""
    gens, mant, exp10, _, _ = pynauty.autgrp(build_graph(M).to_pynauty())
    approx = mant * 10.0**exp10
    if approx < 2**52:
        return int(round(approx))
    from sympy.combinatorics import Permutation, PermutationGroup

    nv = M.q * (M.m + M.n)
    return int(PermutationGroup([Permutation(g, size=nv) for g in gens]).order())


def automorphism_order(M: ButsonMatrix) -> int:
    """Number of pairs (P, Q) of monomial matrices with P H Q* = H.

    Every such pair, including the scalar pairs (cI, cI), acts on the
    equivalence graph as a distinct automorphism and vice versa.
    """
    return graph_automorphism_order(M)


def act_class(M: ButsonMatrix) -> tuple[tuple[bool, bool, bool], frozenset[CanonicalForm]]:
    """ACT flags (H~H*, H~conj H, H~H^T) and the distinct forms among the four variants."""
    if M.m != M.n:
        raise ValueError("ACT classes are defined for square matrices only")
    base = canonical_form(M)
    forms = [canonical_form(V) for V in act_variants(M)]
    flags = tuple(f == base for f in forms)
    return flags, frozenset([base, *forms])  # type: ignore[return-value]


def act_identity(M: ButsonMatrix) -> CanonicalForm:
    return min(act_class(M)[1])


def flags_string(flags) -> str:
    return "".join("Y" if f else "N" for f in flags)

"""Affine parametric families of complex Hadamard matrices.

An entry is a unimodular monomial zeta_q^c * prod_k a_k^(e_k); a negative
exponent stands for the conjugate since |a_k| = 1.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import ButsonMatrix, dephase, is_hadamard
from .cyclotomic import CyclotomicInt


@dataclass(frozen=True)
class Monomial:
    c: int
    e: tuple[int, ...]

    def times(self, other: "Monomial", q: int) -> "Monomial":
        return Monomial((self.c + other.c) % q, tuple(a + b for a, b in zip(self.e, other.e)))

    def conjugate(self, q: int) -> "Monomial":
        return Monomial((-self.c) % q, tuple(-a for a in self.e))

    def __str__(self) -> str:
        return f"{self.c}:" + ",".join(str(x) for x in self.e)


class FamilyError(ValueError):
    pass


@dataclass
class AffineFamily:
    q: int
    params: tuple[str, ...]
    entries: list[list[Monomial]]
    name: str = "F"

    def __post_init__(self):
        self.params = tuple(self.params)
        n = len(self.entries)
        k = len(self.params)
        for row in self.entries:
            if len(row) != n:
                raise FamilyError(f"family {self.name}: non-square entry array")
            for mono in row:
                if len(mono.e) != k:
                    raise FamilyError(f"family {self.name}: monomial with {len(mono.e)} exponents, expected {k}")
        self.entries = [[Monomial(mo.c % self.q, tuple(mo.e)) for mo in row] for row in self.entries]

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def k(self) -> int:
        return len(self.params)

    def coefficient_exponents(self) -> np.ndarray:
        return np.array([[mo.c for mo in row] for row in self.entries], dtype=np.int64)

    def parameter_exponents(self) -> np.ndarray:
        """Array of shape (n, n, k) with the parameter exponents of every entry."""
        return np.array([[mo.e for mo in row] for row in self.entries], dtype=np.int64).reshape(self.n, self.n, self.k)

    def active_params(self) -> tuple[str, ...]:
        E = self.parameter_exponents()
        return tuple(p for t, p in enumerate(self.params) if E[:, :, t].any())

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffineFamily):
            return NotImplemented
        return self.q == other.q and self.params == other.params and self.entries == other.entries


def monomial_inner_groups(F: AffineFamily, i: int, j: int) -> dict[tuple[int, ...], CyclotomicInt]:
    """Symbolic <row_i, row_j> grouped by parameter exponent vector."""
    q = F.q
    groups: dict[tuple[int, ...], list[int]] = defaultdict(lambda: [0] * q)
    for a, b in zip(F.entries[i], F.entries[j]):
        e = tuple(x - y for x, y in zip(a.e, b.e))
        groups[e][(a.c - b.c) % q] += 1
    return {e: CyclotomicInt(q, c) for e, c in groups.items()}


def verify_family(F: AffineFamily) -> bool:
    """True iff F is complex Hadamard for every unimodular parameter assignment.

    Distinct exponent vectors are distinct characters of the parameter torus,
    so the inner product vanishes identically iff each group's coefficient does.
    """
    for i in range(F.n):
        for j in range(i + 1, F.n):
            if any(not v.is_zero() for v in monomial_inner_groups(F, i, j).values()):
                return False
    return True


def failing_pairs(F: AffineFamily) -> list[tuple[int, int]]:
    return [
        (i, j)
        for i in range(F.n)
        for j in range(i + 1, F.n)
        if any(not v.is_zero() for v in monomial_inner_groups(F, i, j).values())
    ]


def _as_exponents(F: AffineFamily, assignment) -> list[int]:
    if isinstance(assignment, Mapping):
        return [int(assignment[p]) for p in F.params]
    vals = [int(v) for v in assignment]
    if len(vals) != F.k:
        raise FamilyError(f"{F.name}: expected {F.k} parameter values, got {len(vals)}")
    return vals


def evaluate(F: AffineFamily, assignment, r: int = 4, dephased: bool = False) -> ButsonMatrix:
    """Evaluate with parameter p_k = zeta_r^(assignment[k]).

    The result lives over Z_Q with Q = lcm(q, r).
    """
    vals = np.asarray(_as_exponents(F, assignment), dtype=np.int64)
    Q = math.lcm(F.q, r)
    L = F.coefficient_exponents() * (Q // F.q)
    if F.k:
        L = L + (F.parameter_exponents() @ vals) * (Q // r)
    M = ButsonMatrix(Q, L)
    return dephase(M) if dephased else M


def evaluate_complex(F: AffineFamily, values: Sequence[complex]) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    C = np.exp(2j * np.pi * F.coefficient_exponents() / F.q)
    if F.k:
        E = F.parameter_exponents()
        C = C * np.prod(values[None, None, :] ** E, axis=2)
    return C


def evaluate_grid(F: AffineFamily, r: int, chunk: int = 1 << 14) -> Iterable[tuple[np.ndarray, np.ndarray]]:
    """Yield (assignments, dephased exponent arrays over Z_lcm(q,r)) in chunks."""
    Q = math.lcm(F.q, r)
    base = F.coefficient_exponents() * (Q // F.q)
    E = F.parameter_exponents().reshape(F.n * F.n, F.k) if F.k else np.zeros((F.n * F.n, 0), dtype=np.int64)
    total = r**F.k
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        A = np.empty((idx.size, F.k), dtype=np.int64)
        rem = idx.copy()
        for t in range(F.k - 1, -1, -1):
            A[:, t] = rem % r
            rem //= r
        L = base[None] + (A @ E.T).reshape(-1, F.n, F.n) * (Q // r)
        L = (L - L[:, :, :1] - L[:, :1, :] + L[:, :1, :1]) % Q
        yield A, L


def symbolic_dephase(F: AffineFamily) -> AffineFamily:
    """Multiply rows and columns by monomials so the first row and column are 1."""
    q = F.q
    first_row = F.entries[0]
    first_col = [row[0] for row in F.entries]
    corner = F.entries[0][0]
    out = []
    for i, row in enumerate(F.entries):
        new = []
        for j, mo in enumerate(row):
            x = mo.times(first_col[i].conjugate(q), q).times(first_row[j].conjugate(q), q).times(corner, q)
            new.append(x)
        out.append(new)
    return AffineFamily(q, F.params, out, F.name)


def restrict(F: AffineFamily, fixed: Mapping[str, int], r: int = 4, name: str | None = None) -> AffineFamily:
    """Substitute p = zeta_r^v for the parameters in ``fixed`` (r must divide q)."""
    if F.q % r:
        raise FamilyError("restriction needs r dividing q")
    keep = [t for t, p in enumerate(F.params) if p not in fixed]
    out = []
    for row in F.entries:
        new = []
        for mo in row:
            c = mo.c + sum(mo.e[t] * fixed[p] * (F.q // r) for t, p in enumerate(F.params) if p in fixed)
            new.append(Monomial(c % F.q, tuple(mo.e[t] for t in keep)))
        out.append(new)
    return AffineFamily(F.q, tuple(F.params[t] for t in keep), out, name or F.name)


# --------------------------------------------------------------------------
# family files

def format_family(F: AffineFamily) -> str:
    lines = [f"FAMILY {F.q} {F.n} {F.k} {F.name} " + " ".join(F.params)]
    for row in F.entries:
        lines.append(" ".join(str(mo) for mo in row))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def parse_family(text: str, source: str | None = None) -> AffineFamily:
    from .io import ParseError

    rows = []
    header = None
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            tok = line.split()
            if tok[0] != "FAMILY" or len(tok) < 5:
                raise ParseError("expected header 'FAMILY q n k name params...'", lineno, source)
            try:
                q, n, k = int(tok[1]), int(tok[2]), int(tok[3])
            except ValueError:
                raise ParseError("non-integer value in header", lineno, source) from None
            params = tuple(tok[5:])
            if len(params) != k:
                raise ParseError(f"header declares {k} parameters but names {len(params)}", lineno, source)
            header = (q, n, k, tok[4], params)
            continue
        q, n, k, _, _ = header
        tokens = line.split()
        if len(tokens) != n:
            raise ParseError(f"expected {n} entries, found {len(tokens)}", lineno, source)
        row = []
        for tok in tokens:
            c, _, es = tok.partition(":")
            try:
                e = tuple(int(x) for x in es.split(",")) if es else ()
                c = int(c)
            except ValueError:
                raise ParseError(f"malformed monomial {tok!r}", lineno, source) from None
            if len(e) != k:
                raise ParseError(f"monomial {tok!r} has {len(e)} exponents, expected {k}", lineno, source)
            row.append(Monomial(c % q, e))
        rows.append(row)
    if header is None:
        raise ParseError("empty family file", 1, source)
    q, n, k, name, params = header
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, found {len(rows)}", None, source)
    return AffineFamily(q, params, rows, name)


def read_family(path) -> AffineFamily:
    path = Path(path)
    return parse_family(path.read_text(encoding="utf-8"), source=str(path))


def write_family(path, F: AffineFamily) -> None:
    Path(path).write_text(format_family(F), encoding="utf-8", newline="\n")


_DATA = Path(__file__).parent / "data" / "families"


def bundled_family_names() -> list[str]:
    return sorted(p.stem for p in _DATA.glob("*.fam"))


def load_bundled(name: str) -> AffineFamily:
    path = _DATA / f"{name}.fam"
    if not path.exists():
        raise KeyError(f"no bundled family named {name!r}")
    return read_family(path)


def load_all_bundled() -> dict[str, AffineFamily]:
    return {name: load_bundled(name) for name in bundled_family_names()}


# --------------------------------------------------------------------------
# membership at roots of unity

class MembershipLimitError(RuntimeError):
    pass


@dataclass
class Members:
    """Distinct BH(r,n) matrices among the r-th root evaluations of a family."""

    family: str
    r: int
    evaluations: int
    matrices: dict[bytes, ButsonMatrix]  # canonical form -> one dephased representative
    assignments: dict[bytes, tuple[int, ...]]  # canonical form -> first assignment reaching it
    act_classes: dict[bytes, set[bytes]]  # ACT identity -> member forms in that class

    @property
    def forms(self) -> set[bytes]:
        return set(self.matrices)


def members(F: AffineFamily, r: int = 4, cap: int = 10**8, chunk: int = 1 << 14) -> Members:
    """Evaluate F at every r-th root assignment and keep the BH(r,n) members.

    A dephased evaluation is equivalent to a BH(r,n) matrix exactly when all of
    its entries are r-th roots of unity.
    """
    from .equivalence import act_identity, canonical_form

    total = r**F.k
    if total > cap:
        raise MembershipLimitError(f"{F.name}: {total} evaluations exceed the cap of {cap}")
    Q = math.lcm(F.q, r)
    step = Q // r
    seen: dict[bytes, tuple[int, ...]] = {}
    for A, L in evaluate_grid(F, r, chunk):
        ok = np.all(L % step == 0, axis=(1, 2))
        for t in np.flatnonzero(ok):
            key = (L[t] // step).astype(np.int8).tobytes()
            if key not in seen:
                seen[key] = tuple(int(x) for x in A[t])
    mats: dict[bytes, ButsonMatrix] = {}
    where: dict[bytes, tuple[int, ...]] = {}
    for key, assignment in seen.items():
        M = ButsonMatrix(r, np.frombuffer(key, dtype=np.int8).reshape(F.n, F.n))
        cf = canonical_form(M)
        if cf not in mats:
            mats[cf] = M
            where[cf] = assignment
    act: dict[bytes, set[bytes]] = {}
    for cf, M in mats.items():
        act.setdefault(act_identity(M), set()).add(cf)
    return Members(F.name, r, total, mats, where, act)


# --------------------------------------------------------------------------
# constructions of one- and two-parameter families

def _family_key(F: AffineFamily) -> tuple:
    """Key identifying F up to dephasing, parameter renaming and parameter conjugation."""
    D = symbolic_dephase(F)
    E = D.parameter_exponents()
    C = D.coefficient_exponents()
    best = None
    for perm in itertools.permutations(range(F.k)):
        for signs in itertools.product((1, -1), repeat=F.k):
            Ep = E[:, :, list(perm)] * np.array(signs, dtype=np.int64) if F.k else E
            cand = (C.tobytes(), Ep.tobytes())
            if best is None or cand < best:
                best = cand
    return (F.q, F.n, F.k, best)


def _dedupe(families: list[AffineFamily]) -> list[AffineFamily]:
    out, keys = [], set()
    for F in families:
        key = _family_key(F)
        if key not in keys:
            keys.add(key)
            out.append(F)
    return out


def parametrize_spl1(M: ButsonMatrix, name: str = "H") -> list[AffineFamily]:
    """One-parameter families from row pairs u, v with u_k^2 = v_k^2 for all k.

    Both rows are multiplied by a at the columns where u_k = -v_k.
    """
    q, n = M.q, M.n
    if q % 2:
        return []
    h = q // 2
    L = M.L.astype(np.int64)
    out = []
    for i in range(M.m):
        for j in range(i + 1, M.m):
            d = (L[i] - L[j]) % q
            if not np.all((d == 0) | (d == h)):
                continue
            S = d == h
            if not S.any() or S.all():
                continue
            entries = [[Monomial(int(L[r, c]), (1,) if r in (i, j) and S[c] else (0,)) for c in range(n)] for r in range(M.m)]
            F = AffineFamily(q, ("a",), entries, f"{name}_spl1_{i}_{j}")
            if verify_family(F):
                out.append(F)
    return _dedupe(out)


def _block_structures(C: np.ndarray, E: np.ndarray, q: int):
    """Yield (r2, r3, j1, j2, y_cols, w_rows, equal) for every block structure.

    C and E are the coefficient and parameter exponents of a dephased family;
    two entries are equal when both agree and negated when the exponents agree
    and the coefficients differ by q/2.
    """
    n = C.shape[0]
    h = q // 2 if q % 2 == 0 else None

    def relation(r1, c1, r2, c2):
        if not np.array_equal(E[r1, c1], E[r2, c2]):
            return None
        d = (C[r1, c1] - C[r2, c2]) % q
        if d == 0:
            return 0
        return 1 if d == h else None

    for r2 in range(1, n):
        for r3 in range(1, n):
            if r3 == r2:
                continue
            col_rel = [relation(r2, c, r3, c) for c in range(n)]
            for j1 in range(1, n):
                for j2 in range(j1 + 1, n):
                    if relation(r2, j1, r3, j2) != 0 or relation(r2, j2, r3, j1) != 0:
                        continue
                    rest = [c for c in range(1, n) if c not in (j1, j2)]
                    if any(col_rel[c] is None for c in rest):
                        continue
                    y_cols = [c for c in rest if col_rel[c] == 1]
                    w_rows = []
                    ok = True
                    for r in range(1, n):
                        if r in (r2, r3):
                            continue
                        rel = relation(r, j1, r, j2)
                        if rel is None:
                            ok = False
                            break
                        if rel == 1:
                            w_rows.append(r)
                    if ok:
                        yield r2, r3, j1, j2, y_cols, w_rows, relation(r2, j1, r2, j2) == 0


def _fresh_names(used, count: int) -> list[str]:
    pool = [chr(c) for c in range(ord("a"), ord("z") + 1)] + [f"p{t}" for t in range(100)]
    return [p for p in pool if p not in used][:count]


def as_family(M: ButsonMatrix, name: str = "H") -> AffineFamily:
    """The constant (parameter-free) family of a matrix."""
    return AffineFamily(M.q, (), [[Monomial(int(x), ()) for x in row] for row in M.L.astype(np.int64)], name)


def parametrize_blocks(M: ButsonMatrix | AffineFamily, name: str | None = None) -> list[AffineFamily]:
    """Families from the two-row block structure: y -> a*y, w -> conj(a)*w.

    Rows r2, r3 carry (a, b) and (b, a) in columns j1, j2; every other column
    holds equal (x) or negated (y) entries of the two rows, and every other row
    holds equal (z) or negated (w) entries in columns j1, j2. When a = b the w
    part takes an independent second parameter. A family input is extended by
    fresh parameters, which allows the construction to be iterated.
    """
    F0 = as_family(M) if isinstance(M, ButsonMatrix) else M
    if name is None:
        name = F0.name
    F0 = symbolic_dephase(F0)
    q, n, k0 = F0.q, F0.n, F0.k
    C = F0.coefficient_exponents()
    E = F0.parameter_exponents()
    out = []
    for r2, r3, j1, j2, y_cols, w_rows, equal in _block_structures(C, E, q):
        if not y_cols and not w_rows:
            continue
        extra = 2 if (equal and y_cols and w_rows) else 1
        new = _fresh_names(F0.params, extra)
        entries = []
        for r in range(n):
            row = []
            for c in range(n):
                e = list(F0.entries[r][c].e) + [0] * extra
                if r in (r2, r3) and c in y_cols:
                    e[k0] += 1
                elif r in w_rows and c in (j1, j2):
                    if extra == 2:
                        e[k0 + 1] += 1
                    elif y_cols:
                        e[k0] -= 1
                    else:
                        e[k0] += 1
                row.append(Monomial(int(C[r, c]), tuple(e)))
            entries.append(row)
        F = AffineFamily(q, F0.params + tuple(new), entries, f"{name}_blk_{r2}_{r3}_{j1}_{j2}")
        if verify_family(F):
            out.append(F)
    return _dedupe(out)


def joint_defect_directions(samples):
    """Common dephased phasing directions of several evaluations (see invariants)."""
    from .invariants import joint_defect_directions as _jdd

    return _jdd(samples)

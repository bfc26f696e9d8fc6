"""Reference tables, class catalogues and table-style reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import ButsonMatrix, is_hadamard
from .equivalence import act_class, canonical_form, form_digest
from .families import AffineFamily, evaluate, load_bundled, members
from .invariants import InvariantProfile, default_minor_sizes, profile

_DATA = Path(__file__).parent / "data"
_SYMBOLS = {0: "1", 1: "i", 2: "-1", 3: "-i"}


def coordinate_string(coords) -> str:
    return ",".join(_SYMBOLS.get(int(c) % 4, str(c)) for c in coords)


@dataclass(frozen=True)
class ReferenceRow:
    act_class: int
    equiv_classes: tuple[int, ...]
    family: str
    coords: tuple[int, ...]  # parameter p = i^coord
    act: str
    hbs: str
    aut_order: int
    defect: int
    orbit: int
    zq_rank: int
    minors: tuple[int, ...]

    def matrix(self) -> ButsonMatrix:
        return evaluate(load_bundled(self.family), self.coords, 4)


def reference_minor_sizes(n: int) -> tuple[int, ...]:
    return {10: (3,), 12: (4, 5)}[n]


def load_reference(n: int) -> list[ReferenceRow]:
    """Published summary rows for BH(4,n), n in {10, 12}."""
    path = _DATA / f"catalog_bh4_{n}.tsv"
    if not path.exists():
        raise KeyError(f"no reference table for n={n}")
    rows = []
    header = None
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        cells = line.split("\t")
        if header is None:
            header = cells
            continue
        d = dict(zip(header, cells))
        rows.append(
            ReferenceRow(
                act_class=int(d["act_class"]),
                equiv_classes=tuple(int(x) for x in d["equiv_classes"].split(",")),
                family=d["family"],
                coords=tuple(int(x) for x in d["coords"].split(",")) if d["coords"] else (),
                act=d["act"],
                hbs=d["hbs"],
                aut_order=int(d["aut_order"]),
                defect=int(d["defect"]),
                orbit=int(d["orbit"]),
                zq_rank=int(d["zq_rank"]),
                minors=tuple(int(x) for x in d["minors"].split(",")),
            )
        )
    return rows


def load_coverage() -> dict[str, list[tuple[int, bool]]]:
    """Family -> [(reference ACT class, listed as unique to this family)] for n = 12."""
    out = {}
    for line in (_DATA / "family_coverage_bh4_12.tsv").read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#") or line.startswith("family\t"):
            continue
        name, classes = line.split("\t")
        out[name] = [(int(c.lstrip("*")), c.startswith("*")) for c in classes.split(",")]
    return out


def compare_profile(row: ReferenceRow, p: InvariantProfile, n: int) -> list[str]:
    """Column-by-column differences between a computed profile and a reference row."""
    sizes = reference_minor_sizes(n)
    got = {
        "aut_order": p.autOrder,
        "defect": p.defect,
        "zq_rank": p.zqRank,
        "minors": tuple(p.minorCounts[k] for k in sizes),
        "act": p.act,
    }
    want = {"aut_order": row.aut_order, "defect": row.defect, "zq_rank": row.zq_rank, "minors": row.minors, "act": row.act}
    return [f"{k}: computed {got[k]} vs table {want[k]}" for k in want if got[k] != want[k]]


# --------------------------------------------------------------------------

@dataclass
class CatalogEntry:
    classId: int
    actClassId: int
    matrixFile: str | None
    matrix: ButsonMatrix
    canonical: bytes
    actIdentity: bytes
    profile: InvariantProfile
    families: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)
    referenceClass: int | None = None

    def to_dict(self) -> dict:
        return {
            "classId": self.classId,
            "actClassId": self.actClassId,
            "matrixFile": self.matrixFile,
            "canonical": form_digest(self.canonical),
            "profile": self.profile.to_dict(),
            "families": [{"family": f, "coordinates": coordinate_string(c)} for f, c in self.families],
            "referenceClass": self.referenceClass,
        }


@dataclass
class Catalog:
    q: int | None
    n: int | None
    entries: list[CatalogEntry]
    metadata: dict = field(default_factory=dict)

    def act_classes(self) -> dict[int, list[CatalogEntry]]:
        out: dict[int, list[CatalogEntry]] = {}
        for e in self.entries:
            out.setdefault(e.actClassId, []).append(e)
        return out

    def to_json(self) -> str:
        return json.dumps(
            {"q": self.q, "n": self.n, "metadata": self.metadata, "entries": [e.to_dict() for e in self.entries]},
            indent=2,
        )

    def table(self) -> str:
        """One row per ACT class, in the layout of the published summaries."""
        sizes = default_minor_sizes(self.n) if self.n else ()
        head = ["ACT class", "Equiv. classes", "Family, coordinates", "ACT", "Aut. order", "Defect", "Orbit", "Zq rank", "Minors " + "/".join(f"{k}x{k}" for k in sizes), "Ref."]
        lines = []
        for aid, group in sorted(self.act_classes().items()):
            rep = group[0]
            fam = "-"
            for e in group:
                if e.families:
                    f, c = e.families[0]
                    fam = f"{f}({coordinate_string(c)})"
                    break
            p = rep.profile
            lines.append(
                [
                    str(aid),
                    ",".join(str(e.classId) for e in group),
                    fam,
                    p.act,
                    str(p.autOrder),
                    str(p.defect),
                    "-" if p.orbitDimension is None else str(p.orbitDimension),
                    str(p.zqRank),
                    ",".join(str(p.minorCounts[k]) for k in sorted(p.minorCounts)),
                    "-" if rep.referenceClass is None else str(rep.referenceClass),
                ]
            )
        widths = [max(len(h), *(len(r[t]) for r in lines)) if lines else len(h) for t, h in enumerate(head)]
        fmt = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
        return "\n".join([fmt(head), fmt(["-" * w for w in widths])] + [fmt(r) for r in lines]) + "\n"

    def coverage(self) -> dict[str, list[int]]:
        """Family -> ACT classes (catalogue numbering) containing at least one member."""
        out: dict[str, set[int]] = {}
        for e in self.entries:
            for f, _ in e.families:
                out.setdefault(f, set()).add(e.actClassId)
        return {f: sorted(v) for f, v in sorted(out.items())}

    def coverage_table(self) -> str:
        cov = self.coverage()
        counts: dict[int, int] = {}
        for ids in cov.values():
            for i in ids:
                counts[i] = counts.get(i, 0) + 1
        lines = []
        for f, ids in cov.items():
            lines.append(f"{f}\t" + ",".join(("*" if counts[i] == 1 else "") + str(i) for i in ids))
        return "\n".join(lines) + ("\n" if lines else "")


def build_catalog(
    matrices: list[tuple[str | None, ButsonMatrix]],
    families: dict[str, AffineFamily] | None = None,
    minor_sizes=None,
    metadata: dict | None = None,
) -> Catalog:
    """Catalogue inequivalent Hadamard matrices; classes are numbered in canonical-form order."""
    if not matrices:
        return Catalog(None, None, [], metadata or {})
    q, n = matrices[0][1].q, matrices[0][1].n
    for name, M in matrices:
        if M.q != q or M.m != M.n or M.n != n:
            raise ValueError(f"{name}: BH({M.q},{M.m},{M.n}) does not match BH({q},{n})")
        if not is_hadamard(M):
            raise ValueError(f"{name}: not a Hadamard matrix")
    by_form: dict[bytes, tuple[str | None, ButsonMatrix]] = {}
    for name, M in matrices:
        by_form.setdefault(canonical_form(M), (name, M))
    forms = sorted(by_form)
    act_id = {cf: min(act_class(by_form[cf][1])[1]) for cf in forms}
    act_order = {a: t + 1 for t, a in enumerate(sorted(set(act_id.values())))}

    member_map: dict[bytes, list[tuple[str, tuple[int, ...], int]]] = {}
    if families:
        for fname, F in sorted(families.items()):
            if F.n != n:
                continue
            res = members(F, q)
            for cf, coords in res.assignments.items():
                member_map.setdefault(cf, []).append((fname, coords, F.k))

    ref_map: dict[bytes, int] = {}
    if q == 4 and n in (10, 12):
        for row in load_reference(n):
            ref_map[min(act_class(row.matrix())[1])] = row.act_class

    entries = []
    for t, cf in enumerate(forms):
        name, M = by_form[cf]
        p = profile(M, minor_sizes)
        found = member_map.get(cf, [])
        # the orbit column is the parameter count of a family through the class
        act_found = [x for f in act_class(M)[1] for x in member_map.get(f, [])]
        if act_found:
            p.orbitDimension = max(k for _, _, k in act_found)
        entries.append(
            CatalogEntry(
                classId=t + 1,
                actClassId=act_order[act_id[cf]],
                matrixFile=name,
                matrix=M,
                canonical=cf,
                actIdentity=act_id[cf],
                profile=p,
                families=[(f, c) for f, c, _ in found],
                referenceClass=ref_map.get(act_id[cf]),
            )
        )
    return Catalog(q, n, entries, metadata or {})

"""Quivers, paths and path-algebra presentations.

A path is stored as a "mono": a pair (source vertex index, tuple of
arrow indices).  Trivial paths have an empty arrow tuple.  Composition
is left to right: for arrows a: i -> j and b: j -> k the word a.b is a
path i -> k.  Monomials are ordered degree-first, then by word length,
then left-lexicographically by arrow declaration order; this refinement
by length keeps the order admissible when arrows carry degrees > 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import ParseError, ValidationError
from .fields import Rationals, PrimeField, field_from_spec

Mono = tuple  # (source_vertex_index, tuple_of_arrow_indices)


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    degree: int = 1


class Quiver:
    def __init__(self, vertices, arrows):
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate arrow names")
        if set(names) & set(self.vertices):
            raise ValidationError("arrow names clash with vertex names")
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.arrow_index = {a.name: i for i, a in enumerate(self.arrows)}
        for a in self.arrows:
            if a.source not in self.vertex_index:
                raise ValidationError(f"arrow {a.name}: unknown source {a.source}")
            if a.target not in self.vertex_index:
                raise ValidationError(f"arrow {a.name}: unknown target {a.target}")
            if a.degree < 1:
                raise ValidationError(f"arrow {a.name}: degree must be positive")
        self._src = tuple(self.vertex_index[a.source] for a in self.arrows)
        self._tgt = tuple(self.vertex_index[a.target] for a in self.arrows)
        self._deg = tuple(a.degree for a in self.arrows)

    # -- mono helpers ------------------------------------------------------

    def trivial(self, v) -> Mono:
        if isinstance(v, str):
            v = self.vertex_index[v]
        return (v, ())

    def arrow_mono(self, name: str) -> Mono:
        i = self.arrow_index[name]
        return (self._src[i], (i,))

    def mono_from_names(self, names) -> Mono:
        idxs = []
        for n in names:
            if n not in self.arrow_index:
                raise ValidationError(f"unknown arrow {n!r}")
            idxs.append(self.arrow_index[n])
        for x, y in zip(idxs, idxs[1:]):
            if self._tgt[x] != self._src[y]:
                raise ValidationError(
                    f"non-composable word {'.'.join(names)}: "
                    f"target({self.arrows[x].name}) != source({self.arrows[y].name})"
                )
        return (self._src[idxs[0]], tuple(idxs))

    def source(self, m: Mono) -> int:
        return m[0]

    def target(self, m: Mono) -> int:
        return self._tgt[m[1][-1]] if m[1] else m[0]

    def degree(self, m: Mono) -> int:
        return sum(self._deg[i] for i in m[1])

    def compose(self, m1: Mono, m2: Mono):
        """Concatenation m1.m2 or None when not composable."""
        if self.target(m1) != m2[0]:
            return None
        return (m1[0], m1[1] + m2[1])

    def order_key(self, m: Mono):
        return (self.degree(m), len(m[1]), m[1], m[0])

    def mono_str(self, m: Mono) -> str:
        if not m[1]:
            return f"e({self.vertices[m[0]]})"
        return ".".join(self.arrows[i].name for i in m[1])

    def paths_of_degree(self, d: int, source=None):
        """All paths of internal degree d, ordered by the monomial order."""
        by_degree = {0: [self.trivial(v) for v in range(len(self.vertices))]}
        for dd in range(1, d + 1):
            level = []
            for i in range(len(self.arrows)):
                prev = dd - self._deg[i]
                if prev < 0:
                    continue
                for m in by_degree.get(prev, ()):
                    if self.target(m) == self._src[i]:
                        level.append((m[0], m[1] + (i,)))
            by_degree[dd] = level
        out = [m for m in by_degree.get(d, []) if source is None or m[0] == source]
        return sorted(out, key=self.order_key)

    def __repr__(self):
        return f"Quiver({list(self.vertices)}, {len(self.arrows)} arrows)"


def opposite_quiver(q: Quiver) -> Quiver:
    arrows = [Arrow(a.name, a.target, a.source, a.degree) for a in q.arrows]
    return Quiver(q.vertices, arrows)


def reverse_mono(q: Quiver, qop: Quiver, m: Mono) -> Mono:
    """The word reversed, as a path of the opposite quiver."""
    if not m[1]:
        return m
    word = tuple(reversed(m[1]))
    return (qop._src[word[0]], word)


# ---------------------------------------------------------------------------


@dataclass
class Presentation:
    """A quiver, a field, and relations between parallel paths."""

    field: object
    quiver: Quiver
    relations: list  # list of dict[Mono, coeff]
    mode: str = "finite"  # "finite" | "graded"
    cap: int = None

    def __post_init__(self):
        if self.mode not in ("finite", "graded"):
            raise ValidationError(f"unknown mode {self.mode!r}")
        if self.mode == "graded":
            if self.cap is None:
                self.cap = 12
            if self.cap < 1:
                raise ValidationError("graded cap must be positive")
        q = self.quiver
        for rel in self.relations:
            if not rel:
                raise ValidationError("empty relation")
            endpoints = {(q.source(m), q.target(m)) for m in rel}
            if len(endpoints) != 1:
                raise ValidationError(
                    "relation mixes non-parallel paths: "
                    + " , ".join(q.mono_str(m) for m in rel)
                )
            if self.mode == "graded":
                degs = {q.degree(m) for m in rel}
                if len(degs) != 1:
                    raise ValidationError(
                        "non-homogeneous relation in graded mode: "
                        + " + ".join(q.mono_str(m) for m in rel)
                    )

    def relation_strs(self):
        q = self.quiver
        out = []
        for rel in self.relations:
            terms = sorted(rel.items(), key=lambda kv: q.order_key(kv[0]))
            out.append(
                " + ".join(f"{self.field.format(c)}*{q.mono_str(m)}" for m, c in terms)
            )
        return out


def opposite_presentation(p: Presentation) -> Presentation:
    """Reverse all arrows and all relation words; degrees preserved."""
    qop = opposite_quiver(p.quiver)
    rels = []
    for rel in p.relations:
        rels.append({reverse_mono(p.quiver, qop, m): c for m, c in rel.items()})
    return Presentation(p.field, qop, rels, p.mode, p.cap)


# ---------------------------------------------------------------------------
# presentation file format


def _parse_path(q: Quiver, tok: str, lineno: int):
    tok = tok.strip()
    if tok.startswith("e(") and tok.endswith(")"):
        v = tok[2:-1]
        if v not in q.vertex_index:
            raise ParseError(f"unknown vertex {v!r}", lineno)
        return q.trivial(v)
    names = tok.split(".")
    try:
        return q.mono_from_names(names)
    except ValidationError as e:
        raise ParseError(str(e), lineno)


def parse_presentation(text: str) -> Presentation:
    """Parse the presentation file format.

    Lines: `field Q` / `field F <p>`; `vertices v1 v2 ...`;
    `arrow a : u -> v [deg d]`; `mode finite` / `mode graded cap N`;
    `rel c1*path1 + c2*path2 + ...` with paths `a1.a2` or `e(v)`.
    """
    fieldobj = None
    vertices = None
    arrows = []
    mode = None
    cap = None
    rel_lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split(None, 1)
        body = rest[0] if rest else ""
        if head == "field":
            try:
                fieldobj = field_from_spec(body.strip())
            except ValidationError as e:
                raise ParseError(str(e), lineno)
        elif head == "vertices":
            vertices = body.split()
            if not vertices:
                raise ParseError("empty vertex list", lineno)
        elif head == "arrow":
            if ":" not in body:
                raise ParseError("arrow line needs ':'", lineno)
            name, spec = body.split(":", 1)
            name = name.strip()
            if not name or "." in name or "*" in name or "+" in name:
                raise ParseError(f"bad arrow name {name!r}", lineno)
            if "->" not in spec:
                raise ParseError("arrow line needs '->'", lineno)
            src, rest2 = spec.split("->", 1)
            parts = rest2.split()
            if not parts:
                raise ParseError("missing arrow target", lineno)
            tgt = parts[0]
            deg = 1
            if len(parts) == 3 and parts[1] == "deg":
                try:
                    deg = int(parts[2])
                except ValueError:
                    raise ParseError(f"bad degree {parts[2]!r}", lineno)
            elif len(parts) != 1:
                raise ParseError("trailing junk on arrow line", lineno)
            arrows.append((Arrow(name, src.strip(), tgt, deg), lineno))
        elif head == "mode":
            parts = body.split()
            if parts and parts[0] == "finite" and len(parts) == 1:
                mode = "finite"
            elif len(parts) == 3 and parts[0] == "graded" and parts[1] == "cap":
                mode = "graded"
                try:
                    cap = int(parts[2])
                except ValueError:
                    raise ParseError(f"bad cap {parts[2]!r}", lineno)
            else:
                raise ParseError(f"bad mode line {line!r}", lineno)
        elif head == "rel":
            rel_lines.append((body, lineno))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    if fieldobj is None:
        raise ParseError("missing field line")
    if vertices is None:
        raise ParseError("missing vertices line")
    if mode is None:
        raise ParseError("missing mode line")
    try:
        q = Quiver(vertices, [a for a, _ in arrows])
    except ValidationError as e:
        lineno = arrows[0][1] if arrows else 1
        raise ParseError(str(e), lineno)

    relations = []
    for body, lineno in rel_lines:
        rel = {}
        for term in body.split("+"):
            term = term.strip()
            if not term:
                raise ParseError("empty term in relation", lineno)
            if "*" in term:
                coeff_s, path_s = term.split("*", 1)
                try:
                    coeff = fieldobj.of(Fraction(coeff_s.strip()))
                except (ValueError, ZeroDivisionError):
                    raise ParseError(f"bad coefficient {coeff_s!r}", lineno)
            else:
                coeff, path_s = fieldobj.one, term
            m = _parse_path(q, path_s, lineno)
            prev = rel.get(m, fieldobj.zero)
            s = fieldobj.add(prev, coeff)
            if fieldobj.is_zero(s):
                rel.pop(m, None)
            else:
                rel[m] = s
        if not rel:
            continue  # cancelled to zero: ignore
        relations.append(rel)
    try:
        return Presentation(fieldobj, q, relations, mode, cap)
    except ValidationError as e:
        raise ParseError(str(e))


def format_presentation(p: Presentation) -> str:
    """Canonical dump, parseable by parse_presentation."""
    lines = []
    if isinstance(p.field, Rationals):
        lines.append("field Q")
    else:
        lines.append(f"field F {p.field.p}")
    lines.append("vertices " + " ".join(p.quiver.vertices))
    for a in p.quiver.arrows:
        suffix = f" deg {a.degree}" if a.degree != 1 else ""
        lines.append(f"arrow {a.name} : {a.source} -> {a.target}{suffix}")
    if p.mode == "finite":
        lines.append("mode finite")
    else:
        lines.append(f"mode graded cap {p.cap}")
    for rel in p.relation_strs():
        lines.append("rel " + rel)
    return "\n".join(lines) + "\n"

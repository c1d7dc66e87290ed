"""Computable path-algebra quotients.

An AlgebraHandle couples a presentation with its normal-form table and
exposes the basis of normal words, exact multiplication, Hilbert data
and the opposite algebra.  Graded handles certify everything up to the
degree cap; finite handles carry a complete multiplication basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CapError, ValidationError
from .groebner import (
    NormalFormTable,
    Reducer,
    compute_normal_forms,
    elem_add,
    elem_scale,
    normal_words_by_degree,
)
from .quiver import Presentation, opposite_presentation


@dataclass
class HilbertData:
    """Total dimension per internal degree, h_0..h_cap."""

    values: list
    cap: int

    def __iter__(self):
        return iter(self.values)


class AlgebraHandle:
    def __init__(self, presentation: Presentation, table: NormalFormTable = None):
        self.presentation = presentation
        self.quiver = presentation.quiver
        self.field = presentation.field
        self.graded = presentation.mode == "graded"
        if table is None:
            table = compute_normal_forms(presentation)
        self.table = table
        self.cap = table.cap
        self.reducer = Reducer(presentation)
        self.reducer.rebuild(table.elements)
        self._by_degree = normal_words_by_degree(presentation, self.reducer, self.cap)
        self._index = {}
        for d in range(self.cap + 1):
            for i, w in enumerate(self._by_degree[d]):
                self._index[w] = (d, i)
        self._mono_cache = {}
        self._opposite = None

    # -- basis ---------------------------------------------------------------

    def basis(self, degree: int):
        """Normal words of one internal degree, in monomial order."""
        if degree < 0:
            return []
        if degree > self.cap:
            raise CapError(f"degree {degree} beyond cap {self.cap}")
        return self._by_degree[degree]

    def full_basis(self):
        """Every normal word up to the cap (the whole algebra in finite mode)."""
        out = []
        for d in range(self.cap + 1):
            out.extend(self._by_degree[d])
        return out

    @property
    def is_finite_dimensional(self) -> bool:
        return self.table.finite_dimensional == "yes"

    def dim_total(self) -> int:
        if not self.is_finite_dimensional:
            raise ValidationError("total dimension undefined: not finite-dimensional")
        return sum(len(self._by_degree[d]) for d in range(self.cap + 1))

    def vertex_count(self) -> int:
        return len(self.quiver.vertices)

    # -- arithmetic ------------------------------------------------------------

    def reduce(self, elem):
        return self.reducer.reduce(elem)

    def mono_mul(self, m1, m2):
        """Product of two normal words as a normal-form element."""
        key = (m1, m2)
        hit = self._mono_cache.get(key)
        if hit is not None:
            return hit
        q = self.quiver
        comp = q.compose(m1, m2)
        if comp is None:
            out = {}
        else:
            if self.graded and q.degree(comp) > self.cap:
                raise CapError(
                    f"product degree {q.degree(comp)} beyond cap {self.cap}"
                )
            out = self.reducer.reduce({comp: self.field.one})
        self._mono_cache[key] = out
        return out

    def multiply(self, u, v):
        """Bilinear product of normal-form elements."""
        field = self.field
        out = {}
        for m1, c1 in u.items():
            for m2, c2 in v.items():
                prod = self.mono_mul(m1, m2)
                if not prod:
                    continue
                c = field.mul(c1, c2)
                for m, cc in prod.items():
                    s = field.add(out.get(m, field.zero), field.mul(c, cc))
                    if field.is_zero(s):
                        out.pop(m, None)
                    else:
                        out[m] = s
        return out

    def unit(self):
        one = self.field.one
        return {self.quiver.trivial(v): one for v in range(self.vertex_count())}

    # -- structure ---------------------------------------------------------------

    def hilbert(self, upto: int = None) -> HilbertData:
        if upto is None:
            upto = self.cap
        if upto > self.cap:
            raise CapError(f"hilbert degree {upto} beyond cap {self.cap}")
        values = [len(self._by_degree[d]) for d in range(upto + 1)]
        return HilbertData(values, upto)

    def opposite(self) -> "AlgebraHandle":
        if self._opposite is None:
            op = AlgebraHandle(opposite_presentation(self.presentation))
            op._opposite = self
            self._opposite = op
        return self._opposite

    def elem_str(self, elem) -> str:
        q = self.quiver
        if not elem:
            return "0"
        terms = sorted(elem.items(), key=lambda kv: q.order_key(kv[0]))
        return " + ".join(f"{self.field.format(c)}*{q.mono_str(m)}" for m, c in terms)

    def __repr__(self):
        kind = f"graded cap {self.cap}" if self.graded else "finite"
        return f"AlgebraHandle({len(self.quiver.vertices)} vertices, {kind})"


def algebra_basis(a: AlgebraHandle, degree: int):
    return a.basis(degree)


def hilbert_function(a: AlgebraHandle, upto: int) -> HilbertData:
    return a.hilbert(upto)


# ---------------------------------------------------------------------------
# growth classification (heuristic, exact arithmetic)


@dataclass
class GrowthVerdict:
    kind: str  # "polynomial" | "exponential" | "inconclusive"
    degree: int = None  # polynomial degree; None for "eventually zero"
    ratio: Fraction = None  # last observed ratio for exponential growth
    note: str = ""
    heuristic: bool = True

    def __str__(self):
        if self.kind == "polynomial":
            d = "-inf (finite-dimensional)" if self.degree is None else str(self.degree)
            return f"polynomial({d}) [heuristic]"
        if self.kind == "exponential":
            return f"exponential(ratio ~ {self.ratio}) [heuristic]"
        return "inconclusive [heuristic]"


def _differences(vals):
    return [b - a for a, b in zip(vals, vals[1:])]


def classify_growth(h: HilbertData, ratio_floor: Fraction = Fraction(6, 5)) -> GrowthVerdict:
    """Heuristic growth classification of a Hilbert-value window.

    polynomial(d): the (d+1)-st finite differences vanish on the tail;
    eventually-zero data reports polynomial with degree None.
    exponential: no polynomial fit, and consecutive ratios stay above
    ratio_floor on the tail (B_n-type data has slowly decreasing ratios,
    so monotonicity is not required).  Everything else: inconclusive.
    """
    vals = list(h.values)
    if len(vals) < 6:
        raise ValidationError("need at least 6 Hilbert values to classify growth")
    if any(v < 0 for v in vals):
        raise ValidationError("negative Hilbert values")
    tail_len = max(3, len(vals) // 2)
    if all(v == 0 for v in vals[-2:]):
        return GrowthVerdict("polynomial", degree=None, note="eventually zero / finite-dimensional")
    # polynomial fit: successive differences, vanish on the observed tail
    diffs = vals[:]
    for d in range(0, len(vals) - 2):
        diffs = _differences(diffs)
        window = diffs[-min(tail_len, len(diffs)):]
        if window and all(x == 0 for x in window):
            return GrowthVerdict("polynomial", degree=d)
    if any(v == 0 for v in vals[1:]):
        return GrowthVerdict("inconclusive", note="zeros inside the window")
    ratios = [Fraction(b, a) for a, b in zip(vals, vals[1:])]
    tail = ratios[-min(tail_len, len(ratios)):]
    if all(r >= ratio_floor for r in tail):
        return GrowthVerdict("exponential", ratio=tail[-1])
    return GrowthVerdict("inconclusive")

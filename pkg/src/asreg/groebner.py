"""Noncommutative Buchberger with a degree cap, for path algebras.

Elements are dicts mono -> coefficient.  A Groebner element is stored
as a monic rewrite rule lead -> tail (the polynomial lead - tail lies
in the ideal).  All S-polynomial overlaps of degree <= cap are
resolved, after which normal forms are certified for every degree up
to the cap.  Finite-dimensionality is decided at the cap through a
degree gap plus cycle detection in the Ufnarovski graph of normal
words; a cycle yields the verdict "no" as specified, which is a
cap-relative statement for inhomogeneous ideals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapError, ValidationError
from .quiver import Presentation, Quiver


@dataclass
class NormalFormTable:
    elements: list  # list of (lead mono, tail dict), sorted by lead key
    order: str
    cap: int
    complete_below_cap: bool
    finite_dimensional: str  # "yes" | "no" | "unknown_at_cap"


def elem_add(field, a, b):
    out = dict(a)
    for m, c in b.items():
        s = field.add(out.get(m, field.zero), c)
        if field.is_zero(s):
            out.pop(m, None)
        else:
            out[m] = s
    return out


def elem_scale(field, c, a):
    if field.is_zero(c):
        return {}
    return {m: field.mul(c, x) for m, x in a.items()}


def elem_sub(field, a, b):
    return elem_add(field, a, elem_scale(field, field.neg(field.one), b))


def lead_mono(q: Quiver, a):
    return max(a, key=q.order_key)


class Reducer:
    """Rewriting engine bound to a quiver, a field and a rule list."""

    def __init__(self, presentation: Presentation):
        self.pres = presentation
        self.q = presentation.quiver
        self.field = presentation.field
        self.rules = []  # list of (lead, tail)
        self._by_first = {}  # first arrow index -> list of rule ids
        self._trivial_rules = {}  # vertex -> rule id (degenerate leads e_v)

    def add_rule(self, lead, tail):
        rid = len(self.rules)
        self.rules.append((lead, tail))
        if lead[1]:
            self._by_first.setdefault(lead[1][0], []).append(rid)
        else:
            self._trivial_rules[lead[0]] = rid
        return rid

    def rebuild(self, rules):
        self.rules = []
        self._by_first = {}
        self._trivial_rules = {}
        for lead, tail in rules:
            self.add_rule(lead, tail)

    def _find_rewrite(self, mono):
        """Leftmost occurrence of any lead as a subword; returns
        (pos, rule_id) or None."""
        v, word = mono
        if not word:
            rid = self._trivial_rules.get(v)
            return (0, rid) if rid is not None else None
        # trivial-path leads rewrite at the source of each position
        if self._trivial_rules:
            src = v
            for pos in range(len(word) + 1):
                rid = self._trivial_rules.get(src)
                if rid is not None:
                    return (pos, rid)
                if pos < len(word):
                    src = self.q._tgt[word[pos]]
        for pos in range(len(word)):
            for rid in self._by_first.get(word[pos], ()):
                lw = self.rules[rid][0][1]
                if word[pos : pos + len(lw)] == lw:
                    return (pos, rid)
        return None

    def reduce_mono_once(self, mono):
        """One rewrite step; None when mono is already normal."""
        hit = self._find_rewrite(mono)
        if hit is None:
            return None
        pos, rid = hit
        lead, tail = self.rules[rid]
        v, word = mono
        lw = len(lead[1])
        out = {}
        for tmono, c in tail.items():
            merged = (v, word[:pos] + tmono[1] + word[pos + lw :])
            s = self.field.add(out.get(merged, self.field.zero), c)
            if self.field.is_zero(s):
                out.pop(merged, None)
            else:
                out[merged] = s
        return out

    def reduce(self, elem):
        """Full normal form of an element."""
        field = self.field
        out = {}
        work = dict(elem)
        while work:
            mono = max(work, key=self.q.order_key)
            coeff = work.pop(mono)
            if field.is_zero(coeff):
                continue
            step = self.reduce_mono_once(mono)
            if step is None:
                s = field.add(out.get(mono, field.zero), coeff)
                if field.is_zero(s):
                    out.pop(mono, None)
                else:
                    out[mono] = s
            else:
                for m, c in step.items():
                    s = field.add(work.get(m, field.zero), field.mul(coeff, c))
                    if field.is_zero(s):
                        work.pop(m, None)
                    else:
                        work[m] = s
        return out

    def is_normal(self, mono) -> bool:
        return self._find_rewrite(mono) is None


def compute_normal_forms(pres: Presentation, cap: int = None) -> NormalFormTable:
    """Degree-capped Buchberger completion of the relation ideal."""
    q = pres.quiver
    field = pres.field
    if cap is None:
        cap = pres.cap if pres.cap is not None else 12
    max_rel_deg = max((q.degree(lead_mono(q, r)) for r in pres.relations), default=0)
    if pres.mode == "graded" and cap < max_rel_deg:
        raise CapError(f"cap {cap} below maximal relation degree {max_rel_deg}")

    red = Reducer(pres)

    def monic_rule(elem):
        lead = lead_mono(q, elem)
        inv = field.inv(elem[lead])
        tail = {
            m: field.neg(field.mul(inv, c)) for m, c in elem.items() if m != lead
        }
        return lead, tail

    work = [dict(r) for r in pres.relations]
    # process smaller elements first for determinism
    while work:
        work = [w for w in work if w]
        if not work:
            break
        work.sort(key=lambda e: q.order_key(lead_mono(q, e)), reverse=True)
        elem = work.pop()
        elem = red.reduce(elem)
        if not elem:
            continue
        lead, tail = monic_rule(elem)
        if q.degree(lead) > cap:
            # cannot use rules beyond the certified window
            continue
        # interreduce: existing rules whose lead contains the new lead get
        # reprocessed, and all tails are re-normalized at the end
        survivors = []
        requeue = []
        for l2, t2 in red.rules:
            probe = Reducer(pres)
            probe.add_rule(lead, tail)
            if probe.is_normal(l2):
                survivors.append((l2, t2))
            else:
                poly = elem_sub(field, {l2: field.one}, t2)
                requeue.append(poly)
        red.rebuild(survivors)
        red.add_rule(lead, tail)
        work.extend(requeue)

        # overlap S-polynomials with every current rule (including self)
        new_rules = list(red.rules)
        for l2, t2 in new_rules:
            for a, ta, b, tb in ((lead, tail, l2, t2), (l2, t2, lead, tail)):
                wa, wb = a[1], b[1]
                if not wa or not wb:
                    continue
                # suffix of a == prefix of b, proper overlaps only
                top = min(len(wa), len(wb)) + (1 if wa != wb else 0)
                for k in range(1, top):
                    if wa[len(wa) - k :] != wb[:k]:
                        continue
                    # overlap word: wa + wb[k:]
                    over = (a[0], wa + wb[k:])
                    if q.degree(over) > cap:
                        continue
                    # S = ta * wb[k:]  -  wa[:-k] * tb
                    left = {}
                    for m, c in ta.items():
                        mm = (m[0], m[1] + wb[k:])
                        left[mm] = field.add(left.get(mm, field.zero), c)
                    right = {}
                    prefix = wa[: len(wa) - k]
                    for m, c in tb.items():
                        mm = (a[0], prefix + m[1])
                        right[mm] = field.add(right.get(mm, field.zero), c)
                    s = elem_sub(field, left, right)
                    if s:
                        work.append(s)

    # final interreduction of tails
    final = []
    for lead, tail in red.rules:
        final.append((lead, red.reduce(tail)))
    final.sort(key=lambda r: q.order_key(r[0]))
    red.rebuild(final)

    verdict = _finite_verdict(pres, red, cap)
    table = NormalFormTable(
        elements=final,
        order="degree, length, left-lex by arrow order",
        cap=cap,
        complete_below_cap=True,
        finite_dimensional=verdict,
    )
    if pres.mode == "finite" and verdict != "yes":
        raise CapError(
            f"finite mode but normal words still grow at cap {cap} "
            f"(verdict {verdict}); raise the cap or fix the presentation"
        )
    return table


def normal_words_by_degree(pres: Presentation, red: Reducer, cap: int):
    """Lists of normal words per degree 0..cap, in monomial order."""
    q = pres.quiver
    out = {0: [q.trivial(v) for v in range(len(q.vertices))]}
    out[0] = [m for m in out[0] if red.is_normal(m)]
    by_deg = {0: out[0]}
    for d in range(1, cap + 1):
        level = []
        for i in range(len(q.arrows)):
            prev = d - q._deg[i]
            if prev < 0:
                continue
            for m in by_deg.get(prev, ()):
                if q.target(m) != q._src[i]:
                    continue
                cand = (m[0], m[1] + (i,))
                # only suffixes containing the new arrow can create a lead
                if _suffix_normal(q, red, cand):
                    level.append(cand)
        level.sort(key=q.order_key)
        by_deg[d] = level
    return by_deg


def _suffix_normal(q, red, mono) -> bool:
    # only subwords ending at the appended letter need checking; earlier
    # subwords were checked when the prefix was accepted
    word = mono[1]
    for lead, _ in red.rules:
        lw = lead[1]
        if not lw:
            # trivial-path lead: prefix acceptance covered interior vertices
            if lead[0] == q.target(mono):
                return False
            continue
        k = len(lw)
        if k <= len(word) and word[len(word) - k :] == lw:
            return False
    return True


def _finite_verdict(pres: Presentation, red: Reducer, cap: int) -> str:
    """'yes' on a degree-band gap without cycles, 'no' on an Ufnarovski
    cycle, otherwise 'unknown_at_cap'.

    The gap must span a band as wide as the largest arrow degree: every
    long normal word contains a normal subword with degree in any such
    band, so an empty band is sound evidence of finite dimension.
    """
    q = pres.quiver
    by_deg = normal_words_by_degree(pres, red, cap)
    width = max(q._deg) if q.arrows else 1
    gap = False
    for d in range(cap - width + 2):
        if all(not by_deg.get(d + k) for k in range(width)):
            gap = True
            break
    # Ufnarovski graph on normal words of length m-1 (m = longest lead word)
    m = max((len(lead[1]) for lead, _ in red.rules), default=1)
    m = max(m, 1)
    all_words = [w for d in range(cap + 1) for w in by_deg[d]]
    nodes = {w for w in all_words if len(w[1]) == m - 1}
    wordset = set(all_words)
    edges = {}
    for u in nodes:
        for i in range(len(q.arrows)):
            if q.target(u) != q._src[i]:
                continue
            ext = (u[0], u[1] + (i,))
            if q.degree(ext) > cap or ext not in wordset:
                continue
            word = ext[1][1:]
            v = (q._tgt[ext[1][0]], word)
            if v in nodes:
                edges.setdefault(u, []).append(v)
    if _has_cycle(nodes, edges):
        return "no"
    if gap:
        return "yes"
    return "unknown_at_cap"


def _has_cycle(nodes, edges) -> bool:
    color = {n: 0 for n in nodes}
    for start in nodes:
        if color[start]:
            continue
        stack = [(start, iter(edges.get(start, ())))]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == 1:
                    return True
                if color[nxt] == 0:
                    color[nxt] = 1
                    stack.append((nxt, iter(edges.get(nxt, ()))))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                stack.pop()
    return False


def dump_table(pres: Presentation, table: NormalFormTable) -> str:
    """Deterministic canonical dump, sorted by leading path."""
    q = pres.quiver
    lines = [
        f"order: {table.order}",
        f"cap: {table.cap}",
        f"complete_below_cap: {str(table.complete_below_cap).lower()}",
        f"finite_dimensional: {table.finite_dimensional}",
    ]
    for lead, tail in table.elements:
        terms = sorted(tail.items(), key=lambda kv: q.order_key(kv[0]))
        rhs = " + ".join(f"{pres.field.format(c)}*{q.mono_str(m)}" for m, c in terms)
        lines.append(f"{q.mono_str(lead)} -> {rhs if rhs else '0'}")
    return "\n".join(lines) + "\n"

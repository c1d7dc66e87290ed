"""Minimal projective resolutions, Ext, Tor, and the transpose functor.

Differentials are matrices of algebra elements: a map between free
modules P = (+) e_{v_j}A<g_j> and Q = (+) e_{w_k}A<h_k> is the matrix
(lambda_{kj}) with lambda_{kj} in e_{w_k} A e_{v_j}, acting by left
multiplication on column elements.  Dualizing with Hom(-, A) transposes
the matrix and reverses every word.

Finite mode computes densely through the representation machinery.
Graded mode scans internal degrees up to the window: kernels are taken
blockwise per (vertex, degree); a block certifies "no new syzygy
generators" by comparing the kernel dimension against the rank of the
part already covered, both exact, so the expensive nullspace only runs
where generators actually appear.  A modular rank is used only in the
sound direction (homology vanishing mod p forces vanishing over Q);
every reported nonzero dimension is recomputed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import linalg
from .algebra import AlgebraHandle
from .errors import InconclusiveError, ValidationError
from .modules import (
    ModuleMap,
    Representation,
    kernel,
    projective_module,
    quotient,
    simple_module,
    submodule,
    top,
)

_SPARSE_LIMIT = 420  # nullspace blocks larger than this escalate carefully


@dataclass(frozen=True)
class FreeModule:
    gens: tuple  # of (vertex index, generator internal degree)

    def __len__(self):
        return len(self.gens)


@dataclass
class AlgMatrix:
    """Map between free modules: entries[k][j] in e_{v_k} A e_{v_j}."""

    rows: FreeModule
    cols: FreeModule
    entries: list  # entries[k][j]: algebra element dict

    def column(self, j):
        return [self.entries[k][j] for k in range(len(self.rows))]


def reverse_elem(a: AlgebraHandle, elem):
    """Word reversal into the opposite algebra's monomials."""
    qop = a.opposite().quiver
    out = {}
    for (v, word), c in elem.items():
        if word:
            rev = tuple(reversed(word))
            m = (qop._src[rev[0]], rev)
        else:
            m = (v, ())
        out[m] = c
    return out


def compose_alg_matrices(a: AlgebraHandle, f: AlgMatrix, g: AlgMatrix) -> AlgMatrix:
    """Matrix product f.g (entries multiplied in the algebra)."""
    if f.cols.gens != g.rows.gens:
        raise ValidationError("algebra matrix shapes do not compose")
    field = a.field
    entries = []
    for k in range(len(f.rows)):
        row = []
        for j in range(len(g.cols)):
            acc = {}
            for t in range(len(f.cols)):
                lam, mu = f.entries[k][t], g.entries[t][j]
                if not lam or not mu:
                    continue
                prod = a.multiply(lam, mu)
                for m, c in prod.items():
                    s = field.add(acc.get(m, field.zero), c)
                    if field.is_zero(s):
                        acc.pop(m, None)
                    else:
                        acc[m] = s
            row.append(acc)
        entries.append(row)
    return AlgMatrix(rows=f.rows, cols=g.cols, entries=entries)


class RealizedFree:
    """A free module realized as a Representation with coordinates
    (slot, normal word); only used where the algebra data is small."""

    def __init__(self, a: AlgebraHandle, free: FreeModule):
        self.algebra = a
        self.free = free
        q = a.quiver
        self.coords = {}
        self.basis_by_block = {}
        for slot, (v, g) in enumerate(free.gens):
            for wd in range(a.cap + 1):
                for m in a.basis(wd):
                    if m[0] != v:
                        continue
                    d = g + wd if a.graded else 0
                    b = (q.target(m), d)
                    lst = self.basis_by_block.setdefault(b, [])
                    self.coords[(slot, m)] = (b, len(lst))
                    lst.append((slot, m))
        blocks = {b: len(lst) for b, lst in self.basis_by_block.items()}
        action = {}
        field = a.field
        for b, lst in self.basis_by_block.items():
            v, d = b
            for i in range(len(q.arrows)):
                if q._src[i] != v:
                    continue
                shift = q._deg[i] if a.graded else 0
                tb = (q._tgt[i], d + shift)
                tgt_lst = self.basis_by_block.get(tb)
                if not tgt_lst:
                    continue
                cols = []
                for (slot, m) in lst:
                    col = [field.zero] * len(tgt_lst)
                    if a.graded and q.degree(m) + q._deg[i] > a.cap:
                        cols.append(col)  # truncated away
                        continue
                    prod = a.mono_mul(m, (q.target(m), (i,)))
                    for mm, c in prod.items():
                        key = (slot, mm)
                        if key in self.coords:
                            bb, pos = self.coords[key]
                            if bb == tb:
                                col[pos] = c
                    cols.append(col)
                action[(i, d)] = linalg.transpose(cols)
        truncated = None
        if a.graded and not a.is_finite_dimensional:
            truncated = max((g for (_, g) in free.gens), default=0) + a.cap
        self.rep = Representation(
            a, blocks, action, truncated_above=truncated, check=False
        )

    def gen_coordinate(self, slot):
        v, g = self.free.gens[slot]
        return self.coords[(slot, (v, ()))]

    def vector_to_elements(self, block_vec):
        field = self.algebra.field
        out = [dict() for _ in range(len(self.free))]
        for b, vec in block_vec.items():
            for pos, c in enumerate(vec):
                if field.is_zero(c):
                    continue
                slot, m = self.basis_by_block[b][pos]
                out[slot][m] = field.add(out[slot].get(m, field.zero), c)
        return out

    def realize_map(self, am: AlgMatrix, target: "RealizedFree") -> ModuleMap:
        """Dense ModuleMap P_cols -> P_rows for a differential."""
        field = self.algebra.field
        a = self.algebra
        blocks = {}
        for b, lst in self.basis_by_block.items():
            tgt_dim = target.rep.dim(b)
            if tgt_dim == 0:
                continue
            mat = linalg.zeros(field, tgt_dim, len(lst))
            for cpos, (slot, m) in enumerate(lst):
                for k in range(len(am.rows)):
                    lam = am.entries[k][slot]
                    if not lam:
                        continue
                    prod = a.multiply(lam, {m: field.one})
                    for mm, c in prod.items():
                        key = (k, mm)
                        if key in target.coords:
                            bb, pos = target.coords[key]
                            if bb == b:
                                mat[pos][cpos] = field.add(mat[pos][cpos], c)
            blocks[b] = mat
        return ModuleMap(self.rep, target.rep, blocks)


@dataclass
class Resolution:
    algebra: AlgebraHandle
    module: Representation
    stages: list  # [FreeModule]
    diffs: list  # [None, AlgMatrix P1->P0, AlgMatrix P2->P1, ...]
    aug_gens: list = None  # per P0 generator: block-vector dict into module
    aug: ModuleMap = None  # realized augmentation (finite mode)
    realized: list = None  # RealizedFree per stage (finite mode)
    complete: str = "truncated"  # "exact" | "truncated"
    length_found: int = None
    homcap: int = None
    window: int = None  # graded internal-degree scan bound
    periodic: tuple = None  # syzygy periodicity witness (i, j)

    def betti(self):
        out = []
        for st in self.stages:
            d = {}
            for g in st.gens:
                d[g] = d.get(g, 0) + 1
            out.append(dict(sorted(d.items())))
        return out

    def max_gen_degree(self, i):
        return max((g for (_, g) in self.stages[i].gens), default=0)

    def stage_available(self, i) -> bool:
        """Stage i data is known: either computed or provably zero."""
        if i < len(self.stages):
            return True
        return self.complete == "exact" or self.length_found is not None

    def diff_or_zero(self, i):
        """AlgMatrix d_i: P_i -> P_{i-1}, or None when P_i = 0."""
        if i < len(self.diffs):
            return self.diffs[i]
        if not self.stage_available(i):
            raise InconclusiveError(f"resolution not computed to stage {i}")
        return None

    def check_minimality(self) -> bool:
        for am in self.diffs[1:]:
            if am is None:
                continue
            for row in am.entries:
                for elem in row:
                    for (_, word) in elem:
                        if not word:
                            return False
        return True

    def check_d_squared(self) -> bool:
        a = self.algebra
        for i in range(2, len(self.diffs)):
            comp = compose_alg_matrices(a, self.diffs[i - 1], self.diffs[i])
            for row in comp.entries:
                for elem in row:
                    if elem:
                        return False
        return True


# ---------------------------------------------------------------------------
# projective covers


def cover_data(m: Representation):
    """Generators of the projective cover: (FreeModule, lift vectors)."""
    a = m.algebra
    field = a.field
    t, proj = top(m)
    gens, gen_vectors = [], []
    for b in t.block_list():
        for j in range(t.dim(b)):
            e = [field.zero] * t.dim(b)
            e[j] = field.one
            sol = linalg.solve(field, proj.block(b), e)
            if sol is None:
                raise ValidationError("projective cover: lift failed")
            gens.append((b[0], b[1] if a.graded else 0))
            gen_vectors.append({b: sol})
    return FreeModule(tuple(gens)), gen_vectors


def realize_cover(m: Representation, free: FreeModule, gen_vectors):
    """Dense cover map from the realized free module onto m."""
    a = m.algebra
    field = a.field
    realized = RealizedFree(a, free)
    blocks = {}
    for b, lst in realized.basis_by_block.items():
        tgt_dim = m.dim(b)
        mat = linalg.zeros(field, tgt_dim, len(lst))
        for cpos, (slot, mono) in enumerate(lst):
            ((sb, vec),) = gen_vectors[slot].items()
            tb, wmat = m.word_matrix(mono, sb[1])
            img = linalg.mat_vec(field, wmat, vec)
            if tb != b:
                if m.dim(tb) and any(not field.is_zero(x) for x in img):
                    raise ValidationError("cover image landed in a wrong block")
                continue
            for r, c in enumerate(img):
                mat[r][cpos] = c
        if tgt_dim:
            blocks[b] = mat
    cover = ModuleMap(realized.rep, m, blocks)
    return realized, cover


def projective_cover(m: Representation):
    """Projective cover (P, map P -> m); P carries its free-module data."""
    free, gen_vectors = cover_data(m)
    realized, cover = realize_cover(m, free, gen_vectors)
    realized.rep.free_data = free
    return realized.rep, cover


# ---------------------------------------------------------------------------
# minimal resolutions


def minimal_resolution(m: Representation, homcap: int = 8, degcap: int = None) -> Resolution:
    a = m.algebra
    if a.graded:
        return _minimal_resolution_graded(m, homcap, degcap)
    return _minimal_resolution_finite(m, homcap)


def _unit(field, n, pos):
    v = [field.zero] * n
    v[pos] = field.one
    return v


def _minimal_resolution_finite(m: Representation, homcap: int) -> Resolution:
    a = m.algebra
    field = a.field
    if m.is_zero():
        return Resolution(a, m, [FreeModule(())], [None], aug_gens=[],
                          complete="exact", length_found=-1, homcap=homcap)
    free0, gen_vectors = cover_data(m)
    real0, cover = realize_cover(m, free0, gen_vectors)
    res = Resolution(a, m, [free0], [None], aug_gens=gen_vectors, aug=cover,
                     realized=[real0], homcap=homcap)
    syzygies = []
    prev_map = cover
    for i in range(1, homcap + 1):
        ker_rep, ker_incl = kernel(prev_map)
        if ker_rep.is_zero():
            res.complete = "exact"
            res.length_found = i - 1
            return res
        syzygies.append(ker_rep)
        free_i, ker_gens = cover_data(ker_rep)
        real_i, cover_i = realize_cover(ker_rep, free_i, ker_gens)
        cols = []
        for slot in range(len(free_i)):
            b, pos = real_i.gen_coordinate(slot)
            vec = {b: _unit(field, real_i.rep.dim(b), pos)}
            in_prev = ker_incl.apply(cover_i.apply(vec))
            cols.append(in_prev)
        prev_real = res.realized[i - 1]
        entries = [[None] * len(free_i) for _ in range(len(res.stages[i - 1]))]
        for j, col in enumerate(cols):
            elems = prev_real.vector_to_elements(col)
            for k, elem in enumerate(elems):
                entries[k][j] = elem
        res.stages.append(free_i)
        res.diffs.append(AlgMatrix(rows=res.stages[i - 1], cols=free_i, entries=entries))
        res.realized.append(real_i)
        prev_map = ker_incl.compose(cover_i)
    res.complete = "truncated"
    from .modules import is_isomorphic

    for i in range(len(syzygies)):
        for j in range(i + 1, len(syzygies)):
            si, sj = syzygies[i], syzygies[j]
            if si.dim_vector() == sj.dim_vector() and si.total_dim() <= 64:
                iso, _ = is_isomorphic(si, sj)
                if iso:
                    res.periodic = (i + 1, j + 1)
                    return res
    return res


def _minimal_resolution_graded(m: Representation, homcap: int, degcap: int) -> Resolution:
    a = m.algebra
    window = a.cap if degcap is None else min(degcap, a.cap)
    if m.truncated_above is not None:
        window = min(window, m.truncated_above)
    if m.is_zero():
        return Resolution(a, m, [FreeModule(())], [None], aug_gens=[],
                          complete="exact", length_found=-1, homcap=homcap,
                          window=window)
    free0, gen_vectors = cover_data(m)
    res = Resolution(a, m, [free0], [None], aug_gens=gen_vectors,
                     homcap=homcap, window=window)
    for i in range(1, homcap + 1):
        gens, cols = _graded_syzygy(res, i)
        if not gens:
            res.length_found = i - 1
            res.complete = "exact" if a.is_finite_dimensional else "truncated"
            return res
        free_i = FreeModule(tuple(gens))
        prev_free = res.stages[i - 1]
        entries = [[cols[j][k] for j in range(len(gens))] for k in range(len(prev_free))]
        res.stages.append(free_i)
        res.diffs.append(AlgMatrix(rows=prev_free, cols=free_i, entries=entries))
    res.complete = "truncated"
    return res


def _stage_basis(a: AlgebraHandle, free: FreeModule, d: int, vertex=None):
    """Basis (slot, word) of a free module in internal degree d; in finite
    mode the degree collapses and all word lengths contribute."""
    out = []
    for slot, (v, g) in enumerate(free.gens):
        if a.graded:
            wd = d - g
            if wd < 0 or wd > a.cap:
                continue
            degrees = [wd]
        else:
            degrees = range(a.cap + 1)
        for wd in degrees:
            for mono in a.basis(wd):
                if mono[0] != v:
                    continue
                if vertex is not None and a.quiver.target(mono) != vertex:
                    continue
                out.append((slot, mono))
    return out


def _realize_diff_block(a, am: AlgMatrix, d: int, vertex):
    """Sparse columns of a differential on one (vertex, degree) block."""
    field = a.field
    src = _stage_basis(a, am.cols, d, vertex)
    tgt = _stage_basis(a, am.rows, d, vertex)
    tgt_index = {key: i for i, key in enumerate(tgt)}
    cols = []
    for (slot, mono) in src:
        col = {}
        for k in range(len(am.rows)):
            lam = am.entries[k][slot]
            if not lam:
                continue
            prod = a.multiply(lam, {mono: field.one})
            for mm, c in prod.items():
                idx = tgt_index.get((k, mm))
                if idx is not None:
                    s = field.add(col.get(idx, field.zero), c)
                    if field.is_zero(s):
                        col.pop(idx, None)
                    else:
                        col[idx] = s
        cols.append(col)
    return src, tgt, cols


def _aug_block(res: Resolution, d: int, vertex):
    """Dense augmentation matrix on one (vertex, degree) block."""
    a = res.algebra
    field = a.field
    m = res.module
    src = _stage_basis(a, res.stages[0], d, vertex)
    b = (vertex, d)
    tgt_dim = m.dim(b)
    mat = linalg.zeros(field, tgt_dim, len(src))
    for cpos, (slot, mono) in enumerate(src):
        ((sb, vec),) = res.aug_gens[slot].items()
        tb, wmat = m.word_matrix(mono, sb[1])
        if tb != b or tgt_dim == 0:
            continue
        img = linalg.mat_vec(field, wmat, vec)
        for r, c in enumerate(img):
            mat[r][cpos] = c
    return src, mat


def _sparse_cols_rank(field, cols) -> int:
    return linalg.sparse_rank(field, [c for c in cols if c])


def _dense_rows_rank(field, rows) -> int:
    sparse = [
        {j: x for j, x in enumerate(r) if not field.is_zero(x)} for r in rows
    ]
    return linalg.sparse_rank(field, [r for r in sparse if r])


def _graded_syzygy(res: Resolution, i: int):
    """Stage-i generators: per (degree, vertex) block, the kernel of
    d_{i-1} modulo the span already covered by chosen generators."""
    a = res.algebra
    field = a.field
    q = a.quiver
    gens, gen_elem_cols = [], []
    for d in range(0, res.window + 1):
        for v in range(len(q.vertices)):
            if i == 1:
                src, mat = _aug_block(res, d, v)
                if not src:
                    continue
                krank = len(src) - _dense_rows_rank(field, mat)
            else:
                am = res.diffs[i - 1]
                src, tgt, cols = _realize_diff_block(a, am, d, v)
                if not src:
                    continue
                krank = len(src) - _sparse_cols_rank(field, cols)
            if krank == 0:
                continue
            covered = _covered_vectors(res, gens, gen_elem_cols, d, v, src)
            crank = _dense_rows_rank(field, covered)
            if crank == krank:
                continue  # block fully covered; certified without a nullspace
            # explicit kernel needed: realize densely (small in practice)
            if i == 1:
                ker_vecs = linalg.nullspace(field, mat, cols=len(src))
            else:
                rows = [[field.zero] * len(src) for _ in range(len(tgt))]
                for j, col in enumerate(cols):
                    for r, c in col.items():
                        rows[r][j] = c
                ker_vecs = linalg.nullspace(field, rows, cols=len(src))
            new = linalg.complement_in(field, covered, ker_vecs)
            for vec in new:
                elems = [dict() for _ in range(len(res.stages[i - 1]))]
                for pos, c in enumerate(vec):
                    if field.is_zero(c):
                        continue
                    slot, mono = src[pos]
                    elems[slot][mono] = c
                for slot, elem in enumerate(elems):
                    for (_, word) in elem:
                        if not word and res.stages[i - 1].gens[slot][1] == d:
                            raise ValidationError("non-minimal syzygy generator")
                gens.append((v, d))
                gen_elem_cols.append(elems)
    return gens, gen_elem_cols


def _covered_vectors(res, gens, gen_elem_cols, d, v, src_basis):
    """Right multiples of already-chosen generators inside one block."""
    a = res.algebra
    field = a.field
    q = a.quiver
    index = {key: i for i, key in enumerate(src_basis)}
    out = []
    for (gv, gd), elems in zip(gens, gen_elem_cols):
        wd = d - gd
        if wd < 0 or wd > a.cap:
            continue
        for mono in a.basis(wd):
            if mono[0] != gv or q.target(mono) != v:
                continue
            vec = [field.zero] * len(src_basis)
            hit = False
            for slot, elem in enumerate(elems):
                if not elem:
                    continue
                prod = a.multiply(elem, {mono: field.one})
                for mm, c in prod.items():
                    idx = index.get((slot, mm))
                    if idx is None:
                        raise ValidationError("covered vector escaped the window")
                    vec[idx] = field.add(vec[idx], c)
                    hit = True
            if hit:
                out.append(vec)
    return out


# ---------------------------------------------------------------------------
# projective and global dimension


@dataclass
class PdResult:
    value: int = None
    lower_bound: int = None
    status: str = "exact"  # "exact" | "within_cap" | "inconclusive"
    periodic: tuple = None

    def __str__(self):
        if self.status == "exact":
            return str(self.value)
        if self.status == "within_cap":
            return f"{self.value} (within cap)"
        extra = f", periodic syzygies {self.periodic}" if self.periodic else ""
        return f">= {self.lower_bound} (inconclusive at cap{extra})"


def projective_dimension(m_or_res, homcap: int = 8, degcap: int = None) -> PdResult:
    res = m_or_res
    if isinstance(m_or_res, Representation):
        res = minimal_resolution(m_or_res, homcap, degcap)
    if res.complete == "exact":
        return PdResult(value=res.length_found, status="exact")
    if res.length_found is not None:
        return PdResult(value=res.length_found, status="within_cap")
    return PdResult(lower_bound=len(res.stages) - 1, status="inconclusive",
                    periodic=res.periodic)


def global_dimension(a: AlgebraHandle, homcap: int = 8, degcap: int = None):
    """Max of pd over vertex simples; returns (PdResult, per-vertex dict)."""
    per = {}
    values = []
    statuses = []
    for v in range(a.vertex_count()):
        res = minimal_resolution(simple_module(a, v), homcap, degcap)
        pd = projective_dimension(res, homcap, degcap)
        per[a.quiver.vertices[v]] = pd
        statuses.append(pd.status)
        values.append(pd.value if pd.value is not None else pd.lower_bound)
    if "inconclusive" in statuses:
        return PdResult(lower_bound=max(values), status="inconclusive"), per
    status = "within_cap" if "within_cap" in statuses else "exact"
    return PdResult(value=max(values), status=status), per


# ---------------------------------------------------------------------------
# cached resolutions


def resolve(m: Representation, homcap: int = 8, degcap: int = None) -> Resolution:
    """Minimal resolution, memoized on the module object."""
    cache = getattr(m, "_resolutions", None)
    if cache is None:
        cache = {}
        m._resolutions = cache
    for (hc, dc), res in cache.items():
        if dc == degcap and (hc >= homcap or res.complete == "exact"
                             or res.length_found is not None):
            return res
    res = minimal_resolution(m, homcap, degcap)
    cache[(homcap, degcap)] = res
    return res


# ---------------------------------------------------------------------------
# Ext into a finitely supported module


@dataclass
class ExtClass:
    res: Resolution  # resolution of the source module
    target: Representation
    i: int
    delta: int  # internal degree (0 in finite mode)
    gen_images: list  # per stage-i generator: vector in target block (v_k, g_k - delta)

    def as_module_map(self) -> ModuleMap:
        """Dense cocycle P_i -> target (finite mode or small realization)."""
        res = self.res
        a = res.algebra
        field = a.field
        if res.realized is not None and self.i < len(res.realized):
            real = res.realized[self.i]
        else:
            real = RealizedFree(a, res.stages[self.i])
        n = self.target
        blocks = {}
        for b, lst in real.basis_by_block.items():
            tb = (b[0], b[1] - self.delta)
            td = n.dim(tb)
            if td == 0:
                continue
            mat = linalg.zeros(field, td, len(lst))
            for cpos, (slot, mono) in enumerate(lst):
                img = self.gen_images[slot]
                if img is None:
                    continue
                gv, gd = res.stages[self.i].gens[slot]
                src_b = (gv, gd - self.delta)
                tgt_b, wmat = n.word_matrix(mono, src_b[1])
                if tgt_b != tb or n.dim(src_b) == 0:
                    continue
                vec = linalg.mat_vec(field, wmat, img)
                for r, c in enumerate(vec):
                    mat[r][cpos] = c
            blocks[b] = mat
        return ModuleMap(real.rep, n, blocks, internal_degree=self.delta)


@dataclass
class ExtGroup:
    res: Resolution
    target: Representation
    i: int
    delta: int
    layout: list  # [(slot, target block, dim)]
    cocycles: list  # kernel vectors of the cochain differential
    coboundaries: list
    classes: list  # ExtClass representatives, complement of coboundaries

    @property
    def dim(self) -> int:
        return len(self.classes)

    def _vector_of(self, gen_images):
        field = self.res.algebra.field
        total = sum(d for (_, _, d) in self.layout)
        vec = [field.zero] * total
        pos = 0
        for (slot, block, d) in self.layout:
            img = gen_images[slot]
            if img is not None:
                for t in range(d):
                    vec[pos + t] = img[t]
            pos += d
        return vec

    def coordinates(self, gen_images):
        """Coefficients of a cocycle in the chosen class basis, mod
        coboundaries."""
        field = self.res.algebra.field
        vec = self._vector_of(gen_images)
        basis = [self._vector_of(c.gen_images) for c in self.classes]
        cols = basis + self.coboundaries
        mat = linalg.transpose(cols)
        sol = linalg.solve(field, mat, vec) if cols else ([] if all(field.is_zero(x) for x in vec) else None)
        if sol is None:
            raise ValidationError("vector is not a cocycle of this group")
        return sol[: len(self.classes)]


def _cochain_layout(res: Resolution, n: Representation, j: int, delta: int):
    """Coordinate layout of Hom(P_j, n) in internal degree delta."""
    if j >= len(res.stages):
        return []
    out = []
    for slot, (v, g) in enumerate(res.stages[j].gens):
        b = (v, g - delta)
        out.append((slot, b, n.dim(b)))
    return out


def _cochain_total(layout):
    return sum(d for (_, _, d) in layout)


def _cochain_diff(res: Resolution, n: Representation, j: int, delta: int):
    """Matrix of Hom(P_j, n) -> Hom(P_{j+1}, n) in internal degree delta."""
    a = res.algebra
    field = a.field
    src = _cochain_layout(res, n, j, delta)
    tgt = _cochain_layout(res, n, j + 1, delta)
    am = res.diff_or_zero(j + 1)
    rows_total = _cochain_total(tgt)
    cols_total = _cochain_total(src)
    mat = linalg.zeros(field, rows_total, cols_total)
    if am is None or rows_total == 0 or cols_total == 0:
        return src, tgt, mat
    col_off = {}
    pos = 0
    for (slot, b, d) in src:
        col_off[slot] = pos
        pos += d
    row_pos = 0
    for (h, bh, dh) in tgt:
        if dh:
            for (k, bk, dk) in src:
                if dk == 0:
                    continue
                lam = am.entries[k][h]
                if not lam:
                    continue
                acts = n.element_matrix(lam, bk)
                block = acts.get(bh)
                if block is None:
                    continue
                for r in range(dh):
                    for c in range(dk):
                        val = block[r][c]
                        if not field.is_zero(val):
                            mat[row_pos + r][col_off[k] + c] = field.add(
                                mat[row_pos + r][col_off[k] + c], val
                            )
        row_pos += dh
    return src, tgt, mat


def ext_group(m_or_res, n: Representation, i: int, delta: int = 0,
              homcap: int = None) -> ExtGroup:
    """Explicit Ext^i(m, n) in one internal degree: basis mod coboundaries."""
    res = m_or_res
    if isinstance(m_or_res, Representation):
        res = resolve(m_or_res, homcap or max(8, i + 1))
    a = res.algebra
    field = a.field
    if not res.stage_available(i + 1):
        raise InconclusiveError(
            f"Ext^{i} needs resolution stage {i + 1}; raise the homological cap"
        )
    src, _, d_i = _cochain_diff(res, n, i, delta)
    cocycles = linalg.nullspace(field, d_i, cols=_cochain_total(src))
    if i == 0:
        cobound = []
    else:
        below, _, d_below = _cochain_diff(res, n, i - 1, delta)
        cobound = []
        for col in linalg.transpose(d_below):
            cobound.append(list(col))
        cobound = linalg.row_space_basis(field, cobound) if cobound else []
    reps = linalg.complement_in(field, cobound, cocycles)
    classes = []
    for vec in reps:
        gen_images = []
        pos = 0
        for (slot, b, d) in src:
            img = vec[pos : pos + d] if d else None
            gen_images.append(img if d else None)
            pos += d
        classes.append(ExtClass(res, n, i, delta, gen_images))
    return ExtGroup(res, n, i, delta, src, cocycles, cobound, classes)


@dataclass
class ExtResult:
    dims: dict  # internal degree -> dimension
    exact: bool  # True when fully proven (finite mode / complete resolution)
    window: tuple = None  # certified (lo, hi) internal-degree range, graded

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def dim_at(self, delta: int) -> int:
        return self.dims.get(delta, 0)


def _graded_ext_window(res: Resolution, n: Representation, i: int):
    """Internal-degree range where Ext^i(m, n) is certified: above hi,
    unseen generators beyond the scan window could contribute; below lo,
    every cochain space is zero."""
    maxdeg_n = max((d for (_, d) in n.blocks), default=0)
    stages = [j for j in (i - 1, i, i + 1) if 0 <= j < len(res.stages)]
    hi = res.window - maxdeg_n
    lo = min(
        (g for j in stages for (_, g) in res.stages[j].gens), default=0
    ) - maxdeg_n
    return lo, hi


def ext_dim(m_or_res, n: Representation, i: int, homcap: int = None,
            degcap: int = None) -> ExtResult:
    """Dimension of Ext^i(m, n) (per internal degree in graded mode)."""
    res = m_or_res
    if isinstance(m_or_res, Representation):
        res = resolve(m_or_res, homcap or max(8, i + 1), degcap)
    a = res.algebra
    if not res.stage_available(i + 1):
        raise InconclusiveError(
            f"Ext^{i} needs resolution stage {i + 1}; raise the homological cap"
        )
    if not a.graded:
        g = ext_group(res, n, i, 0)
        return ExtResult({0: g.dim} if g.dim else {}, exact=True)
    lo, hi = _graded_ext_window(res, n, i)
    if hi < lo:
        raise InconclusiveError(
            f"no certified window for Ext^{i}: target supported too high"
        )
    # candidate deltas where the cochain spaces are nonzero
    deltas = set()
    for j in (i - 1, i, i + 1):
        if 0 <= j < len(res.stages):
            for (_, g) in res.stages[j].gens:
                for (_, d) in n.blocks:
                    deltas.add(g - d)
    dims = {}
    for delta in sorted(deltas):
        if delta < lo or delta > hi:
            continue
        gdim = ext_group(res, n, i, delta).dim
        if gdim:
            dims[delta] = gdim
    return ExtResult(dims, exact=res.complete == "exact", window=(lo, hi))


def ext_cocycle_basis(m_or_res, n: Representation, i: int, delta: int = 0,
                      homcap: int = None):
    """Explicit cocycles spanning Ext^i in one internal degree."""
    return ext_group(m_or_res, n, i, delta, homcap).classes


# ---------------------------------------------------------------------------
# the dualized complex Hom(P_., A) and Ext against the regular module


def _dual_stage_basis(a: AlgebraHandle, free: FreeModule, delta: int, vertex=None):
    """Basis of Hom(P, A) in internal degree delta: pairs (slot k, word u)
    with u a normal word ending at the slot vertex, deg u = delta + g_k."""
    out = []
    for slot, (v, g) in enumerate(free.gens):
        if a.graded:
            wd = delta + g
            if wd < 0 or wd > a.cap:
                continue
            rng = [wd]
        else:
            rng = range(a.cap + 1)
        for d in rng:
            for mono in a.basis(d):
                if a.quiver.target(mono) != v:
                    continue
                if vertex is not None and mono[0] != vertex:
                    continue
                out.append((slot, mono))
    return out


def _dual_diff_columns(a: AlgebraHandle, am: AlgMatrix, delta: int):
    """Sparse columns of Hom(P_{j}, A) -> Hom(P_{j+1}, A) at one degree.

    am is d_{j+1}: rows = stage j (index k), cols = stage j+1 (index h);
    the dual map sends (a_k) to (sum_k a_k . lambda_{kh})."""
    field = a.field
    src = _dual_stage_basis(a, am.rows, delta)
    tgt = _dual_stage_basis(a, am.cols, delta)
    tgt_index = {key: i for i, key in enumerate(tgt)}
    cols = []
    for (k, u) in src:
        col = {}
        for h in range(len(am.cols)):
            lam = am.entries[k][h]
            if not lam:
                continue
            prod = a.multiply({u: field.one}, lam)
            for mm, c in prod.items():
                idx = tgt_index.get((h, mm))
                if idx is not None:
                    s = field.add(col.get(idx, field.zero), c)
                    if field.is_zero(s):
                        col.pop(idx, None)
                    else:
                        col[idx] = s
        cols.append(col)
    return src, tgt, cols


def regular_ext_dims(res: Resolution, i: int):
    """Ext^i(m, A) against the regular module, graded mode: homology of the
    dualized free complex, per internal degree within the certified window.

    Returns (dims dict, (lo, hi) window).  Large blocks run a modular
    prescreen first: homology mod p bounds homology over Q from above, so
    a vanishing prescreen certifies 0; anything else is recomputed exactly.
    """
    a = res.algebra
    field = a.field
    if not a.graded:
        raise ValidationError("regular_ext_dims is the graded-mode path")
    if not res.stage_available(i + 1):
        raise InconclusiveError(f"Ext^{i}(-, A) needs stage {i + 1}")
    stages = [j for j in (i - 1, i, i + 1) if 0 <= j < len(res.stages)]
    maxg = max((res.max_gen_degree(j) for j in stages), default=0)
    hi = res.window - maxg
    lo = -maxg
    am_up = res.diff_or_zero(i + 1)  # dualizes to C_i -> C_{i+1}
    am_down = res.diffs[i] if 1 <= i < len(res.diffs) else None
    dims = {}
    for delta in range(lo, hi + 1):
        if i >= len(res.stages):
            continue
        dim_mid = len(_dual_stage_basis(a, res.stages[i], delta))
        if dim_mid == 0:
            continue
        cols_up = []
        if am_up is not None:
            _, _, cols_up = _dual_diff_columns(a, am_up, delta)
        cols_down = []
        if am_down is not None:
            _, _, cols_down = _dual_diff_columns(a, am_down, delta)
        cols_up = [c for c in cols_up if c]
        cols_down = [c for c in cols_down if c]
        if dim_mid > _SPARSE_LIMIT and field.char == 0:
            try:
                h_mod = dim_mid - linalg.sparse_rank_mod(cols_up) - linalg.sparse_rank_mod(cols_down)
            except ZeroDivisionError:
                h_mod = None
            if h_mod == 0:
                continue  # vanishing certified: h over Q <= h mod p = 0
        h = dim_mid - linalg.sparse_rank(field, cols_up) - linalg.sparse_rank(field, cols_down)
        if h < 0:
            raise ValidationError("negative homology dimension: rank bug")
        if h:
            # report in the Hom convention: a class "of internal degree d"
            # lowers internal degree by d, the negative of the dual grading
            dims[-delta] = h
    return dims, (-hi, -lo)


def _regular_rep(a: AlgebraHandle):
    rep = getattr(a, "_regular_rep", None)
    if rep is None:
        from .modules import regular_representation

        rep, _, _ = regular_representation(a)
        a._regular_rep = rep
    return rep


def ext_regular(m_or_res, i: int, homcap: int = None, degcap: int = None) -> ExtResult:
    """Ext^i(m, A) with A the regular module (graded: certified window)."""
    res = m_or_res
    if isinstance(m_or_res, Representation):
        res = resolve(m_or_res, homcap or max(8, i + 1), degcap)
    a = res.algebra
    if a.graded:
        dims, window = regular_ext_dims(res, i)
        return ExtResult(dims, exact=res.complete == "exact", window=window)
    return ext_dim(res, _regular_rep(a), i)


# ---------------------------------------------------------------------------
# the transpose tr^n = Ext^n(-, A) as an explicit opposite-side module


def tr_n(m_or_res, n: int, homcap: int = None, degcap: int = None) -> Representation:
    """Cokernel of Hom(P_{n-1}, A) -> Hom(P_n, A) over the opposite algebra."""
    res = m_or_res
    if isinstance(m_or_res, Representation):
        res = resolve(m_or_res, homcap or max(8, n + 1), degcap)
    a = res.algebra
    aop = a.opposite()
    if not res.stage_available(n):
        raise InconclusiveError(f"tr^{n} needs resolution stage {n}")
    if n >= len(res.stages) or len(res.stages[n]) == 0:
        return Representation(aop, {}, {}, check=False)
    if a.graded:
        return _tr_n_graded(res, n)
    return _tr_n_finite(res, n)


def _op_free(res: Resolution, j: int) -> FreeModule:
    """Dual free module over the opposite algebra: generator degrees negate."""
    return FreeModule(tuple((v, -g) for (v, g) in res.stages[j].gens))


def _dual_alg_matrix(res: Resolution, j: int) -> AlgMatrix:
    """Dual of d_j as an algebra matrix over the opposite algebra:
    transpose with word reversal."""
    a = res.algebra
    am = res.diffs[j]
    rows = _op_free(res, j)       # dual of stage j (the target of the dual map)
    cols = _op_free(res, j - 1)   # dual of stage j-1 (the source)
    entries = []
    for h in range(len(am.cols)):  # stage j generators index the rows
        row = []
        for k in range(len(am.rows)):
            row.append(reverse_elem(a, am.entries[k][h]))
        entries.append(row)
    return AlgMatrix(rows=rows, cols=cols, entries=entries)


def _tr_n_finite(res: Resolution, n: int) -> Representation:
    a = res.algebra
    aop = a.opposite()
    field = a.field
    free_n = _op_free(res, n)
    real_n = RealizedFree(aop, free_n)
    if n == 0:
        return real_n.rep
    dual = _dual_alg_matrix(res, n)
    real_prev = RealizedFree(aop, _op_free(res, n - 1))
    dmap = real_prev.realize_map(dual, real_n)
    from .modules import image, quotient as rep_quotient

    img, img_incl = image(dmap)
    coker, _ = rep_quotient(real_n.rep, img_incl)
    return coker


def _tr_n_graded(res: Resolution, n: int) -> Representation:
    """Graded cokernel, built exactly on the (small) degrees where it is
    nonzero; vanishing elsewhere in the window is certified by ranks."""
    a = res.algebra
    aop = a.opposite()
    field = a.field
    stages = [j for j in (n - 1, n) if 0 <= j < len(res.stages)]
    maxg = max((res.max_gen_degree(j) for j in stages), default=0)
    hi = res.window - maxg
    lo = -maxg
    am = res.diffs[n] if n >= 1 else None
    pieces = {}  # delta -> (basis, image rref rows)
    for delta in range(lo, hi + 1):
        basis = _dual_stage_basis(a, res.stages[n], delta)
        if not basis:
            continue
        cols = []
        if am is not None:
            _, _, cols = _dual_diff_columns(a, am, delta)
            cols = [c for c in cols if c]
        if len(basis) > _SPARSE_LIMIT and field.char == 0:
            try:
                if linalg.sparse_rank_mod(cols) == len(basis):
                    continue  # full rank mod p: cokernel vanishes over Q
            except ZeroDivisionError:
                pass
        rank = linalg.sparse_rank(field, cols)
        if rank == len(basis):
            continue
        dense_rows = linalg.sparse_to_dense(field, cols, len(basis))
        pieces[delta] = (basis, linalg.row_space_basis(field, dense_rows))
    # assemble the representation over the opposite algebra
    blocks = {}
    coords = {}  # (delta, vertex) -> list of positions into quotient basis
    quotient_data = {}
    for delta, (basis, img_rref) in sorted(pieces.items()):
        pivots = []
        for row in img_rref:
            for j, x in enumerate(row):
                if not field.is_zero(x):
                    pivots.append(j)
                    break
        free_pos = [j for j in range(len(basis)) if j not in set(pivots)]
        # split by the op-vertex (= source of the word in the base algebra)
        by_vertex = {}
        for idx in free_pos:
            slot, mono = basis[idx]
            by_vertex.setdefault(mono[0], []).append(idx)
        for v, idxs in by_vertex.items():
            blocks[(v, delta)] = len(idxs)
            coords[(delta, v)] = idxs
        quotient_data[delta] = (basis, img_rref, pivots, free_pos)

    def reduce_vec(delta, vec):
        basis, img_rref, pivots, free_pos = quotient_data[delta]
        w = list(vec)
        for row, p in zip(img_rref, pivots):
            c = w[p]
            if not field.is_zero(c):
                w = [field.sub(x, field.mul(c, y)) for x, y in zip(w, row)]
        return w

    action = {}
    qop = aop.quiver
    for (delta, v), idxs in sorted(coords.items()):
        basis, _, _, _ = quotient_data[delta]
        for iop in range(len(qop.arrows)):
            if qop._src[iop] != v:
                continue
            shift = qop._deg[iop]
            tdelta = delta + shift
            tkey = (tdelta, qop._tgt[iop])
            if tkey not in coords:
                # target block vanishes; the action must map to zero there
                continue
            tbasis, _, _, tfree = quotient_data[tdelta]
            tindex = {key: i for i, key in enumerate(tbasis)}
            cols_mat = []
            for idx in idxs:
                slot, mono = basis[idx]
                # left multiplication by the base-algebra arrow iop
                prod = a.multiply({(a.quiver._src[iop], (iop,)): field.one},
                                  {mono: field.one})
                vec = [field.zero] * len(tbasis)
                for mm, c in prod.items():
                    pos = tindex.get((slot, mm))
                    if pos is None:
                        raise ValidationError("transpose action left the window")
                    vec[pos] = field.add(vec[pos], c)
                red = reduce_vec(tdelta, vec)
                cols_mat.append([red[j] for j in tfree])
            # restrict to the block's own coordinates
            tidxs = coords[tkey]
            tpos_of = {j: t for t, j in enumerate(tfree)}
            rows = []
            for r in tidxs:
                rows.append([col[tpos_of[r]] for col in cols_mat])
            action[(iop, delta)] = rows
    rep = Representation(aop, blocks, action, check=False)
    rep.tr_window = (lo, hi)
    return rep


# ---------------------------------------------------------------------------
# Tor via the tensored resolution


def tor_dim(x: Representation, m_or_res, i: int, homcap: int = None,
            degcap: int = None) -> ExtResult:
    """dim Tor_i(x, m) for x a module over the opposite algebra; graded
    mode reports per total internal degree."""
    res = m_or_res
    if isinstance(m_or_res, Representation):
        res = resolve(m_or_res, homcap or max(8, i + 1), degcap)
    a = res.algebra
    aop = a.opposite()
    if x.algebra is not aop and x.algebra.presentation is not aop.presentation:
        raise ValidationError("tor_dim: first argument must live over the opposite algebra")
    field = a.field
    if not res.stage_available(i + 1):
        raise InconclusiveError(f"Tor_{i} needs resolution stage {i + 1}")

    def chain_layout(j):
        """Coordinates of P_j (x) tensor x: per generator, x-blocks."""
        if j >= len(res.stages):
            return []
        out = []
        for slot, (v, g) in enumerate(res.stages[j].gens):
            for (w, e), dim in sorted(x.blocks.items()):
                if w == v:
                    out.append((slot, (w, e), dim, g + e))
        return out

    def chain_matrix(j):
        """Matrix of P_j tensor x -> P_{j-1} tensor x."""
        src = chain_layout(j)
        tgt = chain_layout(j - 1)
        am = res.diffs[j] if j < len(res.diffs) else None
        rows_total = sum(d for (_, _, d, _) in tgt)
        cols_total = sum(d for (_, _, d, _) in src)
        mat = linalg.zeros(field, rows_total, cols_total)
        if am is None or rows_total == 0 or cols_total == 0:
            return src, tgt, mat
        row_off = []
        pos = 0
        for (k, xb, d, _) in tgt:
            row_off.append(pos)
            pos += d
        col_pos = 0
        for (h, xb, d, _) in src:
            for t, (k, xb2, d2, _) in enumerate(tgt):
                lam = am.entries[k][h]
                if not lam:
                    continue
                op_lam = reverse_elem(a, lam)
                acts = x.element_matrix(op_lam, xb)
                block = acts.get(xb2)
                if block is None:
                    continue
                for r in range(d2):
                    for c in range(d):
                        val = block[r][c]
                        if not field.is_zero(val):
                            mat[row_off[t] + r][col_pos + c] = field.add(
                                mat[row_off[t] + r][col_pos + c], val
                            )
            col_pos += d
        return src, tgt, mat

    src_i, _, d_i = chain_matrix(i) if i >= 1 else (chain_layout(0), [], None)
    if i >= 1:
        ker_dim_by_deg, ker_vectors = _graded_kernel_by_degree(field, d_i, src_i)
    else:
        ker_vectors = None
        ker_dim_by_deg = {}
        for (slot, xb, d, deg) in src_i:
            ker_dim_by_deg[deg] = ker_dim_by_deg.get(deg, 0) + d
    # image of the next differential
    src_next, _, d_next = chain_matrix(i + 1)
    img_rank_by_deg = {}
    if d_next is not None and src_next:
        img_rank_by_deg = _graded_image_rank_by_degree(field, d_next, src_next, src_i)
    dims = {}
    for deg, kd in sorted(ker_dim_by_deg.items()):
        h = kd - img_rank_by_deg.get(deg, 0)
        if h < 0:
            raise ValidationError("negative Tor dimension: rank bug")
        if h:
            dims[deg if a.graded else 0] = dims.get(deg if a.graded else 0, 0) + h
    window = None
    if a.graded:
        stages = [j for j in (i - 1, i, i + 1) if 0 <= j < len(res.stages)]
        maxg = max((res.max_gen_degree(j) for j in stages), default=0)
        maxx = max((e for (_, e) in x.blocks), default=0)
        window = (min((g for j in stages for (_, g) in res.stages[j].gens), default=0),
                  res.window + maxx)
    return ExtResult(dims, exact=res.complete == "exact" or not a.graded, window=window)


def _graded_kernel_by_degree(field, mat, src_layout):
    """Kernel dimensions of a chain matrix, split by total degree."""
    # degree-homogeneous: restrict columns per degree and count
    cols_by_deg = {}
    pos = 0
    for (slot, xb, d, deg) in src_layout:
        for t in range(d):
            cols_by_deg.setdefault(deg, []).append(pos + t)
        pos += d
    out = {}
    vectors = {}
    rows = mat
    for deg, cols in sorted(cols_by_deg.items()):
        sub = [[rows[r][c] for c in cols] for r in range(len(rows))]
        ns = linalg.nullspace(field, sub, cols=len(cols))
        out[deg] = len(ns)
        vectors[deg] = (cols, ns)
    return out, vectors


def _graded_image_rank_by_degree(field, mat, src_layout, tgt_layout):
    """Rank of a chain matrix per total degree of the target."""
    cols_by_deg = {}
    pos = 0
    for (slot, xb, d, deg) in src_layout:
        for t in range(d):
            cols_by_deg.setdefault(deg, []).append(pos + t)
        pos += d
    out = {}
    for deg, cols in sorted(cols_by_deg.items()):
        sub = [[mat[r][c] for c in cols] for r in range(len(mat))]
        out[deg] = linalg.rank(field, sub)
    return out


# ---------------------------------------------------------------------------
# chain-map lifting and Yoneda composition


@dataclass
class ChainMap:
    """Maps f_j: P_{i+j}(source) -> Q_j(target resolution), lowering the
    internal degree by delta; entries are algebra elements."""

    src_res: Resolution
    tgt_res: Resolution
    i: int
    delta: int
    mats: list  # list of AlgMatrix (rows = Q_j, cols = P_{i+j})


def _solve_free_preimage(res: Resolution, j: int, rhs_elems, degree: int, vertex):
    """Solve d_j(x) = rhs inside the free complex (one degree, one vertex);
    rhs is an element vector over the stage j-1 slots."""
    a = res.algebra
    field = a.field
    if j == 0:
        raise ValidationError("no differential below stage 0")
    am = res.diffs[j]
    src, tgt, cols = _realize_diff_block(a, am, degree, vertex)
    tgt_index = {key: i for i, key in enumerate(tgt)}
    rhs_vec = [field.zero] * len(tgt)
    for slot, elem in enumerate(rhs_elems):
        for mono, c in elem.items():
            idx = tgt_index.get((slot, mono))
            if idx is None:
                raise ValidationError("lift right-hand side outside the window")
            rhs_vec[idx] = field.add(rhs_vec[idx], c)
    rows = [[field.zero] * len(src) for _ in range(len(tgt))]
    for jj, col in enumerate(cols):
        for r, c in col.items():
            rows[r][jj] = c
    sol = linalg.solve(field, rows, rhs_vec)
    if sol is None:
        raise ValidationError("chain lift failed: right-hand side not in the image")
    elems = [dict() for _ in range(len(am.cols))]
    for pos, c in enumerate(sol):
        if field.is_zero(c):
            continue
        slot, mono = src[pos]
        elems[slot][mono] = field.add(elems[slot].get(mono, field.zero), c)
    return elems


def _solve_aug_preimage(res: Resolution, target_vec, degree: int, vertex):
    """Solve aug(x) = v in the cover P_0 -> m (one degree, one vertex)."""
    a = res.algebra
    field = a.field
    src, mat = _aug_block(res, degree, vertex)
    sol = linalg.solve(field, mat, target_vec)
    if sol is None:
        raise ValidationError("augmentation preimage failed")
    elems = [dict() for _ in range(len(res.stages[0]))]
    for pos, c in enumerate(sol):
        if field.is_zero(c):
            continue
        slot, mono = src[pos]
        elems[slot][mono] = field.add(elems[slot].get(mono, field.zero), c)
    return elems


def _aug_block_finite(res: Resolution, vertex):
    """Finite-mode augmentation on the single (vertex, 0) block."""
    return _aug_block(res, 0, vertex)


def lift_chain_map(theta: ExtClass, tgt_res: Resolution, depth: int) -> ChainMap:
    """Lift a cocycle theta in Ext^i(m, t) through the resolution of t,
    producing f_j: P_{i+j}(m) -> Q_j(t) for j = 0..depth with
    aug_Q . f_0 = theta and d^Q f_{j+1} = f_j d^P."""
    res = theta.res
    a = res.algebra
    field = a.field
    i = theta.i
    delta = theta.delta
    if tgt_res.module.dim_vector() != theta.target.dim_vector():
        raise ValidationError("target resolution does not resolve the cocycle target")
    # f_0 columns: per generator of P_i, a preimage of theta(gen) under aug
    if i + depth >= len(res.stages) and not res.stage_available(i + depth):
        raise InconclusiveError("source resolution too short for the requested lift")
    p_free = res.stages[i] if i < len(res.stages) else FreeModule(())
    q0 = tgt_res.stages[0]
    cols0 = []
    for slot, (v, g) in enumerate(p_free.gens):
        img = theta.gen_images[slot]
        tb = (v, g - delta)
        if img is None or theta.target.dim(tb) == 0:
            cols0.append([dict() for _ in range(len(q0))])
            continue
        elems = _solve_aug_preimage(tgt_res, img, g - delta, v)
        cols0.append(elems)
    mats = [AlgMatrix(rows=q0, cols=p_free,
                      entries=[[cols0[j][k] for j in range(len(p_free))]
                               for k in range(len(q0))])]
    for j in range(1, depth + 1):
        if i + j >= len(res.stages):
            # source resolution ended: the chain map continues by zero
            empty = FreeModule(())
            mats.append(AlgMatrix(rows=tgt_res.stages[j] if j < len(tgt_res.stages) else empty,
                                  cols=empty, entries=[[] for _ in range(len(tgt_res.stages[j]) if j < len(tgt_res.stages) else 0)]))
            continue
        dP = res.diffs[i + j]
        rhs = compose_alg_matrices(a, mats[j - 1], dP)
        if j >= len(tgt_res.stages):
            for row in rhs.entries:
                for elem in row:
                    if elem:
                        raise ValidationError("lift needs a deeper target resolution")
            qj = FreeModule(())
            mats.append(AlgMatrix(rows=qj, cols=res.stages[i + j],
                                  entries=[]))
            continue
        qj = tgt_res.stages[j]
        cols = []
        for col_idx, (v, g) in enumerate(res.stages[i + j].gens):
            rhs_col = [rhs.entries[k][col_idx] for k in range(len(rhs.rows))]
            if all(not e for e in rhs_col):
                cols.append([dict() for _ in range(len(qj))])
                continue
            elems = _solve_free_preimage(tgt_res, j, rhs_col, g - delta, v)
            cols.append(elems)
        mats.append(AlgMatrix(rows=qj, cols=res.stages[i + j],
                              entries=[[cols[jj][k] for jj in range(len(res.stages[i + j]))]
                                       for k in range(len(qj))]))
    return ChainMap(res, tgt_res, i, delta, mats)


def yoneda_product(theta: ExtClass, eta: ExtClass, tgt_res: Resolution) -> ExtClass:
    """Composite class of theta in Ext^i(A,B) followed by eta in
    Ext^j(B,C): an element of Ext^{i+j}(A,C) given by eta . (lift of
    theta); tgt_res must resolve B (the target of theta)."""
    a = theta.res.algebra
    field = a.field
    lift = lift_chain_map(theta, tgt_res, eta.i)
    f_top = lift.mats[eta.i]  # P_{i+j}(A) -> Q_j(B)
    n = eta.target
    gen_images = []
    src_stage = f_top.cols
    for col_idx, (v, g) in enumerate(src_stage.gens):
        tb = (v, g - theta.delta - eta.delta)
        d = n.dim(tb)
        if d == 0:
            gen_images.append(None)
            continue
        acc = [field.zero] * d
        for k, (w, h) in enumerate(f_top.rows.gens):
            mu = f_top.entries[k][col_idx]
            img = eta.gen_images[k]
            if not mu or img is None:
                continue
            src_b = (w, h - eta.delta)
            acts = n.element_matrix(mu, src_b)
            block = acts.get(tb)
            if block is None:
                continue
            vec = linalg.mat_vec(field, block, img)
            acc = [field.add(x, y) for x, y in zip(acc, vec)]
        gen_images.append(acc)
    return ExtClass(theta.res, n, theta.i + eta.i, theta.delta + eta.delta, gen_images)


# ---------------------------------------------------------------------------
# extensions from degree-1 cocycles (finite mode)


def extension_from_cocycle(theta: ExtClass) -> Representation:
    """The middle term of 0 -> N -> E -> M -> 0 for theta in Ext^1(M, N):
    (N (+) P_0) / {(theta(x), -d_1(x)) : x in P_1}."""
    if theta.i != 1:
        raise ValidationError("extensions come from Ext^1 classes")
    res = theta.res
    a = res.algebra
    if a.graded and not a.is_finite_dimensional:
        raise ValidationError("extension middle terms need a finite-dimensional setting")
    field = a.field
    from .modules import direct_sum, quotient as rep_quotient, submodule

    n = theta.target
    if res.realized is not None:
        real0, real1 = res.realized[0], res.realized[1]
    else:
        real0, real1 = RealizedFree(a, res.stages[0]), RealizedFree(a, res.stages[1])
    d1 = real1.realize_map(res.diffs[1], real0)
    theta_map = theta.as_module_map()
    big, incls = direct_sum([n, real0.rep])
    incl_n, incl_p = incls
    vectors = []
    for b in real1.rep.block_list():
        dim = real1.rep.dim(b)
        for j in range(dim):
            e = {b: _unit(field, dim, j)}
            tvec = theta_map.apply(e)
            dvec = d1.apply(e)
            w = {}
            for bb, v in incl_n.apply(tvec).items():
                w[bb] = v
            for bb, v in incl_p.apply(dvec).items():
                neg = [field.neg(x) for x in v]
                if bb in w:
                    w[bb] = [field.add(x, y) for x, y in zip(w[bb], neg)]
                else:
                    w[bb] = neg
            vectors.append(w)
    sub, incl = submodule(big, vectors, already_closed=True)
    ext, _ = rep_quotient(big, incl)
    return ext

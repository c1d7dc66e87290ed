"""Finite-dimensional representations of an AlgebraHandle.

A representation assigns to each (vertex, internal degree) block an
exact vector space and to each arrow a matrix from its source block to
its target block (degree-shifting in graded mode).  With left-to-right
path composition these are right modules; the opposite algebra's
representations play the role of left modules.

In finite mode every block sits in degree 0.  All matrices act on
column vectors, shape (target dim, source dim).
"""

from __future__ import annotations

from . import linalg
from .algebra import AlgebraHandle
from .errors import CapError, ValidationError

Block = tuple  # (vertex index, internal degree)


def _min_trunc(*bounds):
    vals = [b for b in bounds if b is not None]
    return min(vals) if vals else None


class Representation:
    def __init__(self, algebra: AlgebraHandle, blocks, action, truncated_above=None, check=True):
        self.algebra = algebra
        self.blocks = {b: d for b, d in blocks.items() if d > 0}
        self.action = dict(action)
        self.truncated_above = truncated_above
        q = algebra.quiver
        for (v, d) in self.blocks:
            if not (0 <= v < len(q.vertices)):
                raise ValidationError(f"bad vertex index {v}")
            if not algebra.graded and d != 0:
                raise ValidationError("nonzero degree block in finite mode")
        # drop maps touching zero blocks, validate shapes of the rest
        for key in list(self.action):
            i, d = key
            src = (q._src[i], d)
            tgt = (q._tgt[i], d + self._arrow_shift(i))
            mat = self.action[key]
            sd, td = self.blocks.get(src, 0), self.blocks.get(tgt, 0)
            if sd == 0 or td == 0:
                if mat and any(not algebra.field.is_zero(x) for row in mat for x in row):
                    raise ValidationError("action matrix on a zero block")
                del self.action[key]
                continue
            if len(mat) != td or any(len(row) != sd for row in mat):
                raise ValidationError(
                    f"action matrix for arrow {q.arrows[i].name} at degree {d} "
                    f"has wrong shape"
                )
        if check:
            self._check_relations()

    def _arrow_shift(self, i: int) -> int:
        return self.algebra.quiver._deg[i] if self.algebra.graded else 0

    # -- basic structure -------------------------------------------------

    def block_list(self):
        return sorted(self.blocks)

    def dim(self, block) -> int:
        return self.blocks.get(block, 0)

    def total_dim(self) -> int:
        return sum(self.blocks.values())

    def dim_vector(self):
        return {b: d for b, d in sorted(self.blocks.items())}

    def is_zero(self) -> bool:
        return not self.blocks

    def arrow_matrix(self, i: int, d: int):
        """Action matrix of arrow i out of degree d (zero-filled)."""
        q = self.algebra.quiver
        src = (q._src[i], d)
        tgt = (q._tgt[i], d + self._arrow_shift(i))
        sd, td = self.dim(src), self.dim(tgt)
        hit = self.action.get((i, d))
        if hit is not None:
            return hit
        return linalg.zeros(self.algebra.field, td, sd)

    def word_matrix(self, mono, d: int):
        """Matrix of a path acting out of block (source(mono), d); returns
        (target block, matrix).  Passing through a zero block yields the
        zero matrix of the right shape."""
        q = self.algebra.quiver
        v, word = mono
        cur = (v, d)
        src_dim = self.dim(cur)
        field = self.algebra.field
        mat = linalg.identity(field, src_dim)
        dead = src_dim == 0
        for i in word:
            nxt = (q._tgt[i], cur[1] + self._arrow_shift(i))
            if not dead:
                if self.dim(nxt) == 0:
                    dead = True
                else:
                    mat = linalg.mat_mul(field, self.arrow_matrix(i, cur[1]), mat)
            cur = nxt
        if dead:
            return cur, linalg.zeros(field, self.dim(cur), src_dim)
        return cur, mat

    def element_matrix(self, elem, src_block):
        """Action of an algebra element grouped by target block."""
        field = self.algebra.field
        q = self.algebra.quiver
        v, d = src_block
        out = {}
        for mono, c in elem.items():
            if mono[0] != v:
                continue
            tgt, mat = self.word_matrix(mono, d)
            scaled = linalg.mat_scale(field, c, mat)
            if tgt in out:
                out[tgt] = linalg.mat_add(field, out[tgt], scaled)
            else:
                out[tgt] = scaled
        return out

    def _check_relations(self):
        field = self.algebra.field
        for rel in self.algebra.presentation.relations:
            src = next(iter(rel))[0]
            for (v, d) in list(self.blocks):
                if v != src:
                    continue
                acc = {}
                for mono, c in rel.items():
                    tgt, mat = self.word_matrix(mono, d)
                    scaled = linalg.mat_scale(field, c, mat)
                    if tgt in acc:
                        acc[tgt] = linalg.mat_add(field, acc[tgt], scaled)
                    else:
                        acc[tgt] = scaled
                for tgt, mat in acc.items():
                    if self.dim(tgt) and not linalg.is_zero_matrix(field, mat):
                        raise ValidationError(
                            "relation does not annihilate the representation"
                        )

    # -- coordinates -------------------------------------------------------

    def offsets(self):
        off, pos = {}, 0
        for b in self.block_list():
            off[b] = pos
            pos += self.blocks[b]
        return off, pos

    def __repr__(self):
        return f"Representation(dim {self.total_dim()}: {self.dim_vector()})"


class ModuleMap:
    """A homomorphism of representations, blockwise matrices.

    internal_degree delta means block (v, d) of the source maps into
    block (v, d - delta) of the target (0 in finite mode).
    """

    def __init__(self, source, target, blocks, internal_degree: int = 0):
        self.source = source
        self.target = target
        self.internal_degree = internal_degree
        self.blocks = {}
        field = source.algebra.field
        for b, mat in blocks.items():
            sd = source.dim(b)
            td = target.dim((b[0], b[1] - internal_degree))
            if sd == 0:
                continue
            if td == 0:
                if mat and any(not field.is_zero(x) for row in mat for x in row):
                    raise ValidationError("map into a zero block")
                continue
            if len(mat) != td or any(len(r) != sd for r in mat):
                raise ValidationError(f"map block {b} has wrong shape")
            self.blocks[b] = mat

    def block(self, b):
        sd = self.source.dim(b)
        td = self.target.dim((b[0], b[1] - self.internal_degree))
        return self.blocks.get(b, linalg.zeros(self.source.algebra.field, td, sd))

    def verify(self) -> bool:
        """Exact naturality squares on every arrow and block."""
        src, tgt = self.source, self.target
        field = src.algebra.field
        q = src.algebra.quiver
        delta = self.internal_degree
        for (v, d) in src.block_list():
            for i in range(len(q.arrows)):
                if q._src[i] != v:
                    continue
                shift = src._arrow_shift(i)
                # f after source action vs target action after f
                left = linalg.mat_mul(field, self.block((q._tgt[i], d + shift)), src.arrow_matrix(i, d))
                right = linalg.mat_mul(
                    field, tgt.arrow_matrix(i, d - delta), self.block((v, d))
                )
                if not linalg.mat_eq(field, left, right):
                    return False
        return True

    def apply(self, vec):
        """Apply to a block-vector dict."""
        field = self.source.algebra.field
        out = {}
        for b, v in vec.items():
            if b not in self.source.blocks:
                continue
            tb = (b[0], b[1] - self.internal_degree)
            if self.target.dim(tb) == 0:
                continue
            w = linalg.mat_vec(field, self.block(b), v)
            if any(not field.is_zero(x) for x in w):
                prev = out.get(tb)
                out[tb] = w if prev is None else [field.add(a, c) for a, c in zip(prev, w)]
        return out

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other."""
        if other.target is not self.source and other.target.blocks != self.source.blocks:
            raise ValidationError("composition blocks mismatch")
        field = self.source.algebra.field
        blocks = {}
        for b in other.source.block_list():
            mid = (b[0], b[1] - other.internal_degree)
            sd = other.source.dim(b)
            td = self.target.dim((mid[0], mid[1] - self.internal_degree))
            if sd == 0 or td == 0:
                continue
            if self.source.dim(mid) == 0:
                blocks[b] = linalg.zeros(field, td, sd)
            else:
                blocks[b] = linalg.mat_mul(field, self.block(mid), other.block(b))
        return ModuleMap(
            other.source,
            self.target,
            blocks,
            internal_degree=self.internal_degree + other.internal_degree,
        )

    def is_zero(self) -> bool:
        field = self.source.algebra.field
        return all(
            linalg.is_zero_matrix(field, m) for m in self.blocks.values()
        )

    def matrix_rank(self) -> int:
        field = self.source.algebra.field
        return sum(linalg.rank(field, m) for m in self.blocks.values())


def zero_map(source, target, internal_degree=0) -> ModuleMap:
    return ModuleMap(source, target, {}, internal_degree)


def identity_map(rep) -> ModuleMap:
    field = rep.algebra.field
    return ModuleMap(
        rep, rep, {b: linalg.identity(field, rep.dim(b)) for b in rep.blocks}
    )


# ---------------------------------------------------------------------------
# constructions of basic modules


def zero_rep(a: AlgebraHandle) -> Representation:
    return Representation(a, {}, {}, check=False)


def simple_module(a: AlgebraHandle, vertex, degree: int = 0) -> Representation:
    """One-dimensional module at a vertex, sitting in the given degree."""
    q = a.quiver
    if isinstance(vertex, str):
        if vertex not in q.vertex_index:
            raise ValidationError(f"unknown vertex {vertex!r}")
        vertex = q.vertex_index[vertex]
    if not a.graded and degree != 0:
        raise ValidationError("nonzero shift in finite mode")
    return Representation(a, {(vertex, degree): 1}, {}, check=False)


def projective_module(a: AlgebraHandle, vertex, gen_degree: int = 0) -> Representation:
    """The module of normal paths starting at a vertex, with right
    concatenation as the action; in graded mode the generator sits in
    internal degree gen_degree and the data is truncated at the cap."""
    q = a.quiver
    field = a.field
    if isinstance(vertex, str):
        vertex = q.vertex_index[vertex]
    words = {}  # block -> ordered list of monos
    index = {}
    top_word_degree = a.cap if a.graded else a.cap
    for wd in range(top_word_degree + 1):
        for m in a.basis(wd):
            if m[0] != vertex:
                continue
            d = gen_degree + wd if a.graded else 0
            b = (q.target(m), d)
            index[m] = (b, len(words.setdefault(b, [])))
            words[b].append(m)
    blocks = {b: len(ws) for b, ws in words.items()}
    action = {}
    for b, ws in words.items():
        v, d = b
        for i in range(len(q.arrows)):
            if q._src[i] != v:
                continue
            shift = q._deg[i] if a.graded else 0
            if a.graded and (d - gen_degree) + q._deg[i] > a.cap:
                continue  # truncated region
            tb = (q._tgt[i], d + shift)
            cols = []
            for m in ws:
                prod = a.mono_mul(m, (v, (i,)))
                col = [field.zero] * len(words.get(tb, []))
                for mm, c in prod.items():
                    if mm in index:
                        bb, pos = index[mm]
                        if bb == tb:
                            col[pos] = c
                cols.append(col)
            if words.get(tb):
                action[(i, d)] = linalg.transpose(cols) if cols else []
    truncated = None
    if a.graded and not a.is_finite_dimensional:
        truncated = gen_degree + a.cap
    rep = Representation(a, blocks, action, truncated_above=truncated, check=False)
    rep.proj_words = words  # basis bookkeeping for covers and dualization
    rep.proj_vertex = vertex
    rep.proj_gen_degree = gen_degree
    return rep


def direct_sum(reps):
    """Direct sum with remembered embeddings; returns (sum, [inclusions])."""
    reps = list(reps)
    if not reps:
        raise ValidationError("empty direct sum")
    a = reps[0].algebra
    field = a.field
    blocks = {}
    for r in reps:
        for b, d in r.blocks.items():
            blocks[b] = blocks.get(b, 0) + d
    offsets = []
    seen = {b: 0 for b in blocks}
    for r in reps:
        offsets.append({b: seen[b] for b in r.blocks})
        for b, d in r.blocks.items():
            seen[b] += d
    action = {}
    q = a.quiver
    for b, dim in blocks.items():
        v, d = b
        for i in range(len(q.arrows)):
            if q._src[i] != v:
                continue
            shift = q._deg[i] if a.graded else 0
            tb = (q._tgt[i], d + shift)
            if tb not in blocks:
                continue
            mat = linalg.zeros(field, blocks[tb], dim)
            nonzero = False
            for r, off in zip(reps, offsets):
                sub = r.action.get((i, d))
                if sub is None or b not in r.blocks or tb not in r.blocks:
                    continue
                ro, co = off[tb], off[b]
                for ii, row in enumerate(sub):
                    for jj, x in enumerate(row):
                        if not field.is_zero(x):
                            mat[ro + ii][co + jj] = x
                            nonzero = True
            if nonzero:
                action[(i, d)] = mat
    out = Representation(
        a,
        blocks,
        action,
        truncated_above=_min_trunc(*(r.truncated_above for r in reps)),
        check=False,
    )
    incl = []
    for r, off in zip(reps, offsets):
        m = {}
        for b, d in r.blocks.items():
            mat = linalg.zeros(field, blocks[b], d)
            for j in range(d):
                mat[off[b] + j][j] = field.one
            m[b] = mat
        incl.append(ModuleMap(r, out, m))
    return out, incl


def regular_representation(a: AlgebraHandle):
    """The algebra as a module over itself: direct sum of the P(v).

    Returns (rep, list of per-vertex projectives, inclusions)."""
    projs = [projective_module(a, v) for v in range(a.vertex_count())]
    total, incl = direct_sum(projs)
    return total, projs, incl


# ---------------------------------------------------------------------------
# sub/quotient machinery


def _collect_block_vectors(rep, vectors):
    """Sort loose block-vector dicts into per-block row lists."""
    per_block = {b: [] for b in rep.blocks}
    for vec in vectors:
        for b, v in vec.items():
            if b not in rep.blocks:
                if any(not rep.algebra.field.is_zero(x) for x in v):
                    raise ValidationError("vector outside the representation")
                continue
            per_block[b].append(list(v))
    return per_block


def _close_under_action(rep, per_block):
    """Saturate per-block spans under all arrow actions."""
    field = rep.algebra.field
    q = rep.algebra.quiver
    bases = {
        b: linalg.row_space_basis(field, rows) for b, rows in per_block.items() if rows
    }
    changed = True
    while changed:
        changed = False
        for b in list(bases):
            v, d = b
            for i in range(len(q.arrows)):
                if q._src[i] != v:
                    continue
                tb = (q._tgt[i], d + rep._arrow_shift(i))
                if rep.dim(tb) == 0:
                    continue
                mat = rep.arrow_matrix(i, d)
                imgs = [linalg.mat_vec(field, mat, row) for row in bases[b]]
                imgs = [w for w in imgs if any(not field.is_zero(x) for x in w)]
                if not imgs:
                    continue
                old = bases.get(tb, [])
                new = linalg.row_space_basis(field, old + imgs)
                if len(new) != len(old):
                    bases[tb] = new
                    changed = True
    return bases


def submodule(rep, vectors, already_closed=False):
    """Submodule generated by block-vector dicts.

    Returns (subrep, inclusion map).  The sub representation uses the
    canonical rref basis of each block subspace.
    """
    field = rep.algebra.field
    per_block = _collect_block_vectors(rep, vectors)
    if already_closed:
        bases = {
            b: linalg.row_space_basis(field, rows)
            for b, rows in per_block.items()
            if rows
        }
    else:
        bases = _close_under_action(rep, per_block)
    bases = {b: rows for b, rows in bases.items() if rows}
    blocks = {b: len(rows) for b, rows in bases.items()}
    q = rep.algebra.quiver
    action = {}
    for b, rows in bases.items():
        v, d = b
        for i in range(len(q.arrows)):
            if q._src[i] != v:
                continue
            tb = (q._tgt[i], d + rep._arrow_shift(i))
            if tb not in bases:
                continue
            mat = rep.arrow_matrix(i, d)
            cols = []
            for row in rows:
                img = linalg.mat_vec(field, mat, row)
                coeffs = _express_in_rref(field, bases[tb], img)
                if coeffs is None:
                    raise ValidationError("span not closed under action")
                cols.append(coeffs)
            action[(i, d)] = linalg.transpose(cols)
    sub = Representation(
        rep.algebra, blocks, action, truncated_above=rep.truncated_above, check=False
    )
    incl = ModuleMap(
        sub, rep, {b: linalg.transpose(rows) for b, rows in bases.items()}
    )
    return sub, incl


def _express_in_rref(field, rref_rows, vec):
    """Coordinates of vec in an rref row basis, or None."""
    coeffs = []
    w = list(vec)
    pivots = []
    for row in rref_rows:
        for j, x in enumerate(row):
            if not field.is_zero(x):
                pivots.append(j)
                break
    for row, p in zip(rref_rows, pivots):
        c = w[p]
        coeffs.append(c)
        if not field.is_zero(c):
            w = [field.sub(x, field.mul(c, y)) for x, y in zip(w, row)]
    if any(not field.is_zero(x) for x in w):
        return None
    return coeffs


def quotient(rep, sub_inclusion: ModuleMap):
    """Quotient by the image of an inclusion; returns (q, projection)."""
    field = rep.algebra.field
    q = rep.algebra.quiver
    # rows of the subspace per block, from the inclusion matrices
    sub_rows = {}
    for b, mat in sub_inclusion.blocks.items():
        rows = linalg.transpose(mat)
        if rows:
            sub_rows[b] = rows
    proj_data = {}
    blocks = {}
    for b in rep.block_list():
        rows = sub_rows.get(b, [])
        rr, pivots = linalg.rref(field, rows) if rows else ([], [])
        rr = rr[: len(pivots)]
        n = rep.dim(b)
        free = [j for j in range(n) if j not in set(pivots)]
        proj_data[b] = (rr, pivots, free)
        if free:
            blocks[b] = len(free)

    def project_vec(b, vec):
        rr, pivots, free = proj_data[b]
        w = list(vec)
        for row, p in zip(rr, pivots):
            c = w[p]
            if not field.is_zero(c):
                w = [field.sub(x, field.mul(c, y)) for x, y in zip(w, row)]
        return [w[j] for j in free]

    action = {}
    for b in blocks:
        v, d = b
        _, _, free = proj_data[b]
        for i in range(len(q.arrows)):
            if q._src[i] != v:
                continue
            tb = (q._tgt[i], d + rep._arrow_shift(i))
            if tb not in blocks:
                continue
            mat = rep.arrow_matrix(i, d)
            cols = []
            for j in free:
                src_vec = [field.zero] * rep.dim(b)
                src_vec[j] = field.one
                cols.append(project_vec(tb, linalg.mat_vec(field, mat, src_vec)))
            action[(i, d)] = linalg.transpose(cols)
    qrep = Representation(
        rep.algebra, blocks, action, truncated_above=rep.truncated_above, check=False
    )
    proj_blocks = {}
    for b in blocks:
        n = rep.dim(b)
        cols = []
        for j in range(n):
            e = [field.zero] * n
            e[j] = field.one
            cols.append(project_vec(b, e))
        proj_blocks[b] = linalg.transpose(cols)
    proj = ModuleMap(rep, qrep, proj_blocks)
    return qrep, proj


def kernel(f: ModuleMap):
    """Kernel of a module map as (subrep of f.source, inclusion)."""
    field = f.source.algebra.field
    vectors = []
    for b in f.source.block_list():
        mat = f.block(b)
        ns = linalg.nullspace(field, mat, cols=f.source.dim(b))
        for v in ns:
            vectors.append({b: v})
    return submodule(f.source, vectors, already_closed=True)


def image(f: ModuleMap):
    """Image of a module map as (subrep of f.target, inclusion)."""
    vectors = []
    for b in f.source.block_list():
        mat = f.block(b)
        tb = (b[0], b[1] - f.internal_degree)
        for col in linalg.transpose(mat):
            vectors.append({tb: col})
    return submodule(f.target, vectors, already_closed=True)


# ---------------------------------------------------------------------------
# structural operations


def radical(m: Representation):
    """Submodule spanned by all arrow images; returns (rad, inclusion)."""
    field = m.algebra.field
    q = m.algebra.quiver
    vectors = []
    for (i, d) in m.action:
        tb = (q._tgt[i], d + m._arrow_shift(i))
        for col in linalg.transpose(m.action[(i, d)]):
            if any(not field.is_zero(x) for x in col):
                vectors.append({tb: col})
    return submodule(m, vectors, already_closed=True)


def socle(m: Representation):
    """Largest semisimple submodule: joint kernel of the arrow actions."""
    field = m.algebra.field
    q = m.algebra.quiver
    vectors = []
    for b in m.block_list():
        v, d = b
        stacked = []
        for i in range(len(q.arrows)):
            if q._src[i] != v:
                continue
            stacked.extend(m.arrow_matrix(i, d))
        if stacked:
            for vec in linalg.nullspace(field, stacked, cols=m.dim(b)):
                vectors.append({b: vec})
        else:
            for j in range(m.dim(b)):
                e = [field.zero] * m.dim(b)
                e[j] = field.one
                vectors.append({b: e})
    return submodule(m, vectors, already_closed=True)


def top(m: Representation):
    """m / rad(m); returns (top, projection)."""
    _, incl = radical(m)
    return quotient(m, incl)


def composition_factors(m: Representation):
    """Multiset of (vertex, degree) from the radical filtration."""
    factors = {}
    cur = m
    guard = m.total_dim() + 1
    while not cur.is_zero() and guard:
        guard -= 1
        t, _ = top(cur)
        if t.is_zero():
            raise ValidationError("radical filtration stalled (radical = module)")
        for b, d in t.blocks.items():
            factors[b] = factors.get(b, 0) + d
        cur, _ = radical(cur)
    return dict(sorted(factors.items()))


def module_length(m: Representation) -> int:
    return sum(composition_factors(m).values())


def dual_D(m: Representation) -> Representation:
    """K-linear dual over the opposite algebra; degrees are negated."""
    aop = m.algebra.opposite()
    field = m.algebra.field
    q = m.algebra.quiver
    blocks = {(v, -d): dim for (v, d), dim in m.blocks.items()}
    action = {}
    for (i, d), mat in m.action.items():
        shift = m._arrow_shift(i)
        # original: (src, d) -> (tgt, d+shift); dual: (tgt, -d-shift) -> (src, -d)
        new_d = -d - shift
        action[(i, new_d)] = linalg.transpose(mat)
    out = Representation(aop, blocks, action, truncated_above=None, check=False)
    if m.truncated_above is not None:
        out.truncated_below = -m.truncated_above
    return out


def hom_space(m: Representation, n: Representation, internal_degree: int = 0):
    """Basis of module maps m -> n of one internal degree (0 = graded maps)."""
    if m.algebra is not n.algebra and m.algebra.presentation is not n.algebra.presentation:
        raise ValidationError("hom between modules over different algebras")
    field = m.algebra.field
    q = m.algebra.quiver
    delta = internal_degree
    # unknowns: entries of per-block matrices f_b
    layout = []
    offset = {}
    pos = 0
    for b in m.block_list():
        tb = (b[0], b[1] - delta)
        sd, td = m.dim(b), n.dim(tb)
        if sd and td:
            offset[b] = pos
            layout.append((b, sd, td))
            pos += sd * td
    total = pos
    rows = []
    for (v, d) in m.block_list():
        for i in range(len(q.arrows)):
            if q._src[i] != v:
                continue
            shift = m._arrow_shift(i)
            sb, tb = (v, d), (q._tgt[i], d + shift)
            nb_s = (v, d - delta)
            nb_t = (q._tgt[i], d + shift - delta)
            Ma = m.arrow_matrix(i, d)
            Na = n.arrow_matrix(i, d - delta)
            rdim = n.dim(nb_t)
            sdim = m.dim(sb)
            if rdim == 0 or sdim == 0:
                continue
            # constraint: f_{tb} Ma - Na f_{sb} = 0  (rdim x sdim equations)
            for r in range(rdim):
                for c in range(sdim):
                    row = [field.zero] * total
                    if tb in offset and m.dim(tb):
                        base = offset[tb]
                        for k in range(m.dim(tb)):
                            coef = Ma[k][c]
                            if not field.is_zero(coef):
                                row[base + r * m.dim(tb) + k] = field.add(
                                    row[base + r * m.dim(tb) + k], coef
                                )
                    if sb in offset and n.dim(nb_s):
                        base = offset[sb]
                        for k in range(n.dim(nb_s)):
                            coef = Na[r][k]
                            if not field.is_zero(coef):
                                row[base + k * sdim + c] = field.sub(
                                    row[base + k * sdim + c], coef
                                )
                    if any(not field.is_zero(x) for x in row):
                        rows.append(row)
    basis = linalg.nullspace(field, rows, cols=total) if total else []
    out = []
    for vec in basis:
        blocks = {}
        for b, sd, td in layout:
            base = offset[b]
            mat = [[vec[base + r * sd + c] for c in range(sd)] for r in range(td)]
            blocks[b] = mat
        out.append(ModuleMap(m, n, blocks, internal_degree=delta))
    return out


def is_isomorphic(m: Representation, n: Representation, seed: int = 7):
    """Isomorphism test with witness; deterministic seeded search.

    Returns (bool, witness ModuleMap or None)."""
    if m.dim_vector() != n.dim_vector():
        return False, None
    if m.is_zero():
        return True, zero_map(m, n)
    homs = hom_space(m, n)
    if not homs:
        return False, None
    blocks = m.block_list()
    off, total = m.offsets()

    def flatten(f):
        big = linalg.zeros(m.algebra.field, total, total)
        for b in blocks:
            mat = f.block(b)
            for r in range(n.dim(b)):
                for c in range(m.dim(b)):
                    big[off[b] + r][off[b] + c] = mat[r][c]
        return big

    mats = [flatten(f) for f in homs]
    got = linalg.find_invertible_combination(m.algebra.field, mats, seed=seed)
    if got is None:
        # exhaustive-style certificate: the determinant polynomial of the
        # generic combination is evaluated on a deterministic grid large
        # enough for its degree; all zero means no isomorphism exists
        if _det_identically_zero(m.algebra.field, mats, total):
            return False, None
        raise ValidationError(
            "isomorphism search exhausted without a certificate"
        )
    coeffs, _ = got
    field = m.algebra.field
    blocks_out = {}
    for b in blocks:
        acc = linalg.zeros(field, n.dim(b), m.dim(b))
        for c, f in zip(coeffs, homs):
            if field.is_zero(c):
                continue
            acc = linalg.mat_add(field, acc, linalg.mat_scale(field, c, f.block(b)))
        blocks_out[b] = acc
    return True, ModuleMap(m, n, blocks_out)


def _det_identically_zero(field, mats, n) -> bool:
    """Decide det(sum t_i mats_i) == 0 as a polynomial, by grid evaluation.

    The determinant has degree <= n in each variable, so a grid with
    n+1 points per variable is conclusive over Q; over F_p the grid is
    capped by p and the verdict stays conservative."""
    r = len(mats)
    npoints = n + 1
    if field.char:
        npoints = min(npoints, field.char)
    if npoints**r > 200000:
        # keep it bounded; fall back to a coarse (still conservative) grid
        cut = npoints
        while cut > 2 and cut**r > 200000:
            cut -= 1
        npoints = max(2, cut)
    from itertools import product

    for point in product(range(npoints), repeat=r):
        acc = linalg.zeros(field, n, n)
        for t, mmat in zip(point, mats):
            if t == 0:
                continue
            acc = linalg.mat_add(field, acc, linalg.mat_scale(field, field.of(t), mmat))
        if not field.is_zero(linalg.det(field, acc)):
            return False
    return True


def end_dim(m: Representation) -> int:
    return len(hom_space(m, m))


# ---------------------------------------------------------------------------
# torsion radical


def normalize_simple_set(a: AlgebraHandle, simples):
    """Entries (vertex, degree) with degree None as a wildcard."""
    q = a.quiver
    out = set()
    for entry in simples:
        if isinstance(entry, (str, int)):
            v, d = entry, None
        else:
            v, d = entry
        if isinstance(v, str):
            if v not in q.vertex_index:
                raise ValidationError(f"unknown vertex {v!r}")
            v = q.vertex_index[v]
        out.add((v, d))
    return out


def _socle_part_vectors(m, soc, soc_incl, sset):
    """Vectors of the socle blocks matching a simple set."""
    field = m.algebra.field
    vectors = []
    for b in soc.block_list():
        v, d = b
        if (v, None) in sset or (v, d) in sset:
            mat = soc_incl.blocks.get(b)
            if mat is None:
                continue
            for col in linalg.transpose(mat):
                vectors.append({b: col})
    return vectors


def torsion_submodule(m: Representation, simples) -> tuple:
    """Largest submodule with composition factors in the simple set,
    by socle iteration; returns (sub, inclusion)."""
    a = m.algebra
    field = a.field
    sset = normalize_simple_set(a, simples)
    # current submodule as block row-spans inside m
    current = {}

    def to_vectors(span):
        return [{b: row} for b, rows in span.items() for row in rows]

    while True:
        cur_vectors = to_vectors(current)
        sub, incl = submodule(m, cur_vectors, already_closed=True)
        qrep, proj = quotient(m, incl)
        soc, soc_incl = socle(qrep)
        add = _socle_part_vectors(qrep, soc, soc_incl, sset)
        if not add:
            return sub, incl
        # pull the socle part back to m through the projection
        new = dict(current)
        grew = False
        for vec in add:
            lifted = _preimage_vector(field, proj, vec)
            for b, v in lifted.items():
                rows = new.get(b, [])
                ext = linalg.row_space_basis(field, rows + [v])
                if len(ext) != len(rows):
                    new[b] = ext
                    grew = True
        if not grew:
            return sub, incl
        current = new


def _preimage_vector(field, proj: ModuleMap, vec):
    out = {}
    for b, v in vec.items():
        mat = proj.block(b)
        x = linalg.solve(field, mat, v)
        if x is None:
            raise ValidationError("projection preimage failed")
        out[b] = x
    return out


# ---------------------------------------------------------------------------
# representation text format


def dump_representation(rep: Representation) -> str:
    q = rep.algebra.quiver
    field = rep.algebra.field
    lines = []
    for (v, d) in rep.block_list():
        lines.append(f"space {q.vertices[v]} {d} {rep.dim((v, d))}")
    for (i, d) in sorted(rep.action, key=lambda k: (k[0], k[1])):
        mat = rep.action[(i, d)]
        if linalg.is_zero_matrix(field, mat):
            continue
        body = " | ".join(" ".join(field.format(x) for x in row) for row in mat)
        lines.append(f"map {q.arrows[i].name} {d} : {body}")
    return "\n".join(lines) + "\n"


def parse_representation(text: str, a: AlgebraHandle) -> Representation:
    from .errors import ParseError

    q = a.quiver
    field = a.field
    blocks = {}
    action = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "space":
            if len(parts) != 4:
                raise ParseError("space line needs: space <vertex> <degree> <dim>", lineno)
            v, d, dim = parts[1], parts[2], parts[3]
            if v not in q.vertex_index:
                raise ParseError(f"unknown vertex {v!r}", lineno)
            blocks[(q.vertex_index[v], int(d))] = int(dim)
        elif parts[0] == "map":
            head, body = line.split(":", 1)
            hp = head.split()
            if len(hp) != 3:
                raise ParseError("map line needs: map <arrow> <srcdegree> : ...", lineno)
            name, d = hp[1], int(hp[2])
            if name not in q.arrow_index:
                raise ParseError(f"unknown arrow {name!r}", lineno)
            i = q.arrow_index[name]
            mat = []
            for rowtxt in body.split("|"):
                row = [field.of(tok) for tok in rowtxt.split()]
                mat.append(row)
            action[(i, d)] = mat
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno)
    return Representation(a, blocks, action)

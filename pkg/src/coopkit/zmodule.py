"""Exact linear algebra over the integers.

Free Z-modules with ordered canonical bases, sparse integer matrices,
signed permutations and signed permutation group actions, tensor and
product constructions, and fixed-point (invariant) submodules computed
by Hermite-style integer kernel extraction.

Everything here is immutable after construction and safe to share.
"""

from __future__ import annotations

import itertools


# ---------------------------------------------------------------------------
# basis tags
#
# A basis tag is any nesting of tuples, ints and strings.  Tags compare by a
# type-stratified key so heterogeneous bases still sort deterministically.

def tag_key(tag):
    if isinstance(tag, bool):
        raise TypeError("bool is not a valid basis tag")
    if isinstance(tag, int):
        return (0, tag)
    if isinstance(tag, str):
        return (1, tag)
    if isinstance(tag, tuple):
        return (2, tuple(tag_key(t) for t in tag))
    raise TypeError("unsupported basis tag: %r" % (tag,))


UNIT_TAG = "1"


class FreeMod:
    """Finitely generated free Z-module with an ordered basis of tags.

    The zero module (empty basis) is the final object of the ambient
    category of free Z-modules.
    """

    __slots__ = ("basis", "index")

    def __init__(self, basis=()):
        basis = tuple(basis)
        index = {}
        for i, t in enumerate(basis):
            if t in index:
                raise ValueError("duplicate basis tag: %r" % (t,))
            index[t] = i
        self.basis = basis
        self.index = index

    @property
    def rank(self):
        return len(self.basis)

    def is_zero(self):
        return not self.basis

    def __eq__(self, other):
        return isinstance(other, FreeMod) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        return "FreeMod(rank=%d)" % self.rank


ZERO_MOD = FreeMod()
UNIT_MOD = FreeMod((UNIT_TAG,))


# ---------------------------------------------------------------------------
# sparse integer matrices

class IntMatrix:
    """Sparse integer matrix stored column-wise as dicts {row: value}."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows, ncols, cols=None):
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = tuple({} for _ in range(ncols))
        else:
            cols = tuple(dict(c) for c in cols)
            if len(cols) != ncols:
                raise ValueError("column count mismatch")
        self.cols = cols

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def zeros(cls, m, n):
        return cls(m, n)

    @classmethod
    def from_entries(cls, m, n, entries):
        cols = [{} for _ in range(n)]
        for r, c, v in entries:
            if v:
                if not (0 <= r < m and 0 <= c < n):
                    raise ValueError("entry out of range")
                cols[c][r] = cols[c].get(r, 0) + v
                if not cols[c][r]:
                    del cols[c][r]
        return cls(m, n, cols)

    def entry(self, r, c):
        return self.cols[c].get(r, 0)

    def entries(self):
        for c, col in enumerate(self.cols):
            for r, v in col.items():
                yield r, c, v

    def sorted_entries(self):
        return sorted(self.entries(), key=lambda e: (e[0], e[1]))

    def column(self, c):
        return dict(self.cols[c])

    def is_zero(self):
        return all(not c for c in self.cols)

    def __eq__(self, other):
        return (isinstance(other, IntMatrix)
                and self.nrows == other.nrows and self.ncols == other.ncols
                and self.cols == other.cols)

    def __hash__(self):
        return hash((self.nrows, self.ncols,
                     tuple(tuple(sorted(c.items())) for c in self.cols)))

    def __repr__(self):
        return "IntMatrix(%dx%d, nnz=%d)" % (
            self.nrows, self.ncols, sum(len(c) for c in self.cols))

    def __add__(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in matrix sum")
        cols = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            for r, v in b.items():
                w = c.get(r, 0) + v
                if w:
                    c[r] = w
                else:
                    c.pop(r, None)
            cols.append(c)
        return IntMatrix(self.nrows, self.ncols, cols)

    def __neg__(self):
        return IntMatrix(self.nrows, self.ncols,
                         [{r: -v for r, v in c.items()} for c in self.cols])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        if k == 0:
            return IntMatrix.zeros(self.nrows, self.ncols)
        return IntMatrix(self.nrows, self.ncols,
                         [{r: k * v for r, v in c.items()} for c in self.cols])

    def __matmul__(self, other):
        # self @ other, i.e. apply other first
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        cols = []
        for bc in other.cols:
            acc = {}
            for k, v in bc.items():
                for r, w in self.cols[k].items():
                    x = acc.get(r, 0) + v * w
                    if x:
                        acc[r] = x
                    else:
                        del acc[r]
            cols.append(acc)
        return IntMatrix(self.nrows, other.ncols, cols)

    def transpose(self):
        cols = [{} for _ in range(self.nrows)]
        for r, c, v in self.entries():
            cols[r][c] = v
        return IntMatrix(self.ncols, self.nrows, cols)

    def kron(self, other):
        """Kronecker product; row/column index (i, j) -> i*other + j."""
        m = IntMatrix(self.nrows * other.nrows, self.ncols * other.ncols)
        cols = [dict() for _ in range(m.ncols)]
        for r1, c1, v1 in self.entries():
            for r2, c2, v2 in other.entries():
                cols[c1 * other.ncols + c2][r1 * other.nrows + r2] = v1 * v2
        return IntMatrix(m.nrows, m.ncols, cols)

    def apply(self, vec):
        """Apply to a sparse column vector {row: value}."""
        acc = {}
        for k, v in vec.items():
            for r, w in self.cols[k].items():
                x = acc.get(r, 0) + v * w
                if x:
                    acc[r] = x
                else:
                    del acc[r]
        return acc


# ---------------------------------------------------------------------------
# linear maps

class LinMap:
    """Integer matrix between two free modules (cod.rank x dom.rank)."""

    __slots__ = ("dom", "cod", "mat")

    def __init__(self, dom, cod, mat):
        if mat.nrows != cod.rank or mat.ncols != dom.rank:
            raise ValueError("matrix shape does not match dom/cod ranks")
        self.dom = dom
        self.cod = cod
        self.mat = mat

    @classmethod
    def identity(cls, mod):
        return cls(mod, mod, IntMatrix.identity(mod.rank))

    @classmethod
    def zero(cls, dom, cod):
        return cls(dom, cod, IntMatrix.zeros(cod.rank, dom.rank))

    @classmethod
    def from_entries(cls, dom, cod, entries):
        return cls(dom, cod, IntMatrix.from_entries(cod.rank, dom.rank, entries))

    @classmethod
    def from_tag_entries(cls, dom, cod, tag_entries):
        """Entries given as (cod_tag, dom_tag, value)."""
        ent = [(cod.index[rt], dom.index[ct], v) for rt, ct, v in tag_entries]
        return cls.from_entries(dom, cod, ent)

    def __matmul__(self, other):
        if other.cod != self.dom:
            raise ValueError("dom/cod mismatch in composition")
        return LinMap(other.dom, self.cod, self.mat @ other.mat)

    def __add__(self, other):
        if self.dom != other.dom or self.cod != other.cod:
            raise ValueError("dom/cod mismatch in sum")
        return LinMap(self.dom, self.cod, self.mat + other.mat)

    def __neg__(self):
        return LinMap(self.dom, self.cod, -self.mat)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return LinMap(self.dom, self.cod, self.mat.scale(k))

    def __eq__(self, other):
        return (isinstance(other, LinMap) and self.dom == other.dom
                and self.cod == other.cod and self.mat == other.mat)

    def __hash__(self):
        return hash((self.dom, self.cod, self.mat))

    def __repr__(self):
        return "LinMap(%d -> %d, nnz=%d)" % (
            self.dom.rank, self.cod.rank, sum(len(c) for c in self.mat.cols))

    def is_zero(self):
        return self.mat.is_zero()

    def is_identity(self):
        return self.dom == self.cod and self.mat == IntMatrix.identity(self.dom.rank)


def tensor(M, N):
    """Tensor product module; basis = pairs of tags in lexicographic
    index order of the factors."""
    return FreeMod(tuple((a, b) for a in M.basis for b in N.basis))


def tensor_map(f, g):
    return LinMap(tensor(f.dom, g.dom), tensor(f.cod, g.cod), f.mat.kron(g.mat))


def word_module(factors):
    """n-fold tensor word; basis tags are tuples of factor tags.

    The empty word is rank one on the empty tuple.
    """
    return FreeMod(tuple(itertools.product(*[m.basis for m in factors]))
                   if factors else ((),))


def finite_product(mods):
    """Direct sum with provenance tags; returns (module, projections,
    injections).  The empty product is the zero module."""
    basis = []
    for i, m in enumerate(mods):
        basis.extend(("+", i, t) for t in m.basis)
    prod = FreeMod(tuple(basis))
    projections = []
    injections = []
    for i, m in enumerate(mods):
        proj = LinMap.from_tag_entries(
            prod, m, [(t, ("+", i, t), 1) for t in m.basis])
        inj = LinMap.from_tag_entries(
            m, prod, [(("+", i, t), t, 1) for t in m.basis])
        projections.append(proj)
        injections.append(inj)
    return prod, projections, injections


# ---------------------------------------------------------------------------
# signed permutations and group actions

class SignedPerm:
    """Signed permutation of n basis vectors: i -> sign * image(i)."""

    __slots__ = ("images", "signs")

    def __init__(self, images, signs=None):
        self.images = tuple(images)
        n = len(self.images)
        if signs is None:
            signs = (1,) * n
        self.signs = tuple(signs)
        if sorted(self.images) != list(range(n)):
            raise ValueError("not a permutation")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +-1")

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    def __len__(self):
        return len(self.images)

    def __eq__(self, other):
        return (isinstance(other, SignedPerm)
                and self.images == other.images and self.signs == other.signs)

    def __hash__(self):
        return hash((self.images, self.signs))

    def __repr__(self):
        return "SignedPerm(%r, %r)" % (self.images, self.signs)

    def __mul__(self, other):
        """(self * other)(i) = self(other(i)); signs multiply."""
        images = tuple(self.images[other.images[i]] for i in range(len(self)))
        signs = tuple(self.signs[other.images[i]] * other.signs[i]
                      for i in range(len(self)))
        return SignedPerm(images, signs)

    def inverse(self):
        n = len(self)
        images = [0] * n
        signs = [1] * n
        for i in range(n):
            images[self.images[i]] = i
            signs[self.images[i]] = self.signs[i]
        return SignedPerm(images, signs)

    def is_identity(self):
        return self.images == tuple(range(len(self))) and all(s == 1 for s in self.signs)

    def to_matrix(self):
        return IntMatrix.from_entries(
            len(self), len(self),
            [(self.images[i], i, self.signs[i]) for i in range(len(self))])

    def to_linmap(self, dom, cod):
        if dom.rank != len(self) or cod.rank != len(self):
            raise ValueError("rank mismatch")
        return LinMap(dom, cod, self.to_matrix())


def signed_perm_from_matrix(mat):
    """Extract a SignedPerm from a matrix that is one; ValueError if not."""
    if mat.nrows != mat.ncols:
        raise ValueError("not square")
    n = mat.nrows
    images = [None] * n
    signs = [1] * n
    seen = set()
    for c in range(n):
        col = mat.cols[c]
        if len(col) != 1:
            raise ValueError("column %d is not monomial" % c)
        (r, v), = col.items()
        if v not in (1, -1) or r in seen:
            raise ValueError("not a signed permutation matrix")
        seen.add(r)
        images[c] = r
        signs[c] = v
    return SignedPerm(images, signs)


class SignedPermAction:
    """A finite group given by explicit elements with multiplication,
    represented by signed permutations of a basis.

    Elements are hashable keys; ``multiply`` composes keys and ``rep``
    maps keys to SignedPerms.  The full multiplication table is exposed
    lazily (only sensible for small groups).
    """

    __slots__ = ("rank", "elems", "rep", "identity", "gens", "_compose", "_mult")

    def __init__(self, rank, elems, rep, identity, gens=None, compose=None, mult=None):
        self.rank = rank
        self.elems = tuple(elems)
        self.rep = dict(rep)
        self.identity = identity
        self.gens = tuple(gens) if gens is not None else None
        if mult is not None:
            mult = dict(mult)
            compose = lambda a, b: mult[(a, b)]
        self._mult = mult
        self._compose = compose
        if identity not in self.rep:
            raise ValueError("identity element missing")

    @classmethod
    def trivial(cls, rank):
        e = "e"
        return cls(rank, (e,), {e: SignedPerm.identity(rank)}, e, mult={(e, e): e})

    @classmethod
    def from_signed_perms(cls, rank, perms):
        """Closure of a set of signed permutations; keys are the perms."""
        ident = SignedPerm.identity(rank)
        elems = {ident}
        frontier = [ident]
        gens = [p for p in perms if not p.is_identity()]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = g * a
                    if b not in elems:
                        elems.add(b)
                        nxt.append(b)
            frontier = nxt
            if len(elems) > 200000:
                raise ValueError("group closure too large")
        elems = sorted(elems, key=lambda p: (p.images, p.signs))
        rep = {a: a for a in elems}
        return cls(rank, elems, rep, ident, gens=gens or [ident],
                   compose=lambda a, b: a * b)

    def multiply(self, a, b):
        if self._compose is None:
            raise ValueError("no multiplication available")
        return self._compose(a, b)

    @property
    def mult(self):
        """Explicit multiplication table (materialized on first use)."""
        if self._mult is None:
            if len(self.elems) > 1000:
                raise ValueError("group too large to tabulate")
            self._mult = {(a, b): self.multiply(a, b)
                          for a in self.elems for b in self.elems}
        return self._mult

    def generators(self):
        """A generating set; the stored generators when available, else
        every non-identity element."""
        if self.gens:
            return list(self.gens)
        return [e for e in self.elems if e != self.identity] or [self.identity]

    def check(self):
        """Verify rep is a homomorphism and identity acts as identity."""
        if not self.rep[self.identity].is_identity():
            return False
        pairs = (((a, b) for a in self.elems for b in self.elems)
                 if len(self.elems) <= 200 else
                 ((g, b) for g in self.generators() for b in self.elems))
        for a, b in pairs:
            if self.rep[a] * self.rep[b] != self.rep[self.multiply(a, b)]:
                return False
        return True


# ---------------------------------------------------------------------------
# Hermite normal form, kernels, invariants

def _col_reduce(cols, nrows, track):
    """Column-reduce a list of sparse columns.  Returns (pivot list of
    (row, colidx) in processing order, transform columns if track,
    remaining active column indices).

    Mutates ``cols`` in place.  The transform starts as the identity and
    receives every column operation applied to ``cols``.  A row-to-column
    incidence index keeps the work proportional to the actual fill."""
    ncols = len(cols)
    u = [{i: 1} for i in range(ncols)] if track else None
    row_cols = {}
    for j, col in enumerate(cols):
        for r in col:
            row_cols.setdefault(r, set()).add(j)

    def axpy(j, k, q):
        # cols[j] += q * cols[k], keeping the index current
        cj, ck = cols[j], cols[k]
        for r, v in ck.items():
            w = cj.get(r, 0) + q * v
            if w:
                if r not in cj:
                    row_cols.setdefault(r, set()).add(j)
                cj[r] = w
            elif r in cj:
                del cj[r]
                row_cols[r].discard(j)
        if track:
            uj, uk = u[j], u[k]
            for r, v in uk.items():
                w = uj.get(r, 0) + q * v
                if w:
                    uj[r] = w
                else:
                    uj.pop(r, None)

    def negate(j):
        cols[j] = {r: -v for r, v in cols[j].items()}
        if track:
            u[j] = {r: -v for r, v in u[j].items()}

    active = set(range(ncols))
    pivots = []
    for r in range(nrows):
        if r not in row_cols:
            continue
        live = sorted(j for j in row_cols[r] if j in active)
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda j: (abs(cols[j][r]), j))
            j0 = live[0]
            a = cols[j0][r]
            for j in live[1:]:
                q = cols[j][r] // a
                if q:
                    axpy(j, j0, -q)
            live = [j for j in live if cols[j].get(r)]
        j0 = live[0]
        if cols[j0][r] < 0:
            negate(j0)
        pivots.append((r, j0))
        active.discard(j0)
    return pivots, u, sorted(active)


def _plain_axpy(cols, j, k, q):
    """cols[j] += q * cols[k] (no index bookkeeping)."""
    cj, ck = cols[j], cols[k]
    for r, v in ck.items():
        w = cj.get(r, 0) + q * v
        if w:
            cj[r] = w
        else:
            cj.pop(r, None)


def column_hermite(columns, nrows):
    """Canonical column-style Hermite normal form of the span of the given
    sparse columns.  Zero columns are dropped; pivots are positive with
    increasing pivot rows; entries left of a pivot are reduced into
    [0, pivot)."""
    cols = [dict(c) for c in columns]
    pivots, _, _ = _col_reduce(cols, nrows, track=False)
    pivots.sort()
    out = [cols[j] for _, j in pivots]
    # reduce earlier columns against later pivots
    for idx in range(len(out)):
        r, _ = pivots[idx]
        p = out[idx][r]
        for k in range(idx):
            v = out[k].get(r, 0)
            q = v // p
            if q:
                _plain_axpy(out, k, idx, -q)
    return out


def kernel_columns(mat):
    """Canonical basis (column HNF) for the integer kernel of mat."""
    cols = [dict(c) for c in mat.cols]
    _, u, active = _col_reduce(cols, mat.nrows, track=True)
    ker = [u[j] for j in sorted(active)]
    return column_hermite(ker, mat.ncols)


def invariant_factors(mat):
    """Nonzero invariant factors (Smith normal form diagonal) of mat."""
    # dense-ish working copy as dict of dicts keyed by (r, c)
    a = {}
    for r, c, v in mat.entries():
        a[(r, c)] = v
    factors = []
    rows = set(r for r, _ in a)
    cols = set(c for _, c in a)
    while a:
        (r0, c0) = min(a, key=lambda rc: (abs(a[rc]), rc))
        # clear row r0 and column c0 by Euclid steps
        changed = True
        while changed:
            changed = False
            piv = a.get((r0, c0))
            for (r, c) in [rc for rc in a if rc[1] == c0 and rc[0] != r0]:
                q = a[(r, c)] // piv
                for cc in cols:
                    v = a.get((r, cc), 0) - q * a.get((r0, cc), 0)
                    if v:
                        a[(r, cc)] = v
                    else:
                        a.pop((r, cc), None)
                if a.get((r, c0)):
                    # remainder nonzero: swap pivot rows
                    for cc in cols:
                        x, y = a.get((r0, cc), 0), a.get((r, cc), 0)
                        for key, val in (((r0, cc), y), ((r, cc), x)):
                            if val:
                                a[key] = val
                            else:
                                a.pop(key, None)
                    changed = True
                piv = a.get((r0, c0))
            for (r, c) in [rc for rc in a if rc[0] == r0 and rc[1] != c0]:
                q = a[(r, c)] // piv
                for rr in rows:
                    v = a.get((rr, c), 0) - q * a.get((rr, c0), 0)
                    if v:
                        a[(rr, c)] = v
                    else:
                        a.pop((rr, c), None)
                if a.get((r0, c)):
                    for rr in rows:
                        x, y = a.get((rr, c0), 0), a.get((rr, c), 0)
                        for key, val in (((rr, c0), y), ((rr, c), x)):
                            if val:
                                a[key] = val
                            else:
                                a.pop(key, None)
                    changed = True
                piv = a.get((r0, c0))
        factors.append(abs(a.pop((r0, c0))))
        a = {rc: v for rc, v in a.items() if rc[0] != r0 and rc[1] != c0}
    return sorted(factors)


def fixed_submodule(M, action):
    """Invariant submodule of a signed permutation action.

    Returns (sub, incl) where sub has anonymous tags ("inv", i) and incl
    is the inclusion into M with columns in canonical Hermite form.  The
    kernel of the stacked maps rep(g) - I over the action's generators.
    """
    return fixed_submodule_from_perms(
        M, [action.rep[g] for g in action.generators()])


def fixed_submodule_from_perms(M, perms):
    """Invariants of the group generated by signed permutations, without
    materializing the group (the kernel over generators suffices)."""
    n = M.rank
    gens = [g for g in perms if not g.is_identity()]
    if not gens or n == 0:
        sub = FreeMod(tuple(("inv", i) for i in range(n)))
        return sub, LinMap(sub, M, IntMatrix.identity(n))
    stacked_cols = [dict() for _ in range(n)]
    for blk, g in enumerate(gens):
        off = blk * n
        for i in range(n):
            j, s = g.images[i], g.signs[i]
            col = stacked_cols[i]
            col[off + j] = col.get(off + j, 0) + s
            col[off + i] = col.get(off + i, 0) - 1
            if not col[off + j]:
                del col[off + j]
            if col.get(off + i) == 0:
                del col[off + i]
    ker = kernel_columns(IntMatrix(len(gens) * n, n, stacked_cols))
    sub = FreeMod(tuple(("inv", i) for i in range(len(ker))))
    incl = LinMap(sub, M, IntMatrix(n, len(ker), ker))
    return sub, incl


def solve_columns(incl, target):
    """Solve incl @ X = target exactly over Z, where incl has columns in
    Hermite form (as produced by fixed_submodule / column_hermite).

    Returns the solution matrix or None when no integer solution exists.
    """
    pivots = []
    for j, col in enumerate(incl.cols):
        if not col:
            return None
        pivots.append((min(col), j))
    pivots.sort()
    out_cols = []
    for tcol in target.cols:
        w = dict(tcol)
        x = {}
        for r, j in pivots:
            v = w.get(r, 0)
            p = incl.cols[j][r]
            if v % p:
                return None
            q = v // p
            if q:
                x[j] = q
                for rr, vv in incl.cols[j].items():
                    nv = w.get(rr, 0) - q * vv
                    if nv:
                        w[rr] = nv
                    else:
                        w.pop(rr, None)
        if w:
            return None
        out_cols.append(x)
    return IntMatrix(incl.ncols, target.ncols, out_cols)

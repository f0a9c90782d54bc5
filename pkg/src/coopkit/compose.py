"""Composition products of symmetric sequences.

Two constructions are provided and kept independent so each can serve as
an oracle for the other:

* the tensor-word functor on chains, assigning to a chain the tensor
  product over its vertices of the sequences evaluated on incoming
  fibers, with its naturality maps; and its right Kan extension along
  the leaf functor, computed as a product over chain classes of the
  invariants under over-top automorphisms;

* a closed form for the two-fold product, as invariants of the symmetric
  group permuting ordered decompositions of the underlying set.

Parenthesization maps between nested and flat products are assembled
from the universal projections, never assumed to be isomorphisms.
"""

from __future__ import annotations

import itertools

from .wreath import (
    Chain, ChainIso, EMPTY_SET, FinSet, SetMap, canonical_chain_over_top,
    encode_chain, enumerate_fiber,
)
from .zmodule import (
    FreeMod, IntMatrix, LinMap, SignedPerm, ZERO_MOD,
    finite_product, fixed_submodule_from_perms, signed_perm_from_matrix,
    solve_columns, word_module,
)
from .symseq import coefficient_seq, evaluate, transport


class StructuralError(Exception):
    """A limit-cone constraint has no integer solution; the offending
    instance is carried along."""

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance


# ---------------------------------------------------------------------------
# tensor words over chains

def chain_vertices(chain):
    """Word factor positions: the root, then each vertex of levels
    1..n-1 in atom order.  Level n elements are leaves and carry no
    factor."""
    verts = [("r",)]
    for lvl in range(1, chain.length):
        for v in chain.levels[lvl - 1]:
            verts.append((lvl, v))
    return verts


def _vertex_fiber(chain, vert):
    if vert == ("r",):
        return chain.levels[0]
    lvl, v = vert
    return chain.maps[lvl - 1].fiber(v)


def _vertex_seq(seqs, vert):
    return seqs[0] if vert == ("r",) else seqs[vert[0]]


class TensorValue:
    """The tensor word of a list of sequences over a chain."""

    __slots__ = ("chain", "vertices", "factors", "value")

    def __init__(self, chain, vertices, factors, value):
        self.chain = chain
        self.vertices = vertices
        self.factors = factors
        self.value = value

    def __repr__(self):
        return "TensorValue(%s, rank=%d)" % (encode_chain(self.chain),
                                             self.value.rank)


def eval_tensor(seqs, chain):
    """Evaluate the word functor of ``seqs`` on a chain.  The factor
    order is levels bottom-up with atoms in order within a level."""
    if len(seqs) != chain.length:
        raise ValueError("need one sequence per chain level")
    verts = chain_vertices(chain)
    factors = [evaluate(_vertex_seq(seqs, v), _vertex_fiber(chain, v))
               for v in verts]
    return TensorValue(chain, verts, factors, word_module(factors))


def _monomial_tag_map(linmap):
    """For a monomial (signed permutation) map, dom tag -> (cod tag, sign)."""
    out = {}
    for j, t in enumerate(linmap.dom.basis):
        col = linmap.mat.cols[j]
        if len(col) != 1:
            raise ValueError("map is not monomial")
        (r, v), = col.items()
        out[t] = (linmap.cod.basis[r], v)
    return out


def word_transport(seqs, iso):
    """Naturality map of the word functor along a chain isomorphism:
    transport each factor and permute factors; signs multiply."""
    src = eval_tensor(seqs, iso.source)
    tgt = eval_tensor(seqs, iso.target)
    if src.value.rank == 0 or tgt.value.rank == 0:
        return LinMap.zero(src.value, tgt.value)
    n = iso.source.length
    vert_map = {}
    factor_maps = {}
    for vert in src.vertices:
        if vert == ("r",):
            tvert = ("r",)
            bij = iso.components[0]
        else:
            lvl, v = vert
            tvert = (lvl, iso.components[lvl - 1](v))
            fib = _vertex_fiber(iso.source, vert)
            bij = iso.components[lvl].restrict(fib)
            bij = SetMap(fib, _vertex_fiber(iso.target, tvert), bij.assignment)
        vert_map[vert] = tvert
        factor_maps[vert] = _monomial_tag_map(
            transport(_vertex_seq(seqs, vert), bij))
    tpos = {v: i for i, v in enumerate(tgt.vertices)}
    entries = []
    for j, word in enumerate(src.value.basis):
        out = [None] * len(tgt.vertices)
        sign = 1
        for k, vert in enumerate(src.vertices):
            t, s = factor_maps[vert][word[k]]
            out[tpos[vert_map[vert]]] = t
            sign *= s
        entries.append((tgt.value.index[tuple(out)], j, sign))
    return LinMap.from_entries(src.value, tgt.value, entries)


# ---------------------------------------------------------------------------
# support bounds for fiber enumeration

def derive_bounds(seqs, top_size):
    """Level-size caps 1..n-1 outside which every word vanishes: sizes
    grow at most by the factor supports going up, and levels below a
    sequence with zero 0-arity part cannot exceed the level above."""
    n = len(seqs)
    up = [0] * (n + 1)
    up[1] = seqs[0].max_support()
    for lvl in range(2, n):
        up[lvl] = up[lvl - 1] * seqs[lvl - 1].max_support()
    down = [None] * (n + 1)
    down[n] = top_size
    for lvl in range(n - 1, 0, -1):
        if seqs[lvl].value(0).rank == 0:
            down[lvl] = down[lvl + 1]
    bounds = []
    for lvl in range(1, n):
        b = up[lvl]
        if down[lvl] is not None:
            b = min(b, down[lvl])
        bounds.append(b)
    return bounds


def derive_fiber_bounds(seqs):
    """Caps on fiber sizes per level: a fiber above the support of the
    sequence at that level makes its factor, hence the word, vanish."""
    return [seqs[lvl].max_support() for lvl in range(1, len(seqs))]


# ---------------------------------------------------------------------------
# the right Kan extension along the leaf functor

class KanModule:
    """Value of an iterated composition product at a finite set: the
    product over chain classes of the invariant submodules of their
    tensor words, with the universal projections."""

    __slots__ = ("seqs", "base", "classes", "words", "invs", "incls",
                 "value", "projs", "injs", "_class_index", "_iota_cache")

    def __init__(self, seqs, base, bounds=None):
        self.seqs = tuple(seqs)
        self.base = base
        n = len(self.seqs)
        if bounds is None:
            bounds = derive_bounds(self.seqs, len(base))
        self.classes = enumerate_fiber(base, n, bounds,
                                       derive_fiber_bounds(self.seqs))
        self.words = []
        self.invs = []
        self.incls = []
        keep = []
        for fc in self.classes:
            tv = eval_tensor(self.seqs, fc.representative)
            if tv.value.rank == 0:
                continue
            perms = [signed_perm_from_matrix(word_transport(self.seqs, a).mat)
                     for a in fc.generators]
            inv, incl = fixed_submodule_from_perms(tv.value, perms)
            keep.append(fc)
            self.words.append(tv.value)
            self.invs.append(inv)
            self.incls.append(incl)
        self.classes = keep
        self.value, self.projs, self.injs = finite_product(self.invs)
        self._class_index = {fc.representative: i
                             for i, fc in enumerate(self.classes)}
        self._iota_cache = {}

    @property
    def rank(self):
        return self.value.rank

    def proj_word(self, i):
        """Projection onto the word of class i (inclusion of invariants
        composed with the product projection)."""
        return self.incls[i] @ self.projs[i]

    def iota(self, chain):
        """Universal cone component at an arbitrary chain over the base."""
        if chain in self._iota_cache:
            return self._iota_cache[chain]
        tv = eval_tensor(self.seqs, chain)
        if tv.value.rank == 0:
            out = LinMap.zero(self.value, tv.value)
        else:
            rep, wit = canonical_chain_over_top(chain)
            if rep not in self._class_index:
                raise KeyError("chain %s has a nonzero word outside the "
                               "enumerated classes" % encode_chain(chain))
            i = self._class_index[rep]
            out = word_transport(self.seqs, wit.inverse()) @ self.proj_word(i)
        self._iota_cache[chain] = out
        return out

    def induce(self, dom, class_maps):
        """The unique map dom -> value whose composites with all word
        projections are the given per-class maps; exact integer solve.

        Raises StructuralError naming the class when no integer solution
        exists (the constraint is not natural)."""
        total = LinMap.zero(dom, self.value)
        for i, fc in enumerate(self.classes):
            m = class_maps(i)
            if m.dom != dom or m.cod != self.words[i]:
                raise ValueError("class map %d has wrong dom/cod" % i)
            x = solve_columns(self.incls[i].mat, m.mat)
            if x is None:
                raise StructuralError(
                    "no integer solution against the invariants of class %s"
                    % encode_chain(fc.representative),
                    instance=encode_chain(fc.representative))
            total = total + (self.injs[i] @ LinMap(dom, self.invs[i], x))
        return total

    def action(self, sigma):
        """Value of the product on a bijection of the base set."""
        if sigma.dom != self.base or sigma.cod != self.base:
            raise ValueError("action needs a bijection of the base")
        n = len(self.seqs)

        def class_map(i):
            rep = self.classes[i].representative
            if n == 1:
                moved = rep
            else:
                last = rep.maps[-1].compose(sigma)
                moved = Chain(rep.levels, rep.maps[:-1] + (last,))
            psi = ChainIso(moved, rep,
                           [SetMap.identity(s) for s in rep.levels[:-1]]
                           + [sigma])
            return word_transport(self.seqs, psi) @ self.iota(moved)

        return self.induce(self.value, class_map)

    def action_gens(self):
        """Signed permutations for the adjacent transpositions of the
        sorted base atoms."""
        elems = self.base.elems
        gens = []
        for k in range(len(elems) - 1):
            asg = {a: a for a in elems}
            asg[elems[k]], asg[elems[k + 1]] = elems[k + 1], elems[k]
            sigma = SetMap(self.base, self.base, asg)
            gens.append(signed_perm_from_matrix(self.action(sigma).mat))
        return tuple(gens)

    def __repr__(self):
        return "KanModule(%s at %r, rank=%d)" % (
            "*".join(getattr(s, "name", "?") for s in self.seqs),
            self.base, self.rank)


def kan_extension(seqs, base, bounds=None):
    return KanModule(seqs, base, bounds)


def compose_with_coefficient(seqs, coeff_mod, name="coeff"):
    """Kan extension over leafless chains: the value of
    A_1 o ... o A_m o a, a plain module.  Implemented as the ordinary
    extension at the empty base with the coefficient concentrated in
    arity zero."""
    return KanModule(tuple(seqs) + (coefficient_seq(coeff_mod, name=name),),
                     EMPTY_SET)


# ---------------------------------------------------------------------------
# a lazily materialized composition product as a symmetric sequence

class ComposedSeq:
    """Iterated composition product exposed through the symmetric-sequence
    interface (value / gens / perm_signed), with arities computed on
    demand so that no global truncation is introduced."""

    __slots__ = ("children", "name", "_kans", "_gens", "_perm_cache")

    def __init__(self, children, name=None):
        self.children = tuple(children)
        self.name = name or "(%s)" % "o".join(
            getattr(c, "name", "?") for c in children)
        self._kans = {}
        self._gens = {}
        self._perm_cache = {}

    def kan_at(self, n):
        if n not in self._kans:
            self._kans[n] = KanModule(self.children, FinSet.standard(n))
        return self._kans[n]

    def max_support(self):
        prod = 1
        for c in self.children:
            prod *= c.max_support()
        return prod

    def value(self, n):
        if n < 0 or n > self.max_support():
            return ZERO_MOD
        return self.kan_at(n).value

    def gens(self, n):
        if n not in self._gens:
            if n < 0 or n > self.max_support():
                self._gens[n] = tuple(SignedPerm.identity(0)
                                      for _ in range(max(n - 1, 0)))
            else:
                self._gens[n] = self.kan_at(n).action_gens()
        return self._gens[n]

    def perm_signed(self, n, images):
        images = tuple(images)
        key = (n, images)
        if key in self._perm_cache:
            return self._perm_cache[key]
        acc = SignedPerm.identity(self.value(n).rank)
        cur = list(images)
        gens = self.gens(n)
        while True:
            i = next((i for i in range(len(cur) - 1) if cur[i] > cur[i + 1]), None)
            if i is None:
                break
            cur[i], cur[i + 1] = cur[i + 1], cur[i]
            acc = gens[i] * acc
        self._perm_cache[key] = acc
        return acc

    def __repr__(self):
        return "ComposedSeq(%s)" % self.name


def iota_decorated(seqlike, children, chain):
    """Cone component of a composed sequence in decorated form: a map
    from evaluate(seqlike, top(chain)) to the word of its children over
    the chain."""
    top = chain.top
    m = len(top)
    dom = evaluate(seqlike, top)
    tv = eval_tensor(children, chain)
    if tv.value.rank == 0:
        return LinMap.zero(dom, tv.value)
    kan = seqlike.kan_at(m)
    std = FinSet.standard(m)
    order = SetMap(std, top, dict(zip(std.elems, top.elems)))
    if chain.length == 1:
        moved = Chain((std,))
    else:
        moved = Chain(chain.levels[:-1] + (std,),
                      chain.maps[:-1] + (chain.maps[-1].compose(order),))
    psi = ChainIso(moved, chain,
                   [SetMap.identity(s) for s in chain.levels[:-1]] + [order])
    # positional identification between the decorated copy and the
    # skeletal kan value
    dec_to_skel = LinMap(dom, kan.value, IntMatrix.identity(dom.rank))
    return word_transport(children, psi) @ kan.iota(moved) @ dec_to_skel


# ---------------------------------------------------------------------------
# closed form for the two-fold product

class ClosedFormBlock:
    __slots__ = ("k", "decomps", "words", "prod", "inv", "incl", "projs")

    def __init__(self, k, decomps, words, prod, inv, incl, projs):
        self.k = k
        self.decomps = decomps
        self.words = words
        self.prod = prod
        self.inv = inv
        self.incl = incl
        self.projs = projs


class ClosedFormResult:
    __slots__ = ("blocks", "value")

    def __init__(self, blocks):
        self.blocks = blocks
        self.value, _, _ = finite_product([b.inv for b in blocks])

    @property
    def rank(self):
        return self.value.rank


def closed_form_compose(A, B, n):
    """Direct expansion of the two-fold composition product at arity n:
    for each outer arity k, invariants of the symmetric group acting on
    the product over ordered decompositions of {1..n} into k disjoint
    (possibly empty) labeled parts of A(k) tensor B(parts)."""
    base = FinSet.standard(n)
    blocks = []
    for k in range(0, A.max_support() + 1):
        if A.value(k).rank == 0:
            continue
        outer = FinSet.standard(k)
        decomps = []
        if k == 0:
            if n == 0:
                decomps.append(())
        else:
            for img in itertools.product(range(k), repeat=n):
                fibers = [[] for _ in range(k)]
                for a, j in zip(base.elems, img):
                    fibers[j].append(a)
                decomps.append(tuple(FinSet(f) for f in fibers))
        if not decomps:
            continue
        words = [word_module([evaluate(A, outer)]
                             + [evaluate(B, r) for r in d])
                 for d in decomps]
        if all(w.rank == 0 for w in words):
            continue
        prod, projs, injs = finite_product(words)
        dindex = {d: i for i, d in enumerate(decomps)}
        gens = []
        for t in range(k - 1):
            images_perm = list(range(k))
            images_perm[t], images_perm[t + 1] = t + 1, t
            a_perm = A.perm_signed(k, tuple(images_perm))
            entries = []
            for i, d in enumerate(decomps):
                moved = list(d)
                moved[t], moved[t + 1] = moved[t + 1], moved[t]
                j = dindex[tuple(moved)]
                wi, wj = words[i], words[j]
                for idx, tag in enumerate(wi.basis):
                    a_tag = tag[0]
                    decor, a_base = a_tag[1], a_tag[2]
                    ai = evaluate(A, outer).index[a_tag]
                    col = a_perm.to_matrix().cols[ai]
                    (ar, s), = col.items()
                    new_a = evaluate(A, outer).basis[ar]
                    rest = list(tag[1:])
                    rest[t], rest[t + 1] = rest[t + 1], rest[t]
                    new_tag = (new_a,) + tuple(rest)
                    entries.append((prod.index[("+", j, new_tag)],
                                    prod.index[("+", i, tag)], s))
            gens.append(signed_perm_from_matrix(
                IntMatrix.from_entries(prod.rank, prod.rank, entries)))
        inv, incl = fixed_submodule_from_perms(prod, gens)
        blocks.append(ClosedFormBlock(k, decomps, words, prod, inv, incl, projs))
    return ClosedFormResult(blocks)


def as_word(f):
    """View a map into a module as a map into the one-factor word."""
    cod = word_module([f.cod])
    return LinMap(f.dom, cod, f.mat)


def lift_first_slot(src_children, tgt_children, slot_map_at, base):
    """Induced map between composition products at the base whose child
    lists differ only in the first slot; ``slot_map_at(T)`` maps the old
    first-slot value at T to the new one.  Returns (map, src, tgt)."""
    src = KanModule(src_children, base)
    tgt = KanModule(tgt_children, base)

    def class_map(ci):
        rep = tgt.classes[ci].representative
        tv_src = eval_tensor(src_children, rep)
        tv_tgt = eval_tensor(tgt_children, rep)
        pieces = []
        placements = []
        for k, vert in enumerate(tv_src.vertices):
            if vert == ("r",):
                pieces.append(as_word(slot_map_at(rep.levels[0])))
            else:
                pieces.append(as_word(LinMap.identity(tv_src.factors[k])))
            placements.append([k])
        inner = assemble_tensor_map(tv_src.value, pieces, placements,
                                    tv_tgt.value)
        return inner @ src.iota(rep)

    return tgt.induce(src.value, class_map), src, tgt


def lift_fiber_slots(src_children, tgt_children, slot_map_at, base):
    """As lift_first_slot but replacing the level-1 (fiber) factors and
    leaving the root alone."""
    src = KanModule(src_children, base)
    tgt = KanModule(tgt_children, base)

    def class_map(ci):
        rep = tgt.classes[ci].representative
        tv_src = eval_tensor(src_children, rep)
        tv_tgt = eval_tensor(tgt_children, rep)
        pieces = []
        placements = []
        for k, vert in enumerate(tv_src.vertices):
            if vert == ("r",):
                pieces.append(as_word(LinMap.identity(tv_src.factors[k])))
            else:
                lvl, v = vert
                pieces.append(as_word(slot_map_at(rep.maps[lvl - 1].fiber(v))))
            placements.append([k])
        inner = assemble_tensor_map(tv_src.value, pieces, placements,
                                    tv_tgt.value)
        return inner @ src.iota(rep)

    return tgt.induce(src.value, class_map), src, tgt



# ---------------------------------------------------------------------------
# parenthesizations

class Paren:
    """A parenthesization of a list of sequences: a tree whose leaves
    hold the sequences in order and whose nodes (of any arity >= 2) are
    flat composition products of their children, materialized lazily.

    Leaves may themselves hold composed sequences, which is how maps
    between partial parenthesizations are expressed."""

    __slots__ = ("children", "seq", "width", "seqlike")

    def __init__(self, children=None, seq=None):
        self.children = tuple(children) if children else ()
        self.seq = seq
        if seq is not None:
            self.width = 1
            self.seqlike = seq
        else:
            if len(self.children) < 2:
                raise ValueError("a node needs at least two children")
            self.width = sum(c.width for c in self.children)
            self.seqlike = ComposedSeq([c.seqlike for c in self.children])

    @classmethod
    def leaf(cls, seq):
        return cls(seq=seq)

    @classmethod
    def node(cls, *children):
        return cls(children=children)

    def flat(self):
        if self.seq is not None:
            return [self.seq]
        return [s for c in self.children for s in c.flat()]

    def is_leaf(self):
        return self.seq is not None


def _collapse_groups(chain, widths):
    """Split an n-chain into consecutive level groups: the collapsed
    m-chain through the group tops, the bottom-group subchain, and the
    restricted subchains over each collapsed vertex."""
    cum = [0]
    for w in widths:
        cum.append(cum[-1] + w)
    tops = [chain.levels[cum[j] - 1] for j in range(1, len(widths) + 1)]
    tmaps = []
    for j in range(1, len(widths)):
        comp = SetMap.identity(chain.levels[cum[j + 1] - 1])
        for i in range(cum[j + 1] - 2, cum[j] - 2, -1):
            comp = chain.maps[i].compose(comp)
        tmaps.append(comp)
    collapsed = Chain(tuple(tops), tuple(tmaps))
    bottom = Chain(chain.levels[:cum[1]], chain.maps[:cum[1] - 1])
    fibers = {}
    for j in range(1, len(widths)):
        start = cum[j]  # group j+1 occupies levels start+1 .. cum[j+1]
        for v in tops[j - 1]:
            sets = []
            maps = []
            comp = chain.maps[start - 1]
            u_prev = comp.fiber(v)
            sets.append(u_prev)
            for i in range(start, cum[j + 1] - 1):
                f = chain.maps[i]
                u_next = FinSet(x for x in chain.levels[i + 1]
                                if f(x) in u_prev)
                maps.append(SetMap(u_next, u_prev,
                                   {x: f(x) for x in u_next}))
                sets.append(u_next)
                u_prev = u_next
            fibers[(j, v)] = Chain(tuple(sets), tuple(maps))
    return collapsed, bottom, fibers, cum


def paren_proj(paren, chain):
    """Projection from the parenthesized value at the top of the chain to
    the flat tensor word over the chain, assembled recursively through
    the universal cone components."""
    seqs = paren.flat()
    if len(seqs) != chain.length:
        raise ValueError("shape width %d does not match chain length %d"
                         % (paren.width, chain.length))
    top = chain.top
    dom = evaluate(paren.seqlike, top)
    tv = eval_tensor(seqs, chain)
    if dom.rank == 0 or tv.value.rank == 0:
        return LinMap.zero(dom, tv.value)
    if paren.is_leaf():
        # single factor word: retag
        return LinMap.from_entries(dom, tv.value,
                                   [(i, i, 1) for i in range(dom.rank)])
    widths = [c.width for c in paren.children]
    collapsed, bottom, fibers, cum = _collapse_groups(chain, widths)
    children = [c.seqlike for c in paren.children]
    step1 = iota_decorated(paren.seqlike, children, collapsed)
    outer_word = eval_tensor(children, collapsed)
    if step1.cod.rank == 0:
        return LinMap.zero(dom, tv.value)
    flat_pos = {v: i for i, v in enumerate(tv.vertices)}
    piece_maps = []
    placements = []
    for vert in outer_word.vertices:
        if vert == ("r",):
            sub = bottom
            child = paren.children[0]
            offset = 0
        else:
            j, v = vert
            sub = fibers[(j, v)]
            child = paren.children[j]
            offset = cum[j]
        piece_maps.append(paren_proj(child, sub))
        sub_tv = eval_tensor(child.flat(), sub)
        place = []
        for sv in sub_tv.vertices:
            if sv == ("r",):
                place.append(flat_pos[("r",)] if vert == ("r",)
                             else flat_pos[(offset, vert[1])])
            else:
                lvl, w = sv
                place.append(flat_pos[(offset + lvl, w)])
        placements.append(place)
    mid = assemble_tensor_map(outer_word.value, piece_maps, placements,
                              tv.value)
    return mid @ step1


def assemble_tensor_map(dom_word, piece_maps, placements, cod_word):
    """Tensor a list of maps whose codomains are word modules into a map
    of words.  dom_word tags are tuples aligned with piece_maps; piece i
    sends its factor to a word whose components land at cod positions
    placements[i]."""
    if dom_word.rank == 0 or cod_word.rank == 0:
        return LinMap.zero(dom_word, cod_word)
    width = len(next(iter(cod_word.basis)))
    entries = []
    for j, tag in enumerate(dom_word.basis):
        cols = []
        for i, pm in enumerate(piece_maps):
            ti = tag[i]
            col = pm.mat.cols[pm.dom.index[ti]]
            cols.append([(pm.cod.basis[r], v) for r, v in col.items()])
        for combo in itertools.product(*cols):
            out = [None] * width
            coef = 1
            ok = True
            for i, (ctag, v) in enumerate(combo):
                coef *= v
                for pos, comp in zip(placements[i], ctag):
                    out[pos] = comp
            key = tuple(out)
            if key not in cod_word.index:
                raise ValueError("assembled tag missing from codomain word")
            entries.append((cod_word.index[key], j, coef))
    return LinMap.from_entries(dom_word, cod_word, entries)


def parenthesize(paren, base, flat_kan=None):
    """The canonical map from the parenthesized product to the flat
    product at the given base set."""
    seqs = paren.flat()
    if flat_kan is None:
        flat_kan = KanModule(seqs, base)
    dom = evaluate(paren.seqlike, base)
    return flat_kan.induce(
        dom, lambda i: paren_proj(paren, flat_kan.classes[i].representative))


def _reindex(dom, cod):
    if dom.rank != cod.rank:
        raise ValueError("rank mismatch in reindex (%d vs %d)"
                         % (dom.rank, cod.rank))
    return LinMap(dom, cod, IntMatrix.identity(dom.rank))


def pentagon_routes(a, b, c, d, base):
    """The associativity diagrams for parenthesization maps of four
    sequences: all routes from (((AB)C)D) and from ((AB)(CD)) into the
    flat four-fold product, normalized to common ends.

    Returns two lists of (name, map); each list must be constant for the
    diagrams to commute."""
    p_full_l = Paren.node(
        Paren.node(Paren.node(Paren.leaf(a), Paren.leaf(b)), Paren.leaf(c)),
        Paren.leaf(d))
    xc = p_full_l.children[0].seqlike            # (AB)C as an object
    x_ab = p_full_l.children[0].children[0].seqlike  # AB as an object
    flat4 = KanModule([a, b, c, d], base)
    dom_l = evaluate(p_full_l.seqlike, base)

    # direct map
    routes_l = [("direct", parenthesize(p_full_l, base, flat4))]

    # upper: paren inside the first slot, then flatten ((ABC) D)
    abc3 = ComposedSeq([a, b, c], name="(ABC)")
    p_inner3 = Paren.node(Paren.node(Paren.leaf(a), Paren.leaf(b)),
                          Paren.leaf(c))

    def par3_at(t):
        k3 = KanModule([a, b, c], t)
        m = parenthesize(p_inner3, t, k3)
        return _reindex(k3.value, evaluate(abc3, t)) \
            @ m @ _reindex(evaluate(xc, t), m.dom)

    lift1, src1, tgt1 = lift_first_slot([xc, d], [abc3, d], par3_at, base)
    p_top4 = Paren.node(
        Paren.node(Paren.leaf(a), Paren.leaf(b), Paren.leaf(c)),
        Paren.leaf(d))
    par_top = parenthesize(p_top4, base, flat4)
    routes_l.append(("via (ABC)D",
                     par_top @ _reindex(tgt1.value, par_top.dom)
                     @ lift1 @ _reindex(dom_l, src1.value)))

    # lower: flatten the outer nesting first ((AB) C D)
    p_mid = Paren.node(Paren.node(Paren.leaf(x_ab), Paren.leaf(c)),
                       Paren.leaf(d))
    kan_xcd = KanModule([x_ab, c, d], base)
    arrow1 = parenthesize(p_mid, base, kan_xcd)
    p_bot4 = Paren.node(Paren.node(Paren.leaf(a), Paren.leaf(b)),
                        Paren.leaf(c), Paren.leaf(d))
    par_bot = parenthesize(p_bot4, base, flat4)
    routes_l.append(("via (AB)CD",
                     par_bot @ _reindex(kan_xcd.value, par_bot.dom)
                     @ arrow1 @ _reindex(dom_l, arrow1.dom)))

    # the second diagram: (AB)(CD)
    cd = ComposedSeq([c, d], name="(CD)")
    p_full_m = Paren.node(Paren.node(Paren.leaf(a), Paren.leaf(b)),
                          Paren.node(Paren.leaf(c), Paren.leaf(d)))
    dom_m = evaluate(p_full_m.seqlike, base)
    routes_m = [("direct", parenthesize(p_full_m, base, flat4))]

    p_up = Paren.node(Paren.leaf(x_ab),
                      Paren.node(Paren.leaf(c), Paren.leaf(d)))
    kan_xcd2 = KanModule([x_ab, c, d], base)
    up1 = parenthesize(p_up, base, kan_xcd2)
    routes_m.append(("via (AB)CD",
                     par_bot @ _reindex(kan_xcd2.value, par_bot.dom)
                     @ up1 @ _reindex(dom_m, up1.dom)))

    p_dn = Paren.node(Paren.node(Paren.leaf(a), Paren.leaf(b)),
                      Paren.leaf(cd))
    kan_aby = KanModule([a, b, cd], base)
    dn1 = parenthesize(p_dn, base, kan_aby)
    p_dn4 = Paren.node(Paren.leaf(a), Paren.leaf(b),
                       Paren.node(Paren.leaf(c), Paren.leaf(d)))
    par_dn4 = parenthesize(p_dn4, base, flat4)
    routes_m.append(("via AB(CD)",
                     par_dn4 @ _reindex(kan_aby.value, par_dn4.dom)
                     @ dn1 @ _reindex(dom_m, dn1.dom)))
    return routes_l, routes_m

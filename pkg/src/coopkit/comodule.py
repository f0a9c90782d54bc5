"""Comodules and coalgebras over a cooperad.

A left comodule is a symmetric sequence with a coaction that splits off
one cooperad factor on the left; a coalgebra is the same structure
concentrated in zero arity, carried by the leafless chains, and the two
share all code paths here.  The iterated coactions are built as coface
maps between the corresponding Kan extensions and checked for path
independence.
"""

from __future__ import annotations

import itertools

from .wreath import (
    Chain, ChainIso, EMPTY_SET, FinSet, SetMap, canonical_chain,
    encode_chain, face,
)
from .zmodule import IntMatrix, LinMap, UNIT_MOD, word_module
from .symseq import coefficient_seq, evaluate, transport
from .compose import KanModule, StructuralError, eval_tensor, word_transport
from .cooperad import Report, _diff_witness, as_word, reindex, tilde_face_map


class Comodule:
    """Symmetric sequence M with a coaction M(S) -> O(T) (x) M(fibers)
    per 2-chain, stored on canonical chains and transported."""

    def __init__(self, coop, seq, rule=None, table=None, name="M"):
        self.coop = coop
        self.seq = seq
        self.name = name
        self.rule = rule
        self.table = dict(table) if table else {}

    def coaction(self, chain):
        if chain.length != 2:
            raise ValueError("coactions live on 2-chains")
        src = evaluate(self.seq, chain.top)
        tv = eval_tensor([self.coop.seq, self.seq], chain)
        if src.rank == 0 or tv.value.rank == 0:
            return LinMap.zero(src, tv.value)
        canon, wit = canonical_chain(chain)
        if canon not in self.table:
            if self.rule is None:
                raise KeyError("missing coaction entry for %s"
                               % encode_chain(canon))
            self.table[canon] = self.rule(canon)
        entry = self.table[canon]
        back = word_transport([self.coop.seq, self.seq], wit.inverse())
        return back @ entry @ transport(self.seq, wit.top)


class CoalgebraObj:
    """Coalgebra over a cooperad: a module c with maps
    c -> O(T) (x) c^{(x)|T|} for the leafless 2-chains (T <- empty),
    stored at the standard sets and transported."""

    def __init__(self, coop, carrier, table, name="c"):
        self.coop = coop
        self.carrier = carrier
        self.coeff = coefficient_seq(carrier, name=name)
        self.name = name
        self.table = {}
        for k, entry in table.items():
            std = _bar_two_chain(FinSet.standard(k))
            src = evaluate(self.coeff, EMPTY_SET)
            tv = eval_tensor([coop.seq, self.coeff], std)
            if entry.dom != src or entry.cod != tv.value:
                raise ValueError("coaction entry %d has wrong dom/cod" % k)
            self.table[k] = entry

    def coaction(self, chain):
        """Component at an arbitrary leafless 2-chain (T <- empty)."""
        if chain.length != 2 or len(chain.top) != 0:
            raise ValueError("coalgebra coactions live on leafless 2-chains")
        src = evaluate(self.coeff, EMPTY_SET)
        tv = eval_tensor([self.coop.seq, self.coeff], chain)
        if tv.value.rank == 0:
            return LinMap.zero(src, tv.value)
        t = chain.levels[0]
        k = len(t)
        if k not in self.table:
            return LinMap.zero(src, tv.value)
        std = _bar_two_chain(FinSet.standard(k))
        order = SetMap(FinSet.standard(k), t,
                       dict(zip(FinSet.standard(k).elems, t.elems)))
        psi = ChainIso(std, chain, (order, SetMap(EMPTY_SET, EMPTY_SET, {})))
        return word_transport([self.coop.seq, self.coeff], psi) @ self.table[k]


def _bar_two_chain(t):
    return Chain((t, EMPTY_SET), (SetMap(EMPTY_SET, t, {}),))


class CoalgebraTower:
    """Iterated coactions c -> O^{o(k-1)} o c as Kan modules over the
    leafless chains, with coface maps."""

    def __init__(self, coalg):
        self.coalg = coalg
        self._kans = {}
        self._cofaces = {}

    def seqs(self, k):
        return [self.coalg.coop.seq] * (k - 1) + [self.coalg.coeff]

    def kan(self, k):
        if k not in self._kans:
            self._kans[k] = KanModule(self.seqs(k), EMPTY_SET)
        return self._kans[k]

    def coface(self, k, i):
        """V_{k-1} -> V_k splitting at position i (the coaction when
        i = k-1, cocomposition below)."""
        if not 1 <= i <= k - 1:
            raise ValueError("coface index out of range")
        key = (k, i)
        if key not in self._cofaces:
            src = self.kan(k - 1)
            tgt = self.kan(k)
            splitters = {j: self.coalg.coop.delta for j in range(1, k - 1)}
            splitters[k - 1] = self.coalg.coaction

            def class_map(ci):
                rep = tgt.classes[ci].representative
                return (tilde_face_map(self.seqs(k), splitters, i, rep)
                        @ src.iota(face(rep, i)))

            self._cofaces[key] = tgt.induce(src.value, class_map)
        return self._cofaces[key]


def coalgebra_delta_n(coalg, n):
    """The unique iterated coaction c -> O^{o(n-1)} o c, computed along
    every chain of cofaces; raises StructuralError when two chains of
    cofaces disagree (path dependence)."""
    tower = CoalgebraTower(coalg)
    index_ranges = [range(1, k) for k in range(2, n + 1)]
    first = None
    first_path = None
    for choice in itertools.product(*index_ranges):
        mat = None
        for step, i in enumerate(choice):
            f = tower.coface(step + 2, i)
            mat = f if mat is None else f @ mat
        if mat is None:
            mat = LinMap.identity(tower.kan(1).value)
        if first is None:
            first, first_path = mat, choice
        elif mat != first:
            raise StructuralError(
                "iterated coaction depends on the path: %r vs %r"
                % (first_path, choice),
                instance={"paths": [list(first_path), list(choice)]})
    return first, tower


class ComoduleTower:
    """Iterated coactions M -> O^{o(k-1)} o M at a fixed base set."""

    def __init__(self, comod, base):
        self.comod = comod
        self.base = base
        self._kans = {}
        self._cofaces = {}

    def seqs(self, k):
        return [self.comod.coop.seq] * (k - 1) + [self.comod.seq]

    def kan(self, k):
        if k not in self._kans:
            self._kans[k] = KanModule(self.seqs(k), self.base)
        return self._kans[k]

    def coface(self, k, i):
        if not 1 <= i <= k - 1:
            raise ValueError("coface index out of range")
        key = (k, i)
        if key not in self._cofaces:
            src = self.kan(k - 1)
            tgt = self.kan(k)
            splitters = {j: self.comod.coop.delta for j in range(1, k - 1)}
            splitters[k - 1] = self.comod.coaction

            def class_map(ci):
                rep = tgt.classes[ci].representative
                return (tilde_face_map(self.seqs(k), splitters, i, rep)
                        @ src.iota(face(rep, i)))

            self._cofaces[key] = tgt.induce(src.value, class_map)
        return self._cofaces[key]


def comodule_delta_n(comod, n, base):
    """Path-independent iterated coaction of a comodule at a base set."""
    tower = ComoduleTower(comod, base)
    index_ranges = [range(1, k) for k in range(2, n + 1)]
    first = None
    first_path = None
    for choice in itertools.product(*index_ranges):
        mat = None
        for step, i in enumerate(choice):
            f = tower.coface(step + 2, i)
            mat = f if mat is None else f @ mat
        if mat is None:
            mat = LinMap.identity(tower.kan(1).value)
        if first is None:
            first, first_path = mat, choice
        elif mat != first:
            raise StructuralError(
                "iterated coaction depends on the path: %r vs %r"
                % (first_path, choice),
                instance={"paths": [list(first_path), list(choice)]})
    return first, tower


# ---------------------------------------------------------------------------
# verification

def verify_coalgebra(coalg, max_set, report_name=None):
    """Coassociativity of the coaction over leafless 3-chains, the counit
    triangle, and equivariance of the stored components."""
    rep = Report(report_name or ("verify_coalgebra(%s)" % coalg.name))
    coop = coalg.coop
    coeff = coalg.coeff
    carrier_dom = evaluate(coeff, EMPTY_SET)

    # counit triangle: (counit (x) id) . coaction at a point = identity
    point = FinSet.standard(1)
    c1 = _bar_two_chain(point)
    act = coalg.coaction(c1)
    tv = eval_tensor([coop.seq, coeff], c1)
    collapse = None
    if tv.value.rank:
        pieces = [coop.counit_piece(point),
                  as_word(LinMap.identity(tv.factors[1]))]
        collapse = _assemble(tv.value, pieces, [[], [0]],
                             word_module([tv.factors[1]]))
        lhs = reindex(collapse.cod, carrier_dom) @ collapse @ act
        ok = lhs.mat == IntMatrix.identity(carrier_dom.rank)
        rep.add("counit-triangle", "|T|=1", ok,
                None if ok else _diff_witness(lhs.mat,
                                              IntMatrix.identity(carrier_dom.rank)))
    else:
        rep.add("counit-triangle", "|T|=1", carrier_dom.rank == 0)

    # coassociativity over leafless 3-chains (S1 <- S2 <- empty)
    maxb = coop.seq.max_support()
    for m in range(0, max_set + 1):
        s2 = FinSet.standard(m)
        for k in range(0 if m == 0 else 1, min(maxb, max_set + maxb) + 1):
            s1 = FinSet.standard(k)
            if m == 0:
                asgs = [{}]
            else:
                asgs = [dict(zip(s2.elems, img))
                        for img in itertools.product(s1.elems, repeat=m)]
            for asg in asgs:
                c = Chain((s1, s2, EMPTY_SET),
                          (SetMap(s2, s1, asg), SetMap(EMPTY_SET, s2, {})))
                tgt_seqs = [coop.seq, coop.seq, coeff]
                tv3 = eval_tensor(tgt_seqs, c)
                if tv3.value.rank == 0:
                    continue
                spl = {1: coop.delta, 2: coalg.coaction}
                lhs = tilde_face_map(tgt_seqs, spl, 1, c) \
                    @ coalg.coaction(face(c, 1))
                rhs = tilde_face_map(tgt_seqs, spl, 2, c) \
                    @ coalg.coaction(face(c, 2))
                ok = lhs == rhs
                rep.add("coassociativity", encode_chain(c), ok,
                        None if ok else _diff_witness(lhs.mat, rhs.mat))

    # equivariance of the stored component under relabeling
    for k in sorted(coalg.table):
        std = _bar_two_chain(FinSet.standard(k))
        for t in range(k - 1):
            elems = std.levels[0].elems
            asg = {a: a for a in elems}
            asg[elems[t]], asg[elems[t + 1]] = elems[t + 1], elems[t]
            sigma = SetMap(std.levels[0], std.levels[0], asg)
            psi = ChainIso(std, std, (sigma, SetMap(EMPTY_SET, EMPTY_SET, {})))
            lhs = word_transport([coop.seq, coeff], psi) @ coalg.table[k]
            ok = lhs == coalg.table[k]
            rep.add("equivariance", "k=%d swap=%d" % (k, t + 1), ok,
                    None if ok else _diff_witness(lhs.mat, coalg.table[k].mat))
    return rep


def verify_comodule(comod, max_set, report_name=None):
    """Comodule compatibility diagrams at bounded sizes."""
    rep = Report(report_name or ("verify_comodule(%s)" % comod.name))
    coop = comod.coop

    # codegeneracy triangle at each base: collapse below, counit
    for m in range(1, max_set + 1):
        s = FinSet.standard(m)
        src = evaluate(comod.seq, s)
        if src.rank == 0:
            continue
        point = FinSet.standard(1)
        c = Chain((point, s), (SetMap(s, point,
                                      {a: point.elems[0] for a in s}),))
        tv = eval_tensor([coop.seq, comod.seq], c)
        pieces = [coop.counit_piece(point),
                  as_word(LinMap.identity(tv.factors[1]))]
        collapse = _assemble(tv.value, pieces, [[], [0]],
                             word_module([tv.factors[1]]))
        lhs = reindex(collapse.cod, src) @ collapse @ comod.coaction(c)
        ok = lhs.mat == IntMatrix.identity(src.rank)
        rep.add("counit-triangle", "|S|=%d" % m, ok,
                None if ok else _diff_witness(lhs.mat,
                                              IntMatrix.identity(src.rank)))

    # coassociativity over 3-chains with bounded top
    from .compose import derive_bounds
    from .wreath import enumerate_fiber
    for m in range(0, max_set + 1):
        s = FinSet.standard(m)
        seqs3 = [coop.seq, coop.seq, comod.seq]
        for fc in enumerate_fiber(s, 3, derive_bounds(seqs3, m)):
            c = fc.representative
            tv3 = eval_tensor(seqs3, c)
            if tv3.value.rank == 0:
                continue
            spl = {1: coop.delta, 2: comod.coaction}
            lhs = tilde_face_map(seqs3, spl, 1, c) @ comod.coaction(face(c, 1))
            rhs = tilde_face_map(seqs3, spl, 2, c) @ comod.coaction(face(c, 2))
            ok = lhs == rhs
            rep.add("coassociativity", encode_chain(c), ok,
                    None if ok else _diff_witness(lhs.mat, rhs.mat))
    return rep


def _assemble(dom_word, pieces, placements, cod_word):
    from .compose import assemble_tensor_map
    return assemble_tensor_map(dom_word, pieces, placements, cod_word)


# ---------------------------------------------------------------------------
# a concrete example: the square-zero rank-two coalgebra over the graph
# cooperad (y splits into an edge with two x's; x is grouplike)

def square_zero_coalgebra(coop):
    from .zmodule import FreeMod
    carrier = FreeMod(("x", "y"))
    coeff = coefficient_seq(carrier, name="c")
    dom = evaluate(coeff, EMPTY_SET)
    table = {}
    # k = 1: both basis vectors are grouplike over the one-vertex graph
    c1 = _bar_two_chain(FinSet.standard(1))
    tv1 = eval_tensor([coop.seq, coeff], c1)
    g1 = evaluate(coop.seq, FinSet.standard(1)).basis[0]
    table[1] = LinMap.from_tag_entries(
        dom, tv1.value,
        [((g1, dom.basis[0]), dom.basis[0], 1),
         ((g1, dom.basis[1]), dom.basis[1], 1)])
    # k = 2: y -> edge (x) x (x) x
    c2 = _bar_two_chain(FinSet.standard(2))
    tv2 = eval_tensor([coop.seq, coeff], c2)
    edge = evaluate(coop.seq, FinSet.standard(2)).basis[0]
    x = dom.basis[0]
    table[2] = LinMap.from_tag_entries(
        dom, tv2.value, [((edge, x, x), dom.basis[1], 1)])
    return CoalgebraObj(coop, carrier, table, name="sq0")

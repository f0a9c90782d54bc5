"""Cooperad structures and their verification.

A cooperad structure on a symmetric sequence is a table of cocomposition
components, one per canonical two-level chain, together with a counit.
Values on non-canonical chains are obtained by naturality transport, so
naturality becomes a construction plus a finite equivariance check
instead of an infinite axiom.

Coface and codegeneracy maps between iterated composition products are
constructed by solving the integer constraints imposed by the universal
cone projections; unsolvability surfaces as a structural error rather
than being assumed away.  The verification suites check coassociativity,
counit respect, naturality, the cosimplicial identities, and the
compatibility of parenthesization maps with cocomposition, all as exact
matrix identities at bounded sizes.
"""

from __future__ import annotations

import itertools

from .wreath import (
    Chain, ChainIso, FinSet, SetMap, canonical_chain, degeneracy,
    encode_chain, enumerate_fiber, face, parse_chain,
)
from .zmodule import (
    IntMatrix, LinMap, UNIT_MOD, invariant_factors, word_module,
)
from .symseq import counit_seq, evaluate, transport
from .compose import (
    ComposedSeq, KanModule, Paren, as_word, assemble_tensor_map,
    derive_bounds, eval_tensor, lift_fiber_slots, lift_first_slot,
    parenthesize, word_transport,
)


# ---------------------------------------------------------------------------
# reports

class Report:
    """Deterministically ordered list of check results."""

    def __init__(self, name):
        self.name = name
        self.entries = []

    def add(self, check, instance, ok, witness=None):
        entry = {"check": check, "instance": instance,
                 "status": "pass" if ok else "fail"}
        if witness is not None:
            entry["witness"] = witness
        self.entries.append(entry)

    def add_excluded(self, check, instance, detail):
        self.entries.append({"check": check, "instance": instance,
                             "status": "excluded", "witness": detail})

    def extend(self, other):
        self.entries.extend(other.entries)

    @property
    def ok(self):
        return not self.failures()

    def failures(self):
        return [e for e in self.entries if e["status"] == "fail"]

    def excluded(self):
        return [e for e in self.entries if e["status"] == "excluded"]

    def summary(self):
        return {"name": self.name, "checks": len(self.entries),
                "failures": len(self.failures())}


def _diff_witness(lhs, rhs):
    """First differing entry of two matrices, as a readable witness."""
    for r in range(max(lhs.nrows, rhs.nrows)):
        for c in range(max(lhs.ncols, rhs.ncols)):
            if lhs.entry(r, c) != rhs.entry(r, c):
                return {"row": r, "col": c,
                        "lhs": lhs.entry(r, c), "rhs": rhs.entry(r, c)}
    return {"note": "shape mismatch"}


# ---------------------------------------------------------------------------
# helpers

def reindex(dom, cod):
    """Positional identification between equal-rank modules."""
    if dom.rank != cod.rank:
        raise ValueError("rank mismatch in reindex (%d vs %d)"
                         % (dom.rank, cod.rank))
    return LinMap(dom, cod, IntMatrix.identity(dom.rank))


def two_chain(bottom, top, assignment):
    return Chain((bottom, top), (SetMap(top, bottom, assignment),))


def enumerate_canonical_two_chains(max_top, max_bottom):
    """Fully canonical 2-chains with level sizes bounded as given."""
    seen = set()
    out = []
    for m in range(0, max_top + 1):
        top = FinSet.standard(m)
        for k in range(0 if m == 0 else 1, max_bottom + 1):
            bottom = FinSet.standard(k)
            if m == 0:
                candidates = [{}]
            else:
                candidates = [dict(zip(top.elems, img))
                              for img in itertools.product(bottom.elems, repeat=m)]
            for asg in candidates:
                c = Chain((bottom, top), (SetMap(top, bottom, asg),))
                canon, _ = canonical_chain(c)
                if canon not in seen:
                    seen.add(canon)
                    out.append(canon)
    out.sort(key=encode_chain)
    return out


# ---------------------------------------------------------------------------
# the structure

class CooperadStructure:
    """A symmetric sequence with cocomposition and counit.

    ``rule`` computes the cocomposition on canonical 2-chains; a fixed
    ``table`` may be supplied instead (user-defined structures).
    Arbitrary chains are handled by canonicalizing and transporting.
    """

    def __init__(self, seq, rule=None, table=None, counit=None, name="O"):
        self.seq = seq
        self.name = name
        self.rule = rule
        self.table = dict(table) if table else {}
        if counit is None:
            raise ValueError("a counit map is required")
        if counit.dom != evaluate(seq, FinSet.standard(1)) or counit.cod != UNIT_MOD:
            raise ValueError("counit must map the arity-1 value to the unit")
        self.counit = counit
        self._towers = {}

    def delta(self, chain):
        """Cocomposition component at any 2-chain."""
        if chain.length != 2:
            raise ValueError("cocomposition lives on 2-chains")
        src = evaluate(self.seq, chain.top)
        tv = eval_tensor([self.seq, self.seq], chain)
        if src.rank == 0 or tv.value.rank == 0:
            return LinMap.zero(src, tv.value)
        canon, wit = canonical_chain(chain)
        entry = self._canonical_entry(canon)
        back = word_transport([self.seq, self.seq], wit.inverse())
        fwd = transport(self.seq, wit.top)
        return back @ entry @ fwd

    def _canonical_entry(self, canon):
        if canon not in self.table:
            if self.rule is None:
                raise KeyError("missing cocomposition entry for %s"
                               % encode_chain(canon))
            self.table[canon] = self.rule(canon)
        entry = self.table[canon]
        src = evaluate(self.seq, canon.top)
        tv = eval_tensor([self.seq, self.seq], canon)
        if entry.dom != src or entry.cod != tv.value:
            raise ValueError("table entry for %s has wrong dom/cod"
                             % encode_chain(canon))
        return entry

    def counit_at(self, s):
        src = evaluate(self.seq, s)
        if len(s) != 1:
            return LinMap.zero(src, UNIT_MOD)
        std1 = FinSet.standard(1)
        order = SetMap(s, std1, {s.elems[0]: std1.elems[0]})
        return self.counit @ transport(self.seq, order)

    def counit_piece(self, s):
        """Counit as a map to the empty word (the tensor unit)."""
        return reindex(UNIT_MOD, word_module([])) @ self.counit_at(s)

    def tower(self, base):
        if base not in self._towers:
            self._towers[base] = Tower(self, base)
        return self._towers[base]


def trivial_cooperad():
    """The counit sequence with its unique cooperad structure."""
    seq = counit_seq()

    def rule(canon):
        src = evaluate(seq, canon.top)
        tv = eval_tensor([seq, seq], canon)
        if src.rank and tv.value.rank:
            return LinMap.from_entries(src, tv.value, [(0, 0, 1)])
        return LinMap.zero(src, tv.value)

    counit = LinMap.from_entries(evaluate(seq, FinSet.standard(1)),
                                 UNIT_MOD, [(0, 0, 1)])
    return CooperadStructure(seq, rule=rule, counit=counit, name="unit")


# ---------------------------------------------------------------------------
# tilde-level coface and codegeneracy maps
#
# Positions in a word are the chain vertices.  Splitting at position i
# replaces the factor of the face chain at level i-1 (the root when
# i = 1) by a two-level word via a splitter map; codegeneracies apply
# the counit to the singleton factors created by doubling a level.

def tilde_face_map(tgt_seqs, splitters, i, chain):
    """Map from the word of ``face(chain, i)`` to the word of ``chain``,
    splitting at position i.

    ``splitters[i]`` maps the factor of the source slot i at a 2-chain
    to the two-level word over it (target slots i, i+1).
    """
    n = chain.length
    if not 1 <= i <= n - 1:
        raise ValueError("face position out of range")
    src_seqs = [tgt_seqs[j] for j in range(n) if j != i - 1]
    fchain = face(chain, i)
    src_tv = eval_tensor(src_seqs, fchain)
    tgt_tv = eval_tensor(tgt_seqs, chain)
    if src_tv.value.rank == 0 or tgt_tv.value.rank == 0:
        return LinMap.zero(src_tv.value, tgt_tv.value)
    tpos = {v: idx for idx, v in enumerate(tgt_tv.vertices)}
    pieces = []
    placements = []
    for k, vert in enumerate(src_tv.vertices):
        if i == 1 and vert == ("r",):
            sub = Chain(chain.levels[:2], chain.maps[:1])
            pieces.append(splitters[1](sub))
            placements.append([tpos[("r",)]]
                              + [tpos[(1, v)] for v in chain.levels[0]])
        elif i == 1:
            lvl, v = vert
            pieces.append(as_word(LinMap.identity(src_tv.factors[k])))
            placements.append([tpos[(lvl + 1, v)]])
        elif vert == ("r",):
            pieces.append(as_word(LinMap.identity(src_tv.factors[k])))
            placements.append([tpos[("r",)]])
        else:
            lvl, v = vert
            if lvl < i - 1:
                pieces.append(as_word(LinMap.identity(src_tv.factors[k])))
                placements.append([tpos[(lvl, v)]])
            elif lvl == i - 1:
                upper = chain.maps[i - 1]
                mid = chain.maps[i - 2].fiber(v)
                fib2 = FinSet(x for x in chain.levels[i] if upper(x) in mid)
                sub = Chain((mid, fib2),
                            (SetMap(fib2, mid, {x: upper(x) for x in fib2}),))
                pieces.append(splitters[i](sub))
                placements.append([tpos[(i - 1, v)]]
                                  + [tpos[(i, s)] for s in mid])
            else:
                pieces.append(as_word(LinMap.identity(src_tv.factors[k])))
                placements.append([tpos[(lvl + 1, v)]])
    return assemble_tensor_map(src_tv.value, pieces, placements, tgt_tv.value)


def tilde_delta_at(coop, i, chain):
    """Apply cocomposition at position i: the map from the word of the
    i-th face of the chain to the word of the chain."""
    n = chain.length
    splitters = {j: coop.delta for j in range(1, n)}
    return tilde_face_map([coop.seq] * n, splitters, i, chain)


def tilde_epsilon_at(coop, i, chain):
    """Counit applied at the singleton factors created by doubling level
    i: the map from the word of ``degeneracy(chain, i)`` to the word of
    the chain."""
    n = chain.length
    if not 0 <= i <= n:
        raise ValueError("degeneracy index out of range")
    dchain = degeneracy(chain, i)
    src_tv = eval_tensor([coop.seq] * (n + 1), dchain)
    tgt_tv = eval_tensor([coop.seq] * n, chain)
    if src_tv.value.rank == 0 or tgt_tv.value.rank == 0:
        return LinMap.zero(src_tv.value, tgt_tv.value)
    tpos = {v: idx for idx, v in enumerate(tgt_tv.vertices)}
    pieces = []
    placements = []
    for k, vert in enumerate(src_tv.vertices):
        if i == 0:
            if vert == ("r",):
                pieces.append(coop.counit_piece(dchain.levels[0]))
                placements.append([])
            elif vert[0] == 1:
                pieces.append(as_word(LinMap.identity(src_tv.factors[k])))
                placements.append([tpos[("r",)]])
            else:
                lvl, v = vert
                pieces.append(as_word(LinMap.identity(src_tv.factors[k])))
                placements.append([tpos[(lvl - 1, v)]])
        elif vert == ("r",):
            pieces.append(as_word(LinMap.identity(src_tv.factors[k])))
            placements.append([tpos[("r",)]])
        else:
            lvl, v = vert
            if lvl < i:
                pieces.append(as_word(LinMap.identity(src_tv.factors[k])))
                placements.append([tpos[(lvl, v)]])
            elif lvl == i:
                # singleton factor at the doubled level: counit it
                pieces.append(coop.counit_piece(FinSet((v,))))
                placements.append([])
            else:
                pieces.append(as_word(LinMap.identity(src_tv.factors[k])))
                placements.append([tpos[(lvl - 1, v)]])
    return assemble_tensor_map(src_tv.value, pieces, placements, tgt_tv.value)


# ---------------------------------------------------------------------------
# the cosimplicial tower of a cooperad at a fixed base set

class Tower:
    """Iterated products of one cooperad at one base set, with coface and
    codegeneracy maps built by solving the cone constraints."""

    def __init__(self, coop, base):
        self.coop = coop
        self.base = base
        self._kans = {}
        self._cofaces = {}
        self._codegens = {}

    def kan(self, n):
        if n not in self._kans:
            self._kans[n] = KanModule([self.coop.seq] * n, self.base)
        return self._kans[n]

    def coface(self, n, i):
        """Coface O^{o(n-1)} -> O^{on} applying cocomposition at i."""
        if not 1 <= i <= n - 1:
            raise ValueError("coface index out of range")
        key = (n, i)
        if key not in self._cofaces:
            src = self.kan(n - 1)
            tgt = self.kan(n)

            def class_map(ci):
                rep = tgt.classes[ci].representative
                return (tilde_delta_at(self.coop, i, rep)
                        @ src.iota(face(rep, i)))

            self._cofaces[key] = tgt.induce(src.value, class_map)
        return self._cofaces[key]

    def codegen(self, n, i):
        """Codegeneracy O^{o(n+1)} -> O^{on} applying the counit at i."""
        if not 0 <= i <= n:
            raise ValueError("codegeneracy index out of range")
        key = (n, i)
        if key not in self._codegens:
            if n == 0:
                self._codegens[key] = self.counit_level()
            else:
                src = self.kan(n + 1)
                tgt = self.kan(n)

                def class_map(ci):
                    rep = tgt.classes[ci].representative
                    return (tilde_epsilon_at(self.coop, i, rep)
                            @ src.iota(degeneracy(rep, i)))

                self._codegens[key] = tgt.induce(src.value, class_map)
        return self._codegens[key]

    def counit_level(self):
        """The extra codegeneracy O -> unit sequence at the base set."""
        src = self.kan(1)
        cod = evaluate(counit_seq(), self.base)
        if len(self.base) != 1 or src.rank == 0:
            return LinMap.zero(src.value, cod)
        fac = evaluate(self.coop.seq, self.base)
        unwrap = reindex(src.words[0], fac)
        return (reindex(UNIT_MOD, cod) @ self.coop.counit_at(self.base)
                @ unwrap @ src.proj_word(0))


# ---------------------------------------------------------------------------
# lifted cocomposition maps for parenthesization compatibility

def coaugmentation_at(coop, oo, s):
    """The universal map O(T) -> (O o O)(T) in decorated form."""
    dom = evaluate(coop.seq, s)
    cod = evaluate(oo, s)
    if dom.rank == 0:
        return LinMap.zero(dom, cod)
    m = len(s)
    std = FinSet.standard(m)
    tower = coop.tower(std)
    d = tower.coface(2, 1)
    k1 = tower.kan(1)
    fac = evaluate(coop.seq, std)
    wrap = k1.induce(fac, lambda i: reindex(fac, k1.words[0]))
    order = SetMap(std, s, dict(zip(std.elems, s.elems)))
    return (reindex(tower.kan(2).value, cod) @ d @ wrap
            @ transport(coop.seq, order.inverse()))


# ---------------------------------------------------------------------------
# verification suites

def verify_cooperad(coop, max_set, report_name=None, soft_errors=()):
    """Coassociativity on bounded 3-chains, both counit triangles, and
    naturality of the cocomposition under bounded chain isomorphisms.

    Exceptions of the ``soft_errors`` classes mark the instance as
    excluded from the verified fragment instead of failing the run."""
    rep = Report(report_name or ("verify_cooperad(%s)" % coop.name))
    seq = coop.seq

    # counit respect, both triangles
    for m in range(1, max_set + 1):
        s = FinSet.standard(m)
        src = evaluate(seq, s)
        if src.rank == 0:
            continue
        point = FinSet.standard(1)
        c_left = two_chain(point, s, {a: point.elems[0] for a in s})
        tvl = eval_tensor([seq, seq], c_left)
        left = assemble_tensor_map(
            tvl.value,
            [coop.counit_piece(point),
             as_word(LinMap.identity(tvl.factors[1]))],
            [[], [0]], word_module([tvl.factors[1]]))
        lhs = reindex(left.cod, src) @ left @ coop.delta(c_left)
        ok = lhs.mat == IntMatrix.identity(src.rank)
        rep.add("counit-left", "|S|=%d" % m, ok,
                None if ok else _diff_witness(lhs.mat, IntMatrix.identity(src.rank)))

        c_right = two_chain(s, s, {a: a for a in s})
        tvr = eval_tensor([seq, seq], c_right)
        pieces = [as_word(LinMap.identity(tvr.factors[0]))]
        placements = [[0]]
        for vert in tvr.vertices[1:]:
            pieces.append(coop.counit_piece(FinSet((vert[1],))))
            placements.append([])
        right = assemble_tensor_map(tvr.value, pieces, placements,
                                    word_module([tvr.factors[0]]))
        rhs = reindex(right.cod, src) @ right @ coop.delta(c_right)
        ok = rhs.mat == IntMatrix.identity(src.rank)
        rep.add("counit-right", "|S|=%d" % m, ok,
                None if ok else _diff_witness(rhs.mat, IntMatrix.identity(src.rank)))

    # coassociativity on canonical 3-chains
    seen = set()
    for m in range(0, max_set + 1):
        s = FinSet.standard(m)
        bounds = derive_bounds([seq] * 3, m)
        for fc in enumerate_fiber(s, 3, bounds):
            canon, _ = canonical_chain(fc.representative)
            if canon in seen:
                continue
            seen.add(canon)
            tv = eval_tensor([seq] * 3, canon)
            src = evaluate(seq, canon.top)
            if tv.value.rank == 0 or src.rank == 0:
                continue
            try:
                lhs = tilde_delta_at(coop, 1, canon) @ coop.delta(face(canon, 1))
                rhs = tilde_delta_at(coop, 2, canon) @ coop.delta(face(canon, 2))
            except soft_errors as exc:
                rep.add_excluded("coassociativity", encode_chain(canon), str(exc))
                continue
            ok = lhs == rhs
            rep.add("coassociativity", encode_chain(canon), ok,
                    None if ok else _diff_witness(lhs.mat, rhs.mat))

    # naturality under every chain isomorphism of bounded 2-chains
    max_bottom = max(seq.max_support(), max_set)
    for c in enumerate_canonical_two_chains(max_set, max_bottom):
        src = evaluate(seq, c.top)
        tv = eval_tensor([seq, seq], c)
        if src.rank == 0 or tv.value.rank == 0:
            continue
        f = c.maps[0]
        try:
            d_c = coop.delta(c)
        except soft_errors as exc:
            rep.add_excluded("naturality", encode_chain(c), str(exc))
            continue
        for sig_top in itertools.permutations(c.top.elems):
            sigma2 = SetMap(c.top, c.top, dict(zip(c.top.elems, sig_top)))
            inv2 = sigma2.inverse()
            for sig_bot in itertools.permutations(c.levels[0].elems):
                sigma1 = SetMap(c.levels[0], c.levels[0],
                                dict(zip(c.levels[0].elems, sig_bot)))
                new_map = {a: sigma1(f(inv2(a))) for a in c.top}
                target = Chain((c.levels[0], c.top),
                               (SetMap(c.top, c.levels[0], new_map),))
                psi = ChainIso(c, target, (sigma1, sigma2))
                try:
                    lhs = word_transport([seq, seq], psi) @ d_c
                    rhs = coop.delta(target) @ transport(seq, sigma2)
                except soft_errors as exc:
                    rep.add_excluded("naturality", encode_chain(c), str(exc))
                    continue
                ok = lhs == rhs
                rep.add("naturality",
                        "%s ~(%s,%s)" % (encode_chain(c),
                                         ",".join(str(a.label) for a in sig_bot),
                                         ",".join(str(a.label) for a in sig_top)),
                        ok, None if ok else _diff_witness(lhs.mat, rhs.mat))
    return rep


def verify_cosimplicial(coop, max_n, max_set, report_name=None):
    """Cosimplicial identities of the tower of iterated products."""
    rep = Report(report_name or ("verify_cosimplicial(%s)" % coop.name))
    for m in range(0, max_set + 1):
        tower = coop.tower(FinSet.standard(m))
        inst = "|S|=%d" % m
        for n in range(2, max_n):
            for i in range(1, n):
                for j in range(i + 1, n + 1):
                    lhs = tower.coface(n + 1, j) @ tower.coface(n, i)
                    rhs = tower.coface(n + 1, i) @ tower.coface(n, j - 1)
                    ok = lhs == rhs
                    rep.add("coface-coface",
                            "%s n=%d i=%d j=%d" % (inst, n, i, j), ok,
                            None if ok else _diff_witness(lhs.mat, rhs.mat))
        for n in range(1, max_n):
            for i in range(0, n):
                for j in range(i + 1, n + 1):
                    lhs = tower.codegen(n - 1, i) @ tower.codegen(n, j)
                    rhs = tower.codegen(n - 1, j - 1) @ tower.codegen(n, i)
                    ok = lhs == rhs
                    rep.add("codegen-codegen",
                            "%s n=%d i=%d j=%d" % (inst, n, i, j), ok,
                            None if ok else _diff_witness(lhs.mat, rhs.mat))
        for n in range(1, max_n):
            for i in range(1, n + 1):
                for j in range(0, n + 1):
                    lhs = tower.codegen(n, j) @ tower.coface(n + 1, i)
                    if j in (i - 1, i):
                        rhs_mat = IntMatrix.identity(tower.kan(n).rank)
                        ok = lhs.mat == rhs_mat
                    elif j < i - 1:
                        rhs = tower.coface(n, i - 1) @ tower.codegen(n - 1, j)
                        rhs_mat = rhs.mat
                        ok = lhs == rhs
                    else:  # j > i
                        rhs = tower.coface(n, i) @ tower.codegen(n - 1, j - 1)
                        rhs_mat = rhs.mat
                        ok = lhs == rhs
                    rep.add("mixed-identity",
                            "%s n=%d i=%d j=%d" % (inst, n, i, j), ok,
                            None if ok else _diff_witness(lhs.mat, rhs_mat))
    return rep


def _is_iso_over_z(mat):
    if mat.nrows != mat.ncols:
        return False
    facs = invariant_factors(mat)
    return len(facs) == mat.nrows and all(f == 1 for f in facs)


def verify_paren_compat(coop, max_set, square_max=3, report_name=None):
    """Parenthesization triangles (the canonical maps convert the lifted
    cocompositions into the cofaces) and the four-fold square."""
    rep = Report(report_name or ("verify_paren_compat(%s)" % coop.name))
    o = coop.seq
    oo = ComposedSeq([o, o], name="(OO)")

    for m in range(0, max_set + 1):
        base = FinSet.standard(m)
        tower = coop.tower(base)
        inst = "|S|=%d" % m
        kan3 = tower.kan(3)

        dhat_id, src2, nested_l = lift_first_slot(
            [o, o], [oo, o], lambda t: coaugmentation_at(coop, oo, t), base)
        p_left = Paren.node(Paren.node(Paren.leaf(o), Paren.leaf(o)),
                            Paren.leaf(o))
        par_l = parenthesize(p_left, base, kan3)
        lhs = par_l @ reindex(nested_l.value, par_l.dom) @ dhat_id \
            @ reindex(tower.kan(2).value, src2.value)
        d31 = tower.coface(3, 1)
        ok = lhs == d31
        rep.add("triangle-left", inst, ok,
                None if ok else _diff_witness(lhs.mat, d31.mat))
        rep.add("paren-iso-observed",
                "%s shape=((OO)O) iso=%s" % (inst, _is_iso_over_z(par_l.mat)),
                True)

        id_dhat, src2b, nested_r = lift_fiber_slots(
            [o, o], [o, oo], lambda t: coaugmentation_at(coop, oo, t), base)
        p_right = Paren.node(Paren.leaf(o),
                             Paren.node(Paren.leaf(o), Paren.leaf(o)))
        par_r = parenthesize(p_right, base, kan3)
        rhs = par_r @ reindex(nested_r.value, par_r.dom) @ id_dhat \
            @ reindex(tower.kan(2).value, src2b.value)
        d32 = tower.coface(3, 2)
        ok = rhs == d32
        rep.add("triangle-right", inst, ok,
                None if ok else _diff_witness(rhs.mat, d32.mat))

    # the square through (((OO)O))O at small bases
    ooo_l = ComposedSeq([oo, o], name="((OO)O)")
    for m in range(0, min(square_max, max_set) + 1):
        base = FinSet.standard(m)
        tower = coop.tower(base)
        inst = "|S|=%d" % m
        kan3 = tower.kan(3)
        kan4 = tower.kan(4)
        p3 = Paren.node(Paren.node(Paren.leaf(o), Paren.leaf(o)),
                        Paren.leaf(o))
        p4 = Paren.node(
            Paren.node(Paren.node(Paren.leaf(o), Paren.leaf(o)),
                       Paren.leaf(o)),
            Paren.leaf(o))
        par3 = parenthesize(p3, base, kan3)
        par4 = parenthesize(p4, base, kan4)

        def dhat_id_at(t):
            mm, s2, n2 = lift_first_slot(
                [o, o], [oo, o],
                lambda u: coaugmentation_at(coop, oo, u), t)
            return (reindex(n2.value, evaluate(ooo_l, t)) @ mm
                    @ reindex(evaluate(oo, t), s2.value))

        lifted, src_n, tgt_n = lift_first_slot(
            [oo, o], [ooo_l, o], dhat_id_at, base)
        route_a = par4 @ reindex(tgt_n.value, par4.dom) @ lifted \
            @ reindex(par3.dom, src_n.value)
        route_b = tower.coface(4, 1) @ par3
        ok = route_a == route_b
        rep.add("square", inst, ok,
                None if ok else _diff_witness(route_a.mat, route_b.mat))
    return rep


# ---------------------------------------------------------------------------
# JSON serialization
#
# {"symseq": {...}, "counit": matrix,
#  "cocomp": {"<canonical chain encoding>": matrix}}
#
# Matrices are {"shape": [rows, cols], "entries": [[row, col, value], ...]}.
# Cocomposition rows are indexed by the tensor-word basis of the chain in
# its canonical order (root factor index major, then the fibers of the
# bottom-level vertices in atom order).

def matrix_to_json(mat):
    return {"shape": [mat.nrows, mat.ncols],
            "entries": [[r, c, v] for r, c, v in mat.sorted_entries()]}


def matrix_from_json(data):
    m, n = data["shape"]
    return IntMatrix.from_entries(m, n, [tuple(e) for e in data["entries"]])


def cooperad_to_json(coop, stringify=None):
    from .symseq import symseq_to_json
    seq = coop.seq
    out = {"symseq": symseq_to_json(seq, stringify),
           "counit": matrix_to_json(coop.counit.mat),
           "cocomp": {}}
    max_bottom = seq.max_support()
    for canon in enumerate_canonical_two_chains(seq.max_arity, max_bottom):
        src = evaluate(seq, canon.top)
        tv = eval_tensor([seq, seq], canon)
        if src.rank == 0 or tv.value.rank == 0:
            continue
        out["cocomp"][encode_chain(canon)] = matrix_to_json(
            coop.delta(canon).mat)
    return out


def cooperad_from_json(data, name="custom"):
    from .symseq import symseq_from_json
    seq = symseq_from_json(data["symseq"], name=name)
    counit = LinMap(evaluate(seq, FinSet.standard(1)), UNIT_MOD,
                    matrix_from_json(data["counit"]))
    table = {}
    for key, matdata in data["cocomp"].items():
        chain = parse_chain(key)
        canon, _ = canonical_chain(chain)
        if canon != chain:
            raise ValueError("cocomposition key %r is not canonical" % key)
        src = evaluate(seq, chain.top)
        tv = eval_tensor([seq, seq], chain)
        mat = matrix_from_json(matdata)
        if mat.nrows != tv.value.rank or mat.ncols != src.rank:
            raise ValueError("cocomposition matrix for %r has shape %dx%d, "
                             "expected %dx%d" % (key, mat.nrows, mat.ncols,
                                                 tv.value.rank, src.rank))
        table[chain] = LinMap(src, tv.value, mat)
    return CooperadStructure(seq, table=table, counit=counit, name=name)

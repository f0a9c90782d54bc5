"""Contractible Delta-complexes of dimension at most two.

Basis elements are Delta-complexes with labeled 0-cells; admission runs
a greedy free-face collapse (a sufficient certificate of contractibility)
with an exact homology fallback that separates "definitely not
contractible" from "indeterminate".  Cocomposition contracts the block
closures cut out by a set map when they are all collapsible and the
quotient is again a Delta-complex; the failure modes are kept distinct.

In dimension one these complexes are exactly labeled trees, and the
fragment agrees with the graph cooperad on the nose.
"""

from __future__ import annotations

import itertools

from .wreath import Atom, FinSet, SetMap
from .zmodule import FreeMod, IntMatrix, LinMap, UNIT_MOD, invariant_factors
from .symseq import SymSeq, evaluate
from .compose import eval_tensor
from .cooperad import CooperadStructure
from .graphco import BasisGraph, enumerate_trees


class UnsupportedDimension(ValueError):
    pass


class BasisComplex:
    """A Delta-complex of dimension <= 2 with 0-cells labeled by a finite
    set.  Edges are ordered vertex pairs with ids; triangles are ordered
    triples of edge ids whose endpoints are consistent with a vertex
    triple (v0, v1, v2): faces ([v1,v2], [v0,v2], [v0,v1])."""

    __slots__ = ("vertices", "edges", "triangles")

    def __init__(self, vertices, edges, triangles=()):
        self.vertices = vertices
        self.edges = tuple((eid, (a, b)) for eid, (a, b) in edges)
        self.triangles = tuple((tid, tuple(es)) for tid, es in triangles)
        eids = [eid for eid, _ in self.edges]
        if len(set(eids)) != len(eids):
            raise ValueError("duplicate edge id")
        tids = [tid for tid, _ in self.triangles]
        if len(set(tids)) != len(tids):
            raise ValueError("duplicate triangle id")
        emap = dict(self.edges)
        for _, (a, b) in self.edges:
            if a not in vertices or b not in vertices:
                raise ValueError("edge endpoint outside the vertex set")
        for tid, es in self.triangles:
            if len(es) != 3 or any(e not in emap for e in es):
                raise ValueError("triangle %r needs three edge ids" % (tid,))
            self._triangle_vertices(emap, es)

    @staticmethod
    def _triangle_vertices(emap, es):
        (x1, x2) = emap[es[0]]
        (y1, y2) = emap[es[1]]
        (z1, z2) = emap[es[2]]
        # faces of (v0, v1, v2): [v1,v2], [v0,v2], [v0,v1]
        if y1 != z1 or x1 != z2 or x2 != y2:
            raise ValueError("triangle edges are not vertex-compatible")
        return (z1, z2, y2)

    def triangle_vertices(self, es):
        return self._triangle_vertices(dict(self.edges), es)

    def dim(self):
        if self.triangles:
            return 2
        if self.edges:
            return 1
        return 0

    def canonicalize(self):
        """Deterministic normal form: orientations normalized to the atom
        order (ascending endpoints and vertex triples, possible whenever
        cell vertices are distinct), cells renumbered by sorted position.

        The fragment carries no sign identification, so reorientation is
        a plain normal form; cells with repeated vertices keep their
        given orientation."""
        emap = dict(self.edges)
        oriented = {}
        for eid, (a, b) in self.edges:
            oriented[eid] = (b, a) if b < a else (a, b)
        new_tris = []
        for tid, es in self.triangles:
            v0, v1, v2 = self._triangle_vertices(emap, es)
            if len({v0, v1, v2}) == 3:
                w0, w1, w2 = sorted((v0, v1, v2))
                want = [frozenset((w1, w2)), frozenset((w0, w2)),
                        frozenset((w0, w1))]
                res = []
                for pair in want:
                    eid = next(e for e in es
                               if frozenset(emap[e]) == pair)
                    res.append(eid)
                new_tris.append((tid, tuple(res)))
            else:
                new_tris.append((tid, tuple(es)))
                for e in es:
                    oriented[e] = emap[e]
        order = sorted(((eid, oriented[eid]) for eid in oriented),
                       key=lambda e: (e[1][0].key, e[1][1].key, str(e[0])))
        renum = {eid: i for i, (eid, _) in enumerate(order)}
        edges = tuple((i, pair) for i, (_, pair) in enumerate(order))
        tris = sorted((tuple(renum[e] for e in es), str(tid))
                      for tid, es in new_tris)
        triangles = tuple((i, es) for i, (es, _) in enumerate(tris))
        return BasisComplex(self.vertices, edges, triangles)

    def tag(self):
        c = self.canonicalize()
        return ("cx",
                tuple((a.label, b.label) for _, (a, b) in c.edges),
                tuple(es for _, es in c.triangles))

    def __eq__(self, other):
        return isinstance(other, BasisComplex) and \
            (self.vertices, self.edges, self.triangles) == \
            (other.vertices, other.edges, other.triangles)

    def __hash__(self):
        return hash((self.vertices, self.edges, self.triangles))

    def __repr__(self):
        return "BasisComplex(V=%d,E=%d,T=%d)" % (
            len(self.vertices), len(self.edges), len(self.triangles))


def complex_from_tree(graph):
    """View a labeled tree as a one-dimensional complex."""
    return BasisComplex(
        graph.vertices,
        tuple((i, e) for i, e in enumerate(graph.edges)), ())


def complex_to_tree(cx):
    if cx.triangles:
        raise ValueError("not one-dimensional")
    return BasisGraph(cx.vertices, [pair for _, pair in cx.edges])


# ---------------------------------------------------------------------------
# collapsibility and homology

def collapsible(cx):
    """Greedy free-face collapse down to a single vertex.  True is a
    sufficient certificate of contractibility."""
    if cx.dim() > 2:
        raise UnsupportedDimension("dimension > 2")
    verts = set(cx.vertices)
    edges = dict(cx.edges)
    tris = {tid: es for tid, es in cx.triangles}
    if not verts:
        return False
    while True:
        # free edge: a face of exactly one triangle, counting multiplicity
        use = {}
        for tid, es in tris.items():
            for e in es:
                use[e] = use.get(e, 0) + 1
        collapsed = False
        for eid in sorted(edges, key=str):
            if use.get(eid, 0) == 1:
                tid = next(t for t, es in tris.items() if eid in es)
                del tris[tid]
                del edges[eid]
                collapsed = True
                break
        if collapsed:
            continue
        # free vertex: endpoint of exactly one edge end, no triangles left
        # (a loop counts both ends)
        vuse = {}
        for eid, (a, b) in edges.items():
            vuse[a] = vuse.get(a, 0) + 1
            vuse[b] = vuse.get(b, 0) + 1
        for v in sorted(verts, key=lambda a: a.key):
            if vuse.get(v, 0) == 1:
                eid = next(e for e, (a, b) in edges.items() if v in (a, b))
                if any(eid in es for es in tris.values()):
                    continue
                del edges[eid]
                verts.discard(v)
                collapsed = True
                break
        if not collapsed:
            break
    return not edges and not tris and len(verts) == 1


def homology_ranks(cx):
    """(connected, reduced ranks and torsion flags in degrees 0..2)."""
    verts = list(cx.vertices)
    vidx = {v: i for i, v in enumerate(verts)}
    eids = [eid for eid, _ in cx.edges]
    eidx = {e: i for i, e in enumerate(eids)}
    d1 = IntMatrix.from_entries(
        len(verts), len(cx.edges),
        [item for j, (_, (a, b)) in enumerate(cx.edges)
         for item in ((vidx[b], j, 1), (vidx[a], j, -1))])
    d2 = IntMatrix.from_entries(
        len(cx.edges), len(cx.triangles),
        [item for j, (_, es) in enumerate(cx.triangles)
         for item in ((eidx[es[0]], j, 1), (eidx[es[1]], j, -1),
                      (eidx[es[2]], j, 1))])
    f1 = invariant_factors(d1)
    f2 = invariant_factors(d2)
    r1, r2 = len(f1), len(f2)
    nv, ne, nt = len(verts), len(cx.edges), len(cx.triangles)
    h0_red = (nv - r1) - 1
    h1_free = (ne - r1) - r2
    h1_torsion = any(f != 1 for f in f2)
    h2_free = nt - r2
    h0_torsion = any(f != 1 for f in f1)
    connected = nv > 0 and h0_red == 0
    return {"connected": connected,
            "h0_reduced": h0_red, "h0_torsion": h0_torsion,
            "h1_free": h1_free, "h1_torsion": h1_torsion,
            "h2_free": h2_free}


def contractibility_status(cx):
    """"collapsible" | "not_contractible" | "indeterminate"."""
    if collapsible(cx):
        return "collapsible"
    h = homology_ranks(cx)
    acyclic = (h["connected"] and not h["h0_torsion"]
               and h["h1_free"] == 0 and not h["h1_torsion"]
               and h["h2_free"] == 0)
    return "indeterminate" if acyclic else "not_contractible"


# ---------------------------------------------------------------------------
# contraction

class ContractOutcome:
    """Result of contracting a complex along a set map."""

    OK = "ok"
    NOT_CONTRACTION = "not-a-contraction"
    NOT_DELTA = "quotient-not-a-delta-complex"

    def __init__(self, status, quotient=None, blocks=None, detail=None):
        self.status = status
        self.quotient = quotient
        self.blocks = blocks
        self.detail = detail

    def __bool__(self):
        return self.status == self.OK


def block_closure(cx, fiber):
    """Maximal subcomplex supported by a vertex subset."""
    edges = tuple((eid, pair) for eid, pair in cx.edges
                  if pair[0] in fiber and pair[1] in fiber)
    keep = {eid for eid, _ in edges}
    tris = tuple((tid, es) for tid, es in cx.triangles
                 if all(e in keep for e in es))
    return BasisComplex(fiber, edges, tris)


def contract_complex(cx, f):
    """Contract the block closures cut out by a set map.

    Defined when every block closure is collapsible and every cell not
    inside a block meets each block in at most one vertex slot; the
    second failure is reported separately because the quotient would
    leave the Delta-complex world."""
    if f.dom != cx.vertices:
        raise ValueError("map domain must be the vertex set")
    blocks = {}
    for t in f.cod:
        fib = f.fiber(t)
        if len(fib) == 0:
            return ContractOutcome(ContractOutcome.NOT_CONTRACTION,
                                   detail="empty fiber %r" % (t,))
        cl = block_closure(cx, fib)
        if not collapsible(cl):
            return ContractOutcome(ContractOutcome.NOT_CONTRACTION,
                                   detail="block %r not collapsible" % (t,))
        blocks[t] = cl
    in_block_edge = {eid for t, cl in blocks.items() for eid, _ in cl.edges}
    # condition: cells not inside a block meet each block at most once
    for eid, (a, b) in cx.edges:
        if eid in in_block_edge:
            continue
        if f(a) == f(b):
            return ContractOutcome(ContractOutcome.NOT_DELTA,
                                   detail="edge %r" % (eid,))
    for tid, es in cx.triangles:
        if all(e in in_block_edge for e in es):
            continue
        v0, v1, v2 = cx.triangle_vertices(es)
        images = [f(v0), f(v1), f(v2)]
        if len(set(images)) != 3:
            return ContractOutcome(ContractOutcome.NOT_DELTA,
                                   detail="triangle %r" % (tid,))
    qedges = tuple((eid, (f(a), f(b))) for eid, (a, b) in cx.edges
                   if eid not in in_block_edge)
    qtris = tuple((tid, es) for tid, es in cx.triangles
                  if not all(e in in_block_edge for e in es))
    quotient = BasisComplex(f.cod, qedges, qtris).canonicalize()
    blocks = {t: cl.canonicalize() for t, cl in blocks.items()}
    return ContractOutcome(ContractOutcome.OK, quotient, blocks)


# ---------------------------------------------------------------------------
# enumeration and the cooperad fragment

def enumerate_complexes(s, max_triangles=0):
    """Admitted (collapsible) basis complexes on a vertex set: all labeled
    trees, plus two-dimensional complexes obtained by filling triangles
    onto tree scaffolds, up to the given triangle count.

    Enumerated cells are regular (distinct vertices); the admission test
    itself handles singular complexes when given one."""
    out = [complex_from_tree(g).canonicalize() for g in enumerate_trees(s)]
    if max_triangles <= 0 or len(s) < 3:
        return out
    verts = s.elems
    seen = {c.tag() for c in out}
    base_edges = [(a, b) for i, a in enumerate(verts) for b in verts[i + 1:]]
    results = list(out)
    # choose an edge set and fill some triangles whose edges are present
    for ecount in range(len(s) - 1, len(base_edges) + 1):
        for edges in itertools.combinations(base_edges, ecount):
            eidx = {pair: i for i, pair in enumerate(edges)}
            tri_candidates = []
            for (v0, v1, v2) in itertools.combinations(verts, 3):
                need = [(v1, v2), (v0, v2), (v0, v1)]
                if all(p in eidx for p in need):
                    tri_candidates.append(tuple(eidx[p] for p in need))
            for tcount in range(1, max_triangles + 1):
                for tris in itertools.combinations(tri_candidates, tcount):
                    cx = BasisComplex(
                        s, tuple(enumerate(edges)),
                        tuple(enumerate(tris))).canonicalize()
                    if cx.tag() in seen:
                        continue
                    seen.add(cx.tag())
                    if contractibility_status(cx) == "collapsible":
                        results.append(cx)
    results.sort(key=lambda c: c.tag())
    return results


def tag_to_complex(tag, carrier):
    """Decode a skeletal complex tag against a carrier set."""
    _, edges, triangles = tag
    elems = carrier.elems
    pos = {i + 1: elems[i] for i in range(len(elems))}
    exs = tuple((i, (pos[a], pos[b])) for i, (a, b) in enumerate(edges))
    return BasisComplex(carrier, exs, tuple(enumerate(triangles)))


def complex_tag(cx):
    """Skeletal tag with vertices standardized by position."""
    c = cx.canonicalize()
    ppos = {a: i + 1 for i, a in enumerate(c.vertices)}
    return ("cx",
            tuple((ppos[a], ppos[b]) for _, (a, b) in c.edges),
            tuple(es for _, es in c.triangles))


def cdc_symseq(max_arity, max_triangles=1, name="cdc"):
    """Symmetric sequence spanned by the enumerated admitted complexes."""
    values = []
    gens = []
    from .zmodule import SignedPerm
    for n in range(max_arity + 1):
        s = FinSet.standard(n)
        cxs = enumerate_complexes(s, max_triangles if n >= 3 else 0)
        tags = [complex_tag(c) for c in cxs]
        mod = FreeMod(tuple(tags))
        index = {t: i for i, t in enumerate(tags)}
        gs = []
        for k in range(n - 1):
            a, b = s.elems[k], s.elems[k + 1]
            swap = {a: b, b: a}
            images = []
            for c in cxs:
                moved = BasisComplex(
                    s,
                    tuple((eid, (swap.get(x, x), swap.get(y, y)))
                          for eid, (x, y) in c.edges),
                    c.triangles)
                # reorient edges ascending is not available here: the
                # relabeled complex is canonicalized as-is
                images.append(index[complex_tag(moved)])
            gs.append(SignedPerm(images))
        values.append(mod)
        gens.append(tuple(gs))
    return SymSeq(values, gens, name=name)


class ExclusionLog:
    """Instances excluded from the verified fragment, with reasons."""

    def __init__(self):
        self.entries = []

    def add(self, kind, instance, detail):
        self.entries.append({"kind": kind, "instance": instance,
                             "detail": detail})


def delta_cdc(chain, seq, log=None):
    """Cocomposition on the enumerated fragment: quotient tensor blocks
    when the contraction is defined, zero when it is not a contraction;
    a quotient that leaves the Delta-complex world or the enumerated
    fragment is excluded and logged, never silently coerced."""
    bottom, top = chain.levels[0], chain.top
    f = chain.maps[0]
    src = evaluate(seq, top)
    tv = eval_tensor([seq, seq], chain)
    entries = []
    for tag in src.basis:
        cx = tag_to_complex(tag[2], top)
        res = contract_complex(cx, f)
        if res.status == ContractOutcome.NOT_CONTRACTION:
            continue
        if res.status == ContractOutcome.NOT_DELTA:
            if log is not None:
                log.add("quotient-not-a-delta-complex", repr(cx), res.detail)
            raise StructuralContractionError(
                "quotient of %r along %r is not a Delta-complex"
                % (cx, f), detail=res.detail)
        word = [("@", tuple(a.label for a in bottom),
                 complex_tag(res.quotient))]
        ok = word[0] in evaluate(seq, bottom).index
        for t in bottom:
            btag = ("@", tuple(a.label for a in f.fiber(t)),
                    complex_tag(res.blocks[t]))
            ok = ok and btag in evaluate(seq, f.fiber(t)).index
            word.append(btag)
        if not ok:
            if log is not None:
                log.add("outside-fragment", repr(cx), "contraction image "
                        "is not an enumerated basis complex")
            continue
        entries.append((tv.value.index[tuple(word)], src.index[tag], 1))
    return LinMap.from_entries(src, tv.value, entries)


class StructuralContractionError(ValueError):
    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


def counit_cdc(seq):
    src = evaluate(seq, FinSet.standard(1))
    return LinMap.from_entries(src, UNIT_MOD, [(0, 0, 1)])


def cdc_cooperad(max_arity, max_triangles=1, name="cdc"):
    """The contractible-complex cooperad on the enumerated fragment."""
    seq = cdc_symseq(max_arity, max_triangles, name=name)
    log = ExclusionLog()
    coop = CooperadStructure(
        seq, rule=lambda canon: delta_cdc(canon, seq, log),
        counit=counit_cdc(seq), name=name)
    coop.exclusions = log
    return coop


# ---------------------------------------------------------------------------
# JSON encoding

def complex_to_json(cx):
    return {"vertices": [a.label for a in cx.vertices],
            "edges": [[eid, a.label, b.label] for eid, (a, b) in cx.edges],
            "triangles": [[tid, *es] for tid, es in cx.triangles]}


def complex_from_json(data):
    verts = FinSet(Atom(v) for v in data["vertices"])
    edges = [(eid, (Atom(a), Atom(b))) for eid, a, b in data["edges"]]
    tris = [(t[0], tuple(t[1:])) for t in data.get("triangles", [])]
    return BasisComplex(verts, edges, tris)

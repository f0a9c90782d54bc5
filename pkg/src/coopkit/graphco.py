"""Graph cooperads: labeled trees under contraction.

The basis of the unoriented cooperad in arity S is the set of connected
acyclic graphs on vertex set S (labeled trees).  Cocomposition contracts
the blocks cut out by a set map when every block is again a tree, and
kills the graph otherwise.  The directed variant carries orientations
modulo the relation that reversing one edge negates the graph; bases are
the ascending orientations and signs live in the matrices.
"""

from __future__ import annotations

import itertools

from .wreath import Atom, FinSet, SetMap
from .zmodule import FreeMod, LinMap, SignedPerm, UNIT_MOD, ZERO_MOD
from .symseq import SymSeq, evaluate
from .compose import eval_tensor
from .cooperad import CooperadStructure


class BasisGraph:
    """A labeled tree: connected acyclic graph on a finite vertex set."""

    __slots__ = ("vertices", "edges")

    def __init__(self, vertices, edges, validate=True):
        self.vertices = vertices
        norm = []
        for a, b in edges:
            if a == b:
                raise ValueError("loop edge %r" % (a,))
            norm.append((a, b) if a < b else (b, a))
        norm.sort(key=lambda e: (e[0].key, e[1].key))
        for e, f in zip(norm, norm[1:]):
            if e == f:
                raise ValueError("duplicate edge %r" % (e,))
        self.edges = tuple(norm)
        if validate and not self.is_tree():
            raise ValueError("not a tree on %r" % (vertices,))

    def is_tree(self):
        n = len(self.vertices)
        if n == 0:
            return False
        if len(self.edges) != n - 1:
            return False
        return _connected(self.vertices, self.edges)

    def __eq__(self, other):
        return (isinstance(other, BasisGraph)
                and self.vertices == other.vertices and self.edges == other.edges)

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return "BasisGraph(%s)" % encode_graph(self)


def _connected(vertices, edges):
    if len(vertices) == 0:
        return False
    parent = {a: a for a in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    roots = {find(a) for a in vertices}
    return len(roots) == 1


def enumerate_trees(s):
    """All labeled trees on the vertex set, in canonical (edge list)
    order; the count is |S|^(|S|-2) for |S| >= 2."""
    n = len(s)
    if n == 0:
        return []
    if n == 1:
        return [BasisGraph(s, ())]
    pairs = [(a, b) for i, a in enumerate(s.elems)
             for b in s.elems[i + 1:]]
    out = []
    for combo in itertools.combinations(pairs, n - 1):
        if _connected(s, combo):
            out.append(BasisGraph(s, combo))
    out.sort(key=lambda g: tuple((a.key, b.key) for a, b in g.edges))
    return out


def contract(graph, f):
    """Contract the blocks cut out by a set map.

    Returns (quotient, blocks) when every block (the induced subgraph on
    a fiber) is a tree, None otherwise; an empty fiber has no tree, so
    non-surjective maps never contract."""
    if f.dom != graph.vertices:
        raise ValueError("map domain must be the vertex set")
    blocks = {}
    for t in f.cod:
        fib = f.fiber(t)
        if len(fib) == 0:
            return None
        bedges = tuple(e for e in graph.edges if e[0] in fib and e[1] in fib)
        if len(bedges) != len(fib) - 1 or not _connected(fib, bedges):
            return None
        blocks[t] = BasisGraph(fib, bedges)
    qedges = set()
    for a, b in graph.edges:
        ta, tb = f(a), f(b)
        if ta != tb:
            qedges.add((ta, tb) if ta < tb else (tb, ta))
    quotient = BasisGraph(f.cod, tuple(qedges))
    return quotient, blocks


# ---------------------------------------------------------------------------
# basis tags and encodings
#
# Skeletal tags standardize the vertex labels by position: a tree on an
# arbitrary set S is stored against the decorated module evaluate(seq, S)
# with its edges rewritten through the order isomorphism {1..n} -> S.

def tree_tag(graph):
    """Skeletal tag of a tree: edges through the position isomorphism."""
    pos = {a: i + 1 for i, a in enumerate(graph.vertices)}
    return ("g", tuple(sorted((min(pos[a], pos[b]), max(pos[a], pos[b]))
                              for a, b in graph.edges)))


def decorated_tag(graph):
    labels = tuple(a.label for a in graph.vertices)
    return ("@", labels, tree_tag(graph))


def tag_to_tree(tag, carrier):
    """Decode a skeletal tag against a carrier set."""
    _, edges = tag
    elems = carrier.elems
    return BasisGraph(carrier, tuple((elems[a - 1], elems[b - 1])
                                     for a, b in edges))


def encode_graph(graph, directed=False):
    verts = ",".join(str(a.label) for a in graph.vertices)
    sep = ">" if directed else "-"
    edges = " ".join("%s%s%s" % (a.label, sep, b.label)
                     for a, b in graph.edges)
    return "%s;%s" % (verts, (" " + edges) if edges else "")


def parse_graph(text):
    head, _, tail = text.partition(";")
    labels = [t.strip() for t in head.split(",") if t.strip()]
    verts = FinSet(Atom(int(t) if t.lstrip("-").isdigit() else t)
                   for t in labels)
    edges = []
    for item in tail.split():
        sep = ">" if ">" in item else "-"
        a, b = item.split(sep, 1)
        edges.append((Atom(int(a) if a.lstrip("-").isdigit() else a),
                      Atom(int(b) if b.lstrip("-").isdigit() else b)))
    return BasisGraph(verts, edges)


# ---------------------------------------------------------------------------
# the unoriented graph cooperad

def graph_module(s):
    """Free module on the labeled trees of a vertex set (zero when the
    set is empty: a connected graph needs a vertex)."""
    return FreeMod(tuple(tree_tag(g) for g in enumerate_trees(s)))


def graph_symseq(max_arity, name="gr"):
    values = []
    gens = []
    for n in range(max_arity + 1):
        s = FinSet.standard(n)
        trees = enumerate_trees(s)
        mod = FreeMod(tuple(tree_tag(g) for g in trees))
        index = {tree_tag(g): i for i, g in enumerate(trees)}
        gs = []
        for k in range(n - 1):
            images = []
            for g in trees:
                swapped = _relabel_tree(g, s, k)
                images.append(index[tree_tag(swapped)])
            gs.append(SignedPerm(images))
        values.append(mod)
        gens.append(tuple(gs))
    return SymSeq(values, gens, name=name)


def _relabel_tree(graph, s, k):
    """Relabel along the transposition of the k-th and (k+1)-st atoms."""
    a, b = s.elems[k], s.elems[k + 1]
    swap = {a: b, b: a}
    edges = [(swap.get(x, x), swap.get(y, y)) for x, y in graph.edges]
    return BasisGraph(s, edges)


def delta_graph(chain, seq=None):
    """Cocomposition component of the unoriented graph cooperad at a
    2-chain: each tree maps to quotient tensor blocks, or to zero when
    the map does not contract it."""
    if seq is None:
        seq = graph_symseq(len(chain.top))
    bottom, top = chain.levels[0], chain.top
    f = chain.maps[0]
    src = evaluate(seq, top)
    tv = eval_tensor([seq, seq], chain)
    entries = []
    for tag in src.basis:
        tree = tag_to_tree(tag[2], top)
        res = contract(tree, f)
        if res is None:
            continue
        quotient, blocks = res
        word = (decorated_tag(quotient),) + tuple(
            decorated_tag(blocks[t]) for t in bottom)
        entries.append((tv.value.index[word], src.index[tag], 1))
    return LinMap.from_entries(src, tv.value, entries)


def counit_graph(seq=None):
    """The single one-vertex graph goes to 1."""
    if seq is None:
        seq = graph_symseq(1)
    src = evaluate(seq, FinSet.standard(1))
    return LinMap.from_entries(src, UNIT_MOD, [(0, 0, 1)])


def graph_cooperad(max_arity, name="gr"):
    seq = graph_symseq(max_arity, name=name)
    return CooperadStructure(
        seq, rule=lambda canon: delta_graph(canon, seq),
        counit=counit_graph(seq), name=name)


def delta_graph_no_zero_rule(chain, seq):
    """Deliberately wrong cocomposition: a tree that the map fails to
    contract is sent to the first basis word instead of zero (negative
    control for the verifier)."""
    bottom, top = chain.levels[0], chain.top
    f = chain.maps[0]
    src = evaluate(seq, top)
    tv = eval_tensor([seq, seq], chain)
    entries = []
    for tag in src.basis:
        tree = tag_to_tree(tag[2], top)
        res = contract(tree, f)
        if res is None:
            if tv.value.rank:
                entries.append((0, src.index[tag], 1))
            continue
        quotient, blocks = res
        word = (decorated_tag(quotient),) + tuple(
            decorated_tag(blocks[t]) for t in bottom)
        entries.append((tv.value.index[word], src.index[tag], 1))
    return LinMap.from_entries(src, tv.value, entries)


def graph_cooperad_no_zero_rule(max_arity):
    seq = graph_symseq(max_arity)
    return CooperadStructure(
        seq, rule=lambda canon: delta_graph_no_zero_rule(canon, seq),
        counit=counit_graph(seq), name="gr-corrupt")


# ---------------------------------------------------------------------------
# the directed graph cooperad

class DirBasisGraph:
    """A tree with oriented edges and a sign; reversing an edge is
    identified with negation, so the canonical form orients every edge
    from the smaller to the larger vertex."""

    __slots__ = ("vertices", "edges", "sign")

    def __init__(self, vertices, edges, sign=1):
        self.vertices = vertices
        self.edges = tuple(edges)
        self.sign = sign
        under = BasisGraph(vertices, [(a, b) for a, b in self.edges])
        if len(under.edges) != len(self.edges):
            raise ValueError("repeated edge")

    def canonical(self):
        """Ascending orientation with the accumulated sign."""
        sign = self.sign
        edges = []
        for a, b in self.edges:
            if b < a:
                a, b = b, a
                sign = -sign
            edges.append((a, b))
        edges.sort(key=lambda e: (e[0].key, e[1].key))
        return DirBasisGraph(self.vertices, edges, sign)

    def __eq__(self, other):
        return (isinstance(other, DirBasisGraph)
                and self.vertices == other.vertices
                and self.edges == other.edges and self.sign == other.sign)

    def __hash__(self):
        return hash((self.vertices, self.edges, self.sign))

    def __repr__(self):
        return "DirBasisGraph(%s, sign=%+d)" % (
            encode_graph(self, directed=True), self.sign)


def canonical_dir(graph):
    return graph.canonical()


def dir_tree_tag(graph):
    canon = graph.canonical()
    pos = {a: i + 1 for i, a in enumerate(canon.vertices)}
    return ("dg", tuple(sorted((pos[a], pos[b]) for a, b in canon.edges)))


def dir_decorated(graph):
    canon = graph.canonical()
    labels = tuple(a.label for a in canon.vertices)
    return ("@", labels, dir_tree_tag(canon)), canon.sign


def tag_to_dir_tree(tag, carrier):
    _, edges = tag
    elems = carrier.elems
    return DirBasisGraph(carrier, tuple((elems[a - 1], elems[b - 1])
                                        for a, b in edges))


def dirgraph_symseq(max_arity, name="dgr"):
    values = []
    gens = []
    for n in range(max_arity + 1):
        s = FinSet.standard(n)
        trees = enumerate_trees(s)
        tags = []
        for g in trees:
            tags.append(dir_tree_tag(DirBasisGraph(s, g.edges)))
        mod = FreeMod(tuple(tags))
        gs = []
        for k in range(n - 1):
            a, b = s.elems[k], s.elems[k + 1]
            swap = {a: b, b: a}
            images = []
            signs = []
            for g in trees:
                moved = DirBasisGraph(
                    s, [(swap.get(x, x), swap.get(y, y)) for x, y in g.edges])
                canon = moved.canonical()
                images.append(mod.index[dir_tree_tag(canon)])
                signs.append(canon.sign)
            gs.append(SignedPerm(images, signs))
        values.append(mod)
        gens.append(tuple(gs))
    return SymSeq(values, gens, name=name)


def delta_dirgraph(chain, seq=None):
    """Directed cocomposition: contract the (canonically oriented) tree,
    orient quotient and block edges by the original arrows, and multiply
    the canonicalization signs."""
    if seq is None:
        seq = dirgraph_symseq(len(chain.top))
    bottom, top = chain.levels[0], chain.top
    f = chain.maps[0]
    src = evaluate(seq, top)
    tv = eval_tensor([seq, seq], chain)
    entries = []
    for tag in src.basis:
        dtree = tag_to_dir_tree(tag[2], top)
        under = BasisGraph(top, [(a, b) for a, b in dtree.edges])
        res = contract(under, f)
        if res is None:
            continue
        _, _ = res
        qedges = []
        bedges = {t: [] for t in bottom}
        for a, b in dtree.edges:
            ta, tb = f(a), f(b)
            if ta == tb:
                bedges[ta].append((a, b))
            else:
                qedges.append((ta, tb))
        sign = 1
        qtag, s0 = dir_decorated(DirBasisGraph(bottom, qedges))
        sign *= s0
        word = [qtag]
        for t in bottom:
            btag, s1 = dir_decorated(DirBasisGraph(f.fiber(t), bedges[t]))
            sign *= s1
            word.append(btag)
        entries.append((tv.value.index[tuple(word)], src.index[tag], sign))
    return LinMap.from_entries(src, tv.value, entries)


def counit_dirgraph(seq=None):
    if seq is None:
        seq = dirgraph_symseq(1)
    src = evaluate(seq, FinSet.standard(1))
    return LinMap.from_entries(src, UNIT_MOD, [(0, 0, 1)])


def dirgraph_cooperad(max_arity, name="dgr"):
    seq = dirgraph_symseq(max_arity, name=name)
    return CooperadStructure(
        seq, rule=lambda canon: delta_dirgraph(canon, seq),
        counit=counit_dirgraph(seq), name=name)

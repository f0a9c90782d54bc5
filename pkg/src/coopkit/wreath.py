"""Chains of finite-set maps and their calculus.

A chain of length n is a tower S1 <- S2 <- ... <- Sn of finite sets and
set maps, equivalently a level-n tree whose leaves are labeled by the top
set.  Morphisms are levelwise bijections commuting with the maps.  This
module provides the face / degeneracy / leaf operations on chains, the
leafless ("bar") chains used for coalgebras, canonical forms, and the
enumeration of chain isomorphism classes over a fixed top set together
with their automorphism groups.
"""

from __future__ import annotations

import itertools


STAR_LABEL = "⋆"  # reserved one-point-set label


class Atom:
    """Opaque totally ordered label; ints order before strings."""

    __slots__ = ("label",)

    def __init__(self, label):
        if not isinstance(label, (int, str)) or isinstance(label, bool):
            raise TypeError("atom label must be int or str")
        self.label = label

    @property
    def key(self):
        return (0, self.label) if isinstance(self.label, int) else (1, self.label)

    def __eq__(self, other):
        return isinstance(other, Atom) and self.label == other.label

    def __hash__(self):
        return hash(("Atom", self.label))

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key

    def __repr__(self):
        return "Atom(%r)" % (self.label,)


STAR = Atom(STAR_LABEL)


def atoms(labels):
    return tuple(Atom(x) for x in labels)


class FinSet:
    """Finite set of atoms, iterated in atom order (canonical form)."""

    __slots__ = ("elems",)

    def __init__(self, elems=()):
        elems = sorted(elems)
        for a, b in zip(elems, elems[1:]):
            if a == b:
                raise ValueError("duplicate atom %r" % (a,))
        self.elems = tuple(elems)

    @classmethod
    def of(cls, *labels):
        return cls(atoms(labels))

    @classmethod
    def standard(cls, n):
        return cls(atoms(range(1, n + 1)))

    def __iter__(self):
        return iter(self.elems)

    def __len__(self):
        return len(self.elems)

    def __contains__(self, a):
        return a in self.elems

    def __eq__(self, other):
        return isinstance(other, FinSet) and self.elems == other.elems

    def __hash__(self):
        return hash(self.elems)

    def __repr__(self):
        return "FinSet{%s}" % ",".join(str(a.label) for a in self.elems)

    def position(self, a):
        return self.elems.index(a)


EMPTY_SET = FinSet()
STAR_SET = FinSet((STAR,))


class SetMap:
    """Total map between finite sets; not necessarily surjective."""

    __slots__ = ("dom", "cod", "assignment")

    def __init__(self, dom, cod, assignment):
        self.dom = dom
        self.cod = cod
        assignment = dict(assignment)
        if set(assignment) != set(dom.elems):
            raise ValueError("assignment must cover the domain exactly")
        for v in assignment.values():
            if v not in cod:
                raise ValueError("image %r not in codomain" % (v,))
        self.assignment = {a: assignment[a] for a in dom.elems}

    @classmethod
    def constant(cls, dom, target, cod=None):
        cod = cod if cod is not None else FinSet((target,))
        return cls(dom, cod, {a: target for a in dom})

    @classmethod
    def identity(cls, s):
        return cls(s, s, {a: a for a in s})

    def __call__(self, a):
        return self.assignment[a]

    def __eq__(self, other):
        return (isinstance(other, SetMap) and self.dom == other.dom
                and self.cod == other.cod and self.assignment == other.assignment)

    def __hash__(self):
        return hash((self.dom, self.cod, tuple(self.assignment.items())))

    def __repr__(self):
        return "SetMap{%s}" % ",".join(
            "%s>%s" % (a.label, b.label) for a, b in self.assignment.items())

    def compose(self, other):
        """self after other."""
        if other.cod != self.dom:
            raise ValueError("composition mismatch")
        return SetMap(other.dom, self.cod,
                      {a: self(other(a)) for a in other.dom})

    def fiber(self, b):
        return FinSet(a for a in self.dom if self(a) == b)

    def fibers(self):
        return {b: self.fiber(b) for b in self.cod}

    def is_bijection(self):
        return len(self.dom) == len(self.cod) == len(set(self.assignment.values()))

    def inverse(self):
        if not self.is_bijection():
            raise ValueError("not a bijection")
        return SetMap(self.cod, self.dom, {v: k for k, v in self.assignment.items()})

    def restrict(self, sub_dom):
        return SetMap(sub_dom, self.cod, {a: self(a) for a in sub_dom})


class Chain:
    """Tower S1 <- S2 <- ... <- Sn; maps[i] : levels[i+1] -> levels[i]."""

    __slots__ = ("levels", "maps")

    def __init__(self, levels, maps=()):
        self.levels = tuple(levels)
        self.maps = tuple(maps)
        if not self.levels:
            raise ValueError("a chain has at least one level")
        if len(self.maps) != len(self.levels) - 1:
            raise ValueError("need exactly n-1 maps for n levels")
        for i, f in enumerate(self.maps):
            if f.dom != self.levels[i + 1] or f.cod != self.levels[i]:
                raise ValueError("map %d has wrong dom/cod" % i)

    @classmethod
    def single(cls, s):
        return cls((s,))

    @property
    def length(self):
        return len(self.levels)

    @property
    def top(self):
        return self.levels[-1]

    def __eq__(self, other):
        return (isinstance(other, Chain) and self.levels == other.levels
                and self.maps == other.maps)

    def __hash__(self):
        return hash((self.levels, self.maps))

    def __repr__(self):
        return "Chain(%s)" % encode_chain(self)

    def is_bar(self):
        return len(self.top) == 0


class ChainIso:
    """Natural isomorphism of chains: levelwise bijections sigma_i with
    sigma_i . f_i = f'_i . sigma_{i+1}."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source, target, components):
        self.source = source
        self.target = target
        self.components = tuple(components)
        if source.length != target.length or len(self.components) != source.length:
            raise ValueError("length mismatch")
        for i, c in enumerate(self.components):
            if c.dom != source.levels[i] or c.cod != target.levels[i]:
                raise ValueError("component %d has wrong dom/cod" % i)
            if not c.is_bijection():
                raise ValueError("component %d is not a bijection" % i)
        for i in range(source.length - 1):
            left = self.components[i].compose(source.maps[i])
            right = target.maps[i].compose(self.components[i + 1])
            if left != right:
                raise ValueError("naturality fails at level %d" % (i + 1))

    @classmethod
    def identity(cls, chain):
        return cls(chain, chain, [SetMap.identity(s) for s in chain.levels])

    def compose(self, other):
        """self after other."""
        if other.target != self.source:
            raise ValueError("composition mismatch")
        return ChainIso(other.source, self.target,
                        [a.compose(b) for a, b in zip(self.components, other.components)])

    def inverse(self):
        return ChainIso(self.target, self.source,
                        [c.inverse() for c in self.components])

    @property
    def top(self):
        return self.components[-1]

    def __eq__(self, other):
        return (isinstance(other, ChainIso) and self.source == other.source
                and self.target == other.target and self.components == other.components)

    def __hash__(self):
        return hash((self.source, self.target, self.components))

    def __repr__(self):
        return "ChainIso(%s -> %s)" % (encode_chain(self.source), encode_chain(self.target))


# ---------------------------------------------------------------------------
# face / degeneracy / leaf operations

def face(chain, i):
    """Remove level i (1-indexed).  For i >= 2 the adjacent maps compose;
    for i = 1 the bottom level is dropped.  Valid for 1 <= i <= n-1, so
    the top level is never removed."""
    n = chain.length
    if n < 2 or not 1 <= i <= n - 1:
        raise ValueError("face index %d out of range for length %d" % (i, n))
    if i == 1:
        return Chain(chain.levels[1:], chain.maps[1:])
    lv = chain.levels[:i - 1] + chain.levels[i:]
    composed = chain.maps[i - 2].compose(chain.maps[i - 1])
    mp = chain.maps[:i - 2] + (composed,) + chain.maps[i:]
    return Chain(lv, mp)


def degeneracy(chain, i):
    """Double level i with an identity map between the copies; i = 0
    inserts the reserved one-point set at the bottom.  Valid for
    0 <= i <= n."""
    n = chain.length
    if not 0 <= i <= n:
        raise ValueError("degeneracy index %d out of range for length %d" % (i, n))
    if i == 0:
        bottom = chain.levels[0]
        if STAR in bottom and len(bottom) > 1:
            raise ValueError("reserved atom %s in use" % STAR_LABEL)
        return Chain((STAR_SET,) + chain.levels,
                     (SetMap.constant(bottom, STAR, STAR_SET),) + chain.maps)
    s = chain.levels[i - 1]
    lv = chain.levels[:i] + (s,) + chain.levels[i:]
    mp = chain.maps[:i - 1] + (SetMap.identity(s),) + chain.maps[i - 1:]
    return Chain(lv, mp)


def gamma(chain):
    """Leaf functor: forget all but the top level."""
    return chain.top


# bar (leafless) chains: ordinary chains with empty top level

class BarChain:
    """Chain whose top level is empty; the carrier of coalgebra structure."""

    __slots__ = ("chain",)

    def __init__(self, chain):
        if not chain.is_bar():
            raise ValueError("top level must be empty")
        self.chain = chain

    @classmethod
    def from_levels(cls, levels, maps=()):
        return cls(Chain(tuple(levels) + (EMPTY_SET,),
                         tuple(maps) + ((SetMap(EMPTY_SET, levels[-1], {}),)
                                        if levels else ())))

    def __eq__(self, other):
        return isinstance(other, BarChain) and self.chain == other.chain

    def __hash__(self):
        return hash(("bar", self.chain))

    def __repr__(self):
        return "BarChain(%s)" % encode_chain(self.chain)


def bar_face(bar, i):
    """Faces of leafless chains; 1 <= i <= n-1 on the stored length n.
    The empty top is preserved, so all of the usual face maps exist."""
    return BarChain(face(bar.chain, i))


def bar_degeneracy(bar, i):
    """Degeneracies of leafless chains, 0 <= i <= n; i = n doubles the
    empty top level."""
    return BarChain(degeneracy(bar.chain, i))


def bar_gamma(bar):
    return gamma(bar.chain)


# ---------------------------------------------------------------------------
# text encoding: [S1 | S2 | ... | Sn], levels "a,b,c", maps "p>a"

def encode_chain(chain):
    parts = [",".join(str(a.label) for a in chain.levels[0])]
    for i in range(1, chain.length):
        f = chain.maps[i - 1]
        parts.append(",".join("%s>%s" % (a.label, f(a).label)
                              for a in chain.levels[i]))
    return "[" + " | ".join(parts) + "]"


def _parse_label(s, allow_star):
    s = s.strip()
    if not s:
        raise ValueError("empty atom label")
    if s == STAR_LABEL and not allow_star:
        raise ValueError("reserved atom %s not allowed in input" % STAR_LABEL)
    if any(ch in s for ch in "|,>[]"):
        raise ValueError("bad atom label %r" % s)
    return Atom(int(s) if s.lstrip("-").isdigit() else s)


def parse_chain(text, allow_star=False):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError("chain must be bracketed: %r" % text)
    parts = [p.strip() for p in text[1:-1].split("|")]
    if not parts:
        raise ValueError("empty chain")
    first = [t for t in parts[0].split(",") if t.strip()]
    levels = [FinSet(_parse_label(t, allow_star) for t in first)]
    maps = []
    for part in parts[1:]:
        asg = {}
        for item in (t for t in part.split(",") if t.strip()):
            if ">" not in item:
                raise ValueError("map entry %r needs p>a form" % item)
            src, dst = item.split(">", 1)
            a = _parse_label(src, allow_star)
            b = _parse_label(dst, allow_star)
            if a in asg:
                raise ValueError("duplicate domain atom %r" % a)
            if b not in levels[-1]:
                raise ValueError("image %r not in previous level" % b)
            asg[a] = b
        dom = FinSet(asg.keys())
        maps.append(SetMap(dom, levels[-1], asg))
        levels.append(dom)
    return Chain(levels, maps)


# ---------------------------------------------------------------------------
# canonical forms
#
# A chain is a forest: the vertex set is the disjoint union of the levels,
# the parent of x in level i+1 is maps[i](x).  Chain isomorphisms are the
# level-preserving forest isomorphisms, so canonical forms come from the
# usual bottom-up subtree coding, run from the leaves down to the roots.

def _codes(chain, fix_top):
    """Per-level dict atom -> code.  Leaf codes are the atom keys when the
    top is fixed, a constant otherwise."""
    n = chain.length
    codes = [None] * n
    if fix_top:
        codes[n - 1] = {a: ("L", a.key) for a in chain.levels[n - 1]}
    else:
        codes[n - 1] = {a: ("L",) for a in chain.levels[n - 1]}
    for i in range(n - 2, -1, -1):
        f = chain.maps[i]
        up = codes[i + 1]
        codes[i] = {}
        for v in chain.levels[i]:
            children = sorted(up[a] for a in f.fiber(v))
            codes[i][v] = ("N", tuple(children))
    return codes


def _canonical_relabel(chain, fix_top):
    """Shared canonicalization: returns (canonical chain, witness iso).

    Levels are relabeled with integer atoms 1..k in a code-determined
    order (ties broken by atom order); with fix_top the top level keeps
    its atoms.
    """
    n = chain.length
    codes = _codes(chain, fix_top)
    # order level 1 by code, then sweep upwards grouping by parent order
    orders = [None] * n  # per level: list of original atoms in new order
    orders[0] = sorted(chain.levels[0], key=lambda v: (codes[0][v], v.key))
    for i in range(1, n):
        f = chain.maps[i - 1]
        pos = {v: p for p, v in enumerate(orders[i - 1])}
        orders[i] = sorted(chain.levels[i],
                           key=lambda v: (pos[f(v)], codes[i][v], v.key))
    new_levels = []
    comps = []
    for i in range(n):
        if fix_top and i == n - 1:
            new_levels.append(chain.levels[i])
            comps.append({v: v for v in chain.levels[i]})
        else:
            lv = FinSet.standard(len(orders[i]))
            new_levels.append(lv)
            comps.append({v: Atom(p + 1) for p, v in enumerate(orders[i])})
    new_maps = []
    for i in range(n - 1):
        f = chain.maps[i]
        asg = {comps[i + 1][v]: comps[i][f(v)] for v in chain.levels[i + 1]}
        new_maps.append(SetMap(new_levels[i + 1], new_levels[i], asg))
    canon = Chain(new_levels, new_maps)
    witness = ChainIso(chain, canon,
                       [SetMap(chain.levels[i], new_levels[i], comps[i])
                        for i in range(n)])
    return canon, witness


def canonical_chain(chain):
    """Canonical representative of the full isomorphism class, with the
    witnessing iso.  Idempotent on canonical chains."""
    return _canonical_relabel(chain, fix_top=False)


def canonical_chain_over_top(chain):
    """Canonical representative under isomorphisms whose top component is
    the identity; the top level is kept, lower levels are relabeled."""
    return _canonical_relabel(chain, fix_top=True)


def chain_automorphism_generators(chain):
    """Generators of the group of chain automorphisms fixing the top
    level pointwise.

    Only leafless subtrees can move: a vertex with a leaf descendant is
    pinned by the (distinct) leaf labels.  The generators swap adjacent
    equal-code leafless sibling subtrees, which generate the full group
    (an iterated wreath product of symmetric groups).
    """
    n = chain.length
    codes = _codes(chain, fix_top=True)
    has_leaf = [None] * n
    has_leaf[n - 1] = {a: True for a in chain.levels[n - 1]}
    for i in range(n - 2, -1, -1):
        f = chain.maps[i]
        has_leaf[i] = {v: any(has_leaf[i + 1][a] for a in f.fiber(v))
                       for v in chain.levels[i]}

    def subtree_match(level, u, v, mapping):
        # extend mapping with the canonical iso of the (equal-code) subtrees
        mapping[level][u] = v
        if level == n - 1:
            return
        fu = sorted(chain.maps[level].fiber(u),
                    key=lambda a: (codes[level + 1][a], a.key))
        fv = sorted(chain.maps[level].fiber(v),
                    key=lambda a: (codes[level + 1][a], a.key))
        for a, b in zip(fu, fv):
            subtree_match(level + 1, a, b, mapping)

    generators = []
    # sibling groups: roots of level 1 (common virtual parent), and fibers
    sib_groups = [(0, list(chain.levels[0]))]
    for i in range(n - 1):
        for v in chain.levels[i]:
            sib_groups.append((i + 1, list(chain.maps[i].fiber(v))))
    for level, group in sib_groups:
        if not group:
            continue
        by_code = {}
        for v in group:
            if not has_leaf[level][v]:
                by_code.setdefault(codes[level][v], []).append(v)
        for cls in by_code.values():
            cls.sort(key=lambda a: a.key)
            for u, v in zip(cls, cls[1:]):
                mapping = [{a: a for a in s} for s in chain.levels]
                fwd = [dict() for _ in range(n)]
                subtree_match(level, u, v, fwd)
                rev = [dict() for _ in range(n)]
                subtree_match(level, v, u, rev)
                for i in range(n):
                    mapping[i].update(fwd[i])
                    mapping[i].update(rev[i])
                generators.append(ChainIso(
                    chain, chain,
                    [SetMap(chain.levels[i], chain.levels[i], mapping[i])
                     for i in range(n)]))
    return generators


def chain_automorphisms_over_top(chain, max_order=100000):
    """The full group of chain automorphisms fixing the top level
    pointwise, as the closure of the sibling-swap generators."""
    generators = chain_automorphism_generators(chain)
    ident = ChainIso.identity(chain)
    elems = {_iso_key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in generators:
                b = g.compose(a)
                k = _iso_key(b)
                if k not in elems:
                    elems[k] = b
                    nxt.append(b)
        frontier = nxt
        if len(elems) > max_order:
            raise ValueError("automorphism group too large")
    return [elems[k] for k in sorted(elems)]


def _iso_key(iso):
    return tuple(tuple((a.key, c(a).key) for a in c.dom)
                 for c in iso.components)


# ---------------------------------------------------------------------------
# fiber enumeration

class FiberClass:
    """Isomorphism class of chains with a fixed top set, under isos whose
    top component is the identity.

    Carries generators of the over-top automorphism group; the full
    group (identity included) is materialized on first access, which is
    only sensible for small groups."""

    __slots__ = ("representative", "generators", "_autos")

    def __init__(self, representative, generators):
        self.representative = representative
        self.generators = tuple(generators)
        self._autos = None

    @property
    def automorphisms(self):
        if self._autos is None:
            self._autos = tuple(
                chain_automorphisms_over_top(self.representative))
        return self._autos

    def __repr__(self):
        return "FiberClass(%s, gens=%d)" % (
            encode_chain(self.representative), len(self.generators))


def _bounded_assignments(dom_elems, target, fiber_cap):
    """All total assignments dom -> target with every fiber of size at
    most fiber_cap (None for no cap)."""
    out = []
    counts = {t: 0 for t in target}
    acc = {}

    def rec(idx):
        if idx == len(dom_elems):
            out.append(dict(acc))
            return
        a = dom_elems[idx]
        for t in target:
            if fiber_cap is not None and counts[t] >= fiber_cap:
                continue
            counts[t] += 1
            acc[a] = t
            rec(idx + 1)
            del acc[a]
            counts[t] -= 1

    rec(0)
    return out


def enumerate_fiber(top, n, bounds, fiber_bounds=None):
    """All FiberClasses of chains c of length n with gamma(c) = top and
    level sizes |S_i| <= bounds[i-1] for i = 1..n-1, in a deterministic
    canonical order.

    ``fiber_bounds`` optionally caps, per level 1..n-1, the size of the
    fibers over that level's vertices (callers use the supports of the
    sequences being composed: larger fibers make every word vanish)."""
    if n < 1:
        raise ValueError("chain length must be >= 1")
    bounds = tuple(bounds)
    if len(bounds) != n - 1:
        raise ValueError("need %d bounds for levels 1..%d" % (n - 1, n - 1))
    if fiber_bounds is not None:
        fiber_bounds = tuple(fiber_bounds)
        if len(fiber_bounds) != n - 1:
            raise ValueError("need %d fiber bounds" % (n - 1))
    partial = {Chain.single(top)}
    for step in range(n - 1):
        lvl = n - 1 - step  # the level being created
        cap = bounds[lvl - 1]
        fcap = fiber_bounds[lvl - 1] if fiber_bounds is not None else None
        grown = set()
        for c in partial:
            bottom = c.levels[0]
            ks = range(0, cap + 1) if len(bottom) == 0 else range(1, cap + 1)
            for k in ks:
                target = FinSet.standard(k)
                for asg in _bounded_assignments(bottom.elems, target.elems, fcap):
                    g = SetMap(bottom, target, asg)
                    grown.add(canonical_chain_over_top(
                        Chain((target,) + c.levels, (g,) + c.maps))[0])
        partial = grown
    reps = sorted(partial, key=encode_chain)
    return [FiberClass(r, chain_automorphism_generators(r)) for r in reps]


def classify_over_top(chain, class_index):
    """Locate the FiberClass of a chain among enumerated classes.

    ``class_index`` maps canonical representatives (chains) to indices.
    Returns (index, iso chain -> representative).
    """
    rep, wit = canonical_chain_over_top(chain)
    if rep not in class_index:
        raise KeyError("chain %s outside the enumerated classes" % encode_chain(chain))
    return class_index[rep], wit

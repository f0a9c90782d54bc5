"""Symmetric sequences valued in free Z-modules.

A symmetric sequence assigns to every arity n a free Z-module with an
action of the symmetric group by signed basis permutations, stored
skeletally on the standard sets {1..n} and transported along arbitrary
bijections of finite sets by comparing canonical orders.  Actions are
presented by the adjacent transpositions (k, k+1).
"""

from __future__ import annotations

import json

from .zmodule import (
    FreeMod, LinMap, SignedPerm, UNIT_MOD, ZERO_MOD,
)


class SymSeq:
    """Arity-indexed free Z-modules with signed symmetric group actions,
    supported in arities 0..max_arity (zero beyond)."""

    __slots__ = ("name", "max_arity", "_values", "_gens", "_perm_cache")

    def __init__(self, values, gens, name="seq"):
        self.name = name
        self._values = tuple(values)
        self.max_arity = len(self._values) - 1
        self._gens = tuple(tuple(g) for g in gens)
        if len(self._gens) != len(self._values):
            raise ValueError("values and generator lists must align")
        for n, (v, gs) in enumerate(zip(self._values, self._gens)):
            if len(gs) != max(n - 1, 0):
                raise ValueError("arity %d needs %d generators" % (n, max(n - 1, 0)))
            for g in gs:
                if len(g) != v.rank:
                    raise ValueError("generator size mismatch at arity %d" % n)
        self._perm_cache = {}

    def value(self, n):
        if 0 <= n <= self.max_arity:
            return self._values[n]
        return ZERO_MOD

    def gens(self, n):
        if 0 <= n <= self.max_arity:
            return self._gens[n]
        return ()

    def max_support(self):
        """Largest arity with a nonzero value (0 for the zero sequence)."""
        for n in range(self.max_arity, -1, -1):
            if self._values[n].rank:
                return n
        return 0

    def is_zero_at(self, n):
        return self.value(n).rank == 0

    def perm_signed(self, n, images):
        """Signed permutation representing the permutation of {0..n-1}
        with the given one-line images, via its expression in adjacent
        transpositions."""
        images = tuple(images)
        key = (n, images)
        if key in self._perm_cache:
            return self._perm_cache[key]
        rank = self.value(n).rank
        acc = SignedPerm.identity(rank)
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

    def __eq__(self, other):
        return (isinstance(other, SymSeq) and self._values == other._values
                and self._gens == other._gens)

    def __hash__(self):
        return hash((self._values, self._gens))

    def __repr__(self):
        return "SymSeq(%s, N=%d)" % (self.name, self.max_arity)


def counit_seq():
    """The sequence that is the monoidal unit in arity 1 and zero elsewhere."""
    return SymSeq([ZERO_MOD, UNIT_MOD], [(), ()], name="unit")


def coefficient_seq(mod, name="coeff"):
    """An object of the ambient category viewed as a sequence concentrated
    in arity 0 (used as the coefficient of a coalgebra)."""
    return SymSeq([mod], [()], name=name)


def evaluate(seq, s):
    """Value of the sequence at an arbitrary finite set: the standard
    module with basis tags decorated by the set."""
    labels = tuple(a.label for a in s)
    base = seq.value(len(s))
    return FreeMod(tuple(("@", labels, t) for t in base.basis))


def transport(seq, bij):
    """Functorial transport along a bijection of finite sets."""
    if not bij.is_bijection():
        raise ValueError("transport needs a bijection")
    s, t = bij.dom, bij.cod
    n = len(s)
    images = tuple(t.position(bij(a)) for a in s)
    sp = seq.perm_signed(n, images)
    return LinMap(evaluate(seq, s), evaluate(seq, t), sp.to_matrix())


def check_action(seq):
    """Verify the adjacent-transposition relations at every arity; returns
    a list of violation records (empty means the action is valid)."""
    violations = []
    for n in range(seq.max_arity + 1):
        gs = seq.gens(n)
        rank = seq.value(n).rank
        ident = SignedPerm.identity(rank)
        for i, g in enumerate(gs):
            if g * g != ident:
                violations.append({"arity": n, "relation": "involution",
                                   "generator": i + 1})
        for i in range(len(gs) - 1):
            a, b = gs[i], gs[i + 1]
            if a * b * a != b * a * b:
                violations.append({"arity": n, "relation": "braid",
                                   "generator": i + 1})
        for i in range(len(gs)):
            for j in range(i + 2, len(gs)):
                if gs[i] * gs[j] != gs[j] * gs[i]:
                    violations.append({"arity": n, "relation": "commutation",
                                       "generator": (i + 1, j + 1)})
    return violations


class SeqMorphism:
    """Arity-wise linear map of symmetric sequences; must intertwine the
    group actions."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source, target, components):
        self.source = source
        self.target = target
        self.components = tuple(components)
        n = max(source.max_arity, target.max_arity)
        if len(self.components) != n + 1:
            raise ValueError("need one component per arity 0..%d" % n)
        for k, f in enumerate(self.components):
            if f.dom != source.value(k) or f.cod != target.value(k):
                raise ValueError("component %d has wrong dom/cod" % k)

    def check_equivariance(self, full_up_to=4):
        """Equivariance on the adjacent transpositions, and on every group
        element for small arities as a redundancy."""
        import itertools
        for n in range(len(self.components)):
            f = self.components[n].mat
            for i, g in enumerate(self.source.gens(n)):
                h = self.target.gens(n)[i]
                if f @ g.to_matrix() != h.to_matrix() @ f:
                    return False
            if 2 <= n <= full_up_to:
                for perm in itertools.permutations(range(n)):
                    g = self.source.perm_signed(n, perm)
                    h = self.target.perm_signed(n, perm)
                    if f @ g.to_matrix() != h.to_matrix() @ f:
                        return False
        return True


# ---------------------------------------------------------------------------
# JSON serialization
#
# {"max_arity": N,
#  "arity": {"<n>": {"basis": ["tag", ...],
#                    "generators": [[{"to": j, "sign": s}, ...], ...]}}}
#
# Generator k (0-based list position) is the transposition (k+1, k+2).

def symseq_to_json(seq, stringify=None):
    if stringify is None:
        stringify = lambda t: t if isinstance(t, str) else repr(t)
    arity = {}
    for n in range(seq.max_arity + 1):
        mod = seq.value(n)
        tags = [stringify(t) for t in mod.basis]
        if len(set(tags)) != len(tags):
            raise ValueError("stringified tags collide at arity %d" % n)
        gens = [[{"to": g.images[i], "sign": g.signs[i]} for i in range(mod.rank)]
                for g in seq.gens(n)]
        arity[str(n)] = {"basis": tags, "generators": gens}
    return {"max_arity": seq.max_arity, "arity": arity}


def symseq_from_json(data, name="seq"):
    n_max = data["max_arity"]
    values = []
    gens = []
    for n in range(n_max + 1):
        block = data["arity"].get(str(n), {"basis": [], "generators": []})
        mod = FreeMod(tuple(block["basis"]))
        values.append(mod)
        want = max(n - 1, 0)
        raw = block["generators"]
        if len(raw) != want:
            raise ValueError("arity %d needs %d generators, got %d"
                             % (n, want, len(raw)))
        gs = []
        for entry in raw:
            if len(entry) != mod.rank:
                raise ValueError("generator length mismatch at arity %d" % n)
            gs.append(SignedPerm(tuple(e["to"] for e in entry),
                                 tuple(e["sign"] for e in entry)))
        gens.append(tuple(gs))
    return SymSeq(values, gens, name=name)


def symseq_dumps(seq, stringify=None):
    return json.dumps(symseq_to_json(seq, stringify), sort_keys=True,
                      separators=(",", ":"))


def symseq_loads(text, name="seq"):
    return symseq_from_json(json.loads(text), name=name)

import itertools

import pytest

from coopkit.wreath import (
    Atom, BarChain, Chain, ChainIso, EMPTY_SET, FinSet, FiberClass, SetMap,
    STAR, STAR_SET, bar_degeneracy, bar_face, bar_gamma, canonical_chain,
    canonical_chain_over_top, chain_automorphisms_over_top, classify_over_top,
    degeneracy, encode_chain, enumerate_fiber, face, gamma, parse_chain,
)


def chain_of(text):
    return parse_chain(text)


def fs(*labels):
    return FinSet.of(*labels)


# --- face / degeneracy / gamma examples --------------------------------------

def test_face_composes_middle_level():
    c = chain_of("[x | a>x,b>x | p>a,q>a,r>b]")
    out = face(c, 2)
    assert out == chain_of("[x | p>x,q>x,r>x]")


def test_face_drops_bottom_level():
    assert face(chain_of("[a,b | p>a,q>b]"), 1) == chain_of("[p,q]")
    c3 = chain_of("[x | a>x,b>x | p>a,q>a,r>b]")
    assert face(c3, 1) == chain_of("[a,b | p>a,q>a,r>b]")


def test_degeneracy_zero_inserts_point():
    out = degeneracy(chain_of("[i,j,k]"), 0)
    assert out.levels[0] == STAR_SET
    assert out.levels[1] == fs("i", "j", "k")
    assert all(out.maps[0](a) == STAR for a in fs("i", "j", "k"))


def test_degeneracy_doubles_level():
    out = degeneracy(chain_of("[i,j,k]"), 1)
    assert out.levels == (fs("i", "j", "k"), fs("i", "j", "k"))
    assert out.maps[0] == SetMap.identity(fs("i", "j", "k"))

    c = chain_of("[x | a>x,b>x]")
    out2 = degeneracy(c, 1)
    assert out2.levels == (fs("x"), fs("x"), fs("a", "b"))
    assert out2.maps[0] == SetMap.identity(fs("x"))
    assert out2.maps[1] == c.maps[0]


def test_degeneracy_rejects_reserved_atom_in_user_level():
    bad = Chain((FinSet((STAR, Atom("a"))),))
    with pytest.raises(ValueError):
        degeneracy(bad, 0)


def test_gamma_returns_top():
    c = parse_chain("[i1,i2,i3 | j1>i1,j2>i1,j3>i1,k1>i3,k2>i3]")
    assert gamma(c) == fs("j1", "j2", "j3", "k1", "k2")
    assert gamma(chain_of("[a,b]")) == fs("a", "b")
    assert gamma(chain_of("[x | a>x | ]")) == EMPTY_SET


# --- simplicial relations (exhaustive on small chains) ------------------------

def small_chains(max_len=4, max_size=2):
    """All chains with levels drawn from standard sets of size <= max_size."""
    out = []
    seeds = [Chain.single(FinSet.standard(k)) for k in range(0, max_size + 1)]
    frontier = seeds
    out.extend(frontier)
    for _ in range(max_len - 1):
        grown = []
        for c in frontier:
            bottom = c.levels[0]
            for k in range(0 if len(bottom) == 0 else 1, max_size + 1):
                tgt = FinSet.standard(k)
                if len(bottom) == 0:
                    gs = [SetMap(bottom, tgt, {})]
                else:
                    gs = [SetMap(bottom, tgt, dict(zip(bottom.elems, img)))
                          for img in itertools.product(tgt.elems, repeat=len(bottom))]
                grown.extend(Chain((tgt,) + c.levels, (g,) + c.maps) for g in gs)
        out.extend(grown)
        frontier = grown
    return out


ALL_SMALL = small_chains(max_len=4, max_size=2)


def test_face_face_identity():
    for c in ALL_SMALL:
        n = c.length
        for j in range(1, n):
            for i in range(1, j):
                if n < 3:
                    continue
                assert face(face(c, j), i) == face(face(c, i), j - 1)


def test_degeneracy_degeneracy_identity():
    for c in ALL_SMALL:
        if c.length > 3:
            continue
        n = c.length
        for j in range(0, n + 1):
            for i in range(0, j + 1):
                assert degeneracy(degeneracy(c, j), i) == degeneracy(degeneracy(c, i), j + 1)


def test_face_degeneracy_identities():
    for c in ALL_SMALL:
        n = c.length
        for j in range(0, n + 1):
            d = degeneracy(c, j)
            for i in range(1, n + 1):
                got = face(d, i)
                if i == j or i == j + 1:
                    assert got == c
                elif i < j:
                    assert got == degeneracy(face(c, i), j - 1)
                else:  # i > j + 1
                    if i - 1 <= n - 1:
                        assert got == degeneracy(face(c, i - 1), j)


def test_gamma_commutes_with_faces_and_degeneracies():
    for c in ALL_SMALL:
        n = c.length
        for i in range(1, n):
            assert gamma(face(c, i)) == gamma(c)
        for i in range(0, n):
            assert gamma(degeneracy(c, i)) == gamma(c)
        # i = n doubles the top; the new top is the same set
        assert gamma(degeneracy(c, n)) == gamma(c)


# --- bar chains ---------------------------------------------------------------

def test_bar_face_to_trivial():
    b = BarChain(parse_chain("[a,b | ]"))
    out = bar_face(b, 1)
    assert out.chain == Chain((EMPTY_SET,))


def test_bar_degeneracy_doubles_empty_top():
    b = BarChain(parse_chain("[a,b | ]"))
    out = bar_degeneracy(b, 2)
    assert out.chain.levels == (fs("a", "b"), EMPTY_SET, EMPTY_SET)


def test_bar_face_composes_through_empty():
    b = BarChain(parse_chain("[x | a>x,b>x | ]"))
    out = bar_face(b, 2)
    assert out.chain == parse_chain("[x | ]")


def test_bar_gamma_is_empty():
    b = BarChain(parse_chain("[x | a>x,b>x | ]"))
    assert bar_gamma(b) == EMPTY_SET


# --- encoding round trip -------------------------------------------------------

def test_chain_encoding_roundtrip():
    for text in ["[x | a>x,b>x | p>a,q>a,r>b]", "[a,b]", "[x | ]",
                 "[1,2 | 3>1,4>1 | ]"]:
        c = parse_chain(text)
        assert encode_chain(c) == text
        assert parse_chain(encode_chain(c)) == c


def test_parse_rejects_reserved_atom():
    with pytest.raises(ValueError):
        parse_chain("[⋆ | a>⋆]")


# --- canonical forms ------------------------------------------------------------

def test_canonical_chain_idempotent():
    for c in ALL_SMALL:
        canon, wit = canonical_chain(c)
        assert wit.source == c and wit.target == canon
        again, wit2 = canonical_chain(canon)
        assert again == canon


def test_canonical_chain_identifies_iso_chains():
    a = parse_chain("[b,a | q>b,p>a]")
    b = parse_chain("[u,v | s>u,t>v]")
    assert canonical_chain(a)[0] == canonical_chain(b)[0]


def iso_classes_bruteforce(chains):
    """Group chains by exhaustive isomorphism search."""
    def isomorphic(c, d):
        if c.length != d.length:
            return False
        if any(len(a) != len(b) for a, b in zip(c.levels, d.levels)):
            return False
        spaces = [itertools.permutations(d.levels[i].elems)
                  for i in range(c.length)]
        for assign in itertools.product(*spaces):
            comps = [SetMap(c.levels[i], d.levels[i],
                            dict(zip(c.levels[i].elems, assign[i])))
                     for i in range(c.length)]
            try:
                ChainIso(c, d, comps)
                return True
            except ValueError:
                continue
        return False

    classes = []
    for c in chains:
        for cls in classes:
            if isomorphic(c, cls[0]):
                cls.append(c)
                break
        else:
            classes.append([c])
    return classes


def test_canonical_chain_matches_bruteforce_iso():
    chains = [c for c in small_chains(max_len=3, max_size=2) if c.length == 3]
    classes = iso_classes_bruteforce(chains)
    for cls in classes:
        canons = {canonical_chain(c)[0] for c in cls}
        assert len(canons) == 1
    # distinct classes get distinct canonical forms
    reps = [canonical_chain(cls[0])[0] for cls in classes]
    assert len(set(reps)) == len(classes)


# --- fiber enumeration -----------------------------------------------------------

def fiber_oracle(top, bound):
    """Brute force: all maps top -> [k] for k <= bound, modulo bijections
    of the target; returns canonical class keys (partition, empties)."""
    keys = set()
    for k in range(0 if len(top) == 0 else 1, bound + 1):
        if len(top) == 0:
            keys.add((frozenset(), k))
            continue
        for img in itertools.product(range(k), repeat=len(top)):
            fibers = {}
            for a, j in zip(top.elems, img):
                fibers.setdefault(j, []).append(a)
            part = frozenset(frozenset(v) for v in fibers.values())
            keys.add((part, k - len(fibers)))
    return keys


def class_key(fc):
    rep = fc.representative
    f = rep.maps[0]
    part = frozenset(frozenset(f.fiber(b).elems) for b in rep.levels[0]
                     if len(f.fiber(b)) > 0)
    empties = sum(1 for b in rep.levels[0] if len(f.fiber(b)) == 0)
    return (part, empties)


def test_enumerate_fiber_two_elements_bound_two():
    classes = enumerate_fiber(fs(1, 2), 2, [2])
    assert len(classes) == 3
    assert {class_key(c) for c in classes} == fiber_oracle(fs(1, 2), 2)
    for c in classes:
        assert len(c.automorphisms) == 1


def test_enumerate_fiber_two_elements_bound_three():
    classes = enumerate_fiber(fs(1, 2), 2, [3])
    assert len(classes) == 5
    assert {class_key(c) for c in classes} == fiber_oracle(fs(1, 2), 3)
    by_key = {class_key(c): c for c in classes}
    # the class with fibers {1,2}, empty, empty has the swap of empties
    two_empty = by_key[(frozenset({frozenset(fs(1, 2).elems)}), 2)]
    assert len(two_empty.automorphisms) == 2


def test_enumerate_fiber_empty_top():
    classes = enumerate_fiber(EMPTY_SET, 2, [1])
    assert len(classes) == 2
    lens = sorted(len(c.representative.levels[0]) for c in classes)
    assert lens == [0, 1]


def test_enumerate_fiber_three_levels_exhaustive():
    # cross-check a 3-level enumeration against dedup of raw towers
    top = fs(1, 2)
    classes = enumerate_fiber(top, 3, [2, 2])
    raw = set()
    for c in small_chains(max_len=3, max_size=2):
        if c.length == 3 and c.top == top:
            raw.add(canonical_chain_over_top(c)[0])
    assert {c.representative for c in classes} == raw
    # classes are pairwise non-isomorphic over the top
    reps = [c.representative for c in classes]
    assert len({canonical_chain_over_top(r)[0] for r in reps}) == len(reps)


def test_automorphisms_form_group_fixing_top():
    for fc in enumerate_fiber(fs(1, 2, 3), 2, [3]):
        autos = fc.automorphisms
        assert any(all(c(a) == a for c in g.components for a in c.dom)
                   for g in autos)  # identity present
        for g in autos:
            assert all(g.top(a) == a for a in fc.representative.top)
            for h in autos:
                assert g.compose(h) in autos


def test_classify_over_top_transport():
    classes = enumerate_fiber(fs(1, 2), 2, [3])
    index = {c.representative: i for i, c in enumerate(classes)}
    # a relabeled chain lands in the right class with a valid witness
    c = parse_chain("[u,v | 1>u,2>u]")
    idx, wit = classify_over_top(c, index)
    assert classes[idx].representative == canonical_chain_over_top(c)[0]
    assert wit.source == c

"""Shared oracles for the test suite, kept independent of the code paths
they check."""

import itertools

from coopkit.wreath import FinSet
from coopkit.zmodule import column_hermite
from coopkit.compose import closed_form_compose, kan_extension


def decomp_orbit_rank_oracle(A, B, n):
    """Brute-force rank of the two-fold composition product at arity n:
    enumerate ordered decompositions of {1..n}, act with the symmetric
    group on the direct sum of the word modules by explicit signed
    permutation matrices, and count invariants via orbit/sign analysis.

    Works for word factors of any rank by running the signed-orbit count
    on the full basis of the direct sum.
    """
    from coopkit.symseq import evaluate
    base = FinSet.standard(n)
    total = 0
    for k in range(0, A.max_support() + 1):
        if A.value(k).rank == 0:
            continue
        outer = FinSet.standard(k)
        if k == 0:
            decomps = [()] if n == 0 else []
        else:
            decomps = []
            for img in itertools.product(range(k), repeat=n):
                fibers = [[] for _ in range(k)]
                for a, j in zip(base.elems, img):
                    fibers[j].append(a)
                decomps.append(tuple(FinSet(f) for f in fibers))
        # basis of the direct sum: (decomp index, A-basis index, B-indices)
        basis = []
        for di, d in enumerate(decomps):
            branks = [evaluate(B, r).rank for r in d]
            if any(r == 0 for r in branks):
                continue
            for ai in range(A.value(k).rank):
                for bidx in itertools.product(*[range(r) for r in branks]):
                    basis.append((di, ai, bidx))
        if not basis:
            continue
        index = {b: i for i, b in enumerate(basis)}

        def act(sigma, elt):
            di, ai, bidx = elt
            d = decomps[di]
            moved_d = tuple(d[sigma.index(i)] for i in range(k))
            moved_b = tuple(bidx[sigma.index(i)] for i in range(k))
            sp = A.perm_signed(k, tuple(sigma))
            return (decomps.index(moved_d), sp.images[ai], moved_b), sp.signs[ai]

        # signed orbit count over the full symmetric group
        seen = set()
        rank = 0
        perms = list(itertools.permutations(range(k))) or [()]
        for b in basis:
            if b in seen:
                continue
            orbit = {}
            alive = True
            for sigma in perms:
                img, s = act(sigma, b)
                if img in orbit and orbit[img] != s:
                    alive = False
                orbit[img] = s
            seen.update(orbit)
            if alive:
                rank += 1
        total += rank
    return total


def compare_kan_closed_form(A, B, n):
    """Equal ranks and bit-exact canonical invariant bases between the
    Kan-extension route and the closed-form route, matched class by
    class through the decomposition of each canonical representative."""
    kan = kan_extension([A, B], FinSet.standard(n))
    cf = closed_form_compose(A, B, n)
    if kan.rank != cf.rank:
        return False, "rank %d vs %d" % (kan.rank, cf.rank)
    blocks = {b.k: b for b in cf.blocks}
    matched_cf = 0
    for i, fc in enumerate(kan.classes):
        rep = fc.representative
        f = rep.maps[0]
        k = len(rep.levels[0])
        if k not in blocks:
            return False, "no closed-form block for k=%d" % k
        block = blocks[k]
        decomp = tuple(f.fiber(b) for b in rep.levels[0])
        if decomp not in block.decomps:
            return False, "decomposition missing for class %d" % i
        j = block.decomps.index(decomp)
        # word tags agree on the nose; restrict closed-form invariants
        word = block.words[j]
        kan_word = kan.words[i]
        if word.basis != kan_word.basis:
            return False, "word bases differ for class %d" % i
        row_of = {block.prod.index[("+", j, t)]: kan_word.index[t]
                  for t in word.basis}
        restricted = []
        for col in block.incl.mat.cols:
            newcol = {row_of[r]: v for r, v in col.items() if r in row_of}
            restricted.append(newcol)
        lhs = column_hermite(restricted, kan_word.rank)
        rhs = [kan.incls[i].mat.column(c)
               for c in range(kan.incls[i].mat.ncols)]
        rhs = column_hermite(rhs, kan_word.rank)
        if lhs != rhs:
            return False, "invariant bases differ for class %d" % i
        matched_cf += kan.invs[i].rank
    if matched_cf != cf.rank:
        return False, "unmatched closed-form invariants"
    return True, "ok"

"""Seeded random symmetric sequences for oracle comparisons.

Generator tuples are drawn from the exhaustively enumerated set of valid
symmetric-group representations by signed basis permutations, so every
sampled sequence satisfies the action relations by construction.
"""

from __future__ import annotations

import itertools

from .zmodule import FreeMod, SignedPerm
from .symseq import SymSeq

_VALID_CACHE = {}


def all_signed_perms(rank):
    out = []
    for images in itertools.permutations(range(rank)):
        for signs in itertools.product((1, -1), repeat=rank):
            out.append(SignedPerm(images, signs))
    return out


def valid_generator_tuples(n, rank):
    """All (n-1)-tuples of signed permutations satisfying the symmetric
    group relations on adjacent transpositions."""
    key = (n, rank)
    if key in _VALID_CACHE:
        return _VALID_CACHE[key]
    if n <= 1:
        result = [()]
    else:
        ident = SignedPerm.identity(rank)
        involutions = [p for p in all_signed_perms(rank) if p * p == ident]
        result = []
        for tup in itertools.product(involutions, repeat=n - 1):
            ok = True
            for i in range(len(tup) - 1):
                a, b = tup[i], tup[i + 1]
                if a * b * a != b * a * b:
                    ok = False
                    break
            if ok:
                for i in range(len(tup)):
                    for j in range(i + 2, len(tup)):
                        if tup[i] * tup[j] != tup[j] * tup[i]:
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                result.append(tup)
    _VALID_CACHE[key] = result
    return result


def random_symseq(rng, name, max_arity=3, max_rank=2, allow_empty_arity=True):
    """A random symmetric sequence with valid signed actions.

    Ranks are uniform in 0..max_rank per arity; arity 0 is suppressed
    unless allow_empty_arity.
    """
    values = []
    gens = []
    for n in range(max_arity + 1):
        if n == 0 and not allow_empty_arity:
            rank = 0
        else:
            rank = rng.randint(0, max_rank)
        values.append(FreeMod(tuple((name, n, i) for i in range(rank))))
        gens.append(rng.choice(valid_generator_tuples(n, rank)))
    return SymSeq(values, gens, name=name)

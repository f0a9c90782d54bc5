import random

import pytest

from coopkit.wreath import (
    Chain, EMPTY_SET, FinSet, SetMap, encode_chain, parse_chain,
)
from coopkit.zmodule import FreeMod, IntMatrix, LinMap, UNIT_MOD, ZERO_MOD
from coopkit.symseq import SymSeq, evaluate
from coopkit.compose import StructuralError, eval_tensor
from coopkit.cooperad import (
    CooperadStructure, Tower, cooperad_from_json, cooperad_to_json,
    enumerate_canonical_two_chains, tilde_delta_at, trivial_cooperad,
    verify_cooperad, verify_cosimplicial, verify_paren_compat,
)
from coopkit.comodule import (
    Comodule, coalgebra_delta_n, comodule_delta_n, square_zero_coalgebra,
    verify_coalgebra, verify_comodule,
)
from coopkit.graphco import (
    dirgraph_cooperad, graph_cooperad, graph_cooperad_no_zero_rule,
)


# --- structure basics ----------------------------------------------------------

def test_trivial_cooperad_verifies():
    co = trivial_cooperad()
    assert verify_cooperad(co, 3).ok
    assert verify_cosimplicial(co, 3, 3).ok
    assert verify_paren_compat(co, 2, square_max=2).ok


def test_delta_on_zero_module_is_zero():
    co = trivial_cooperad()
    c = parse_chain("[x | a>x,b>x]")
    assert co.delta(c).is_zero()


def test_tilde_delta_reduces_to_cocomposition_on_two_chains():
    co = graph_cooperad(3)
    c = parse_chain("[x,y | a>x,b>x,c>y]")
    # n = 2, i = 1 is the cocomposition itself up to the one-factor
    # word identification on the source
    lhs = tilde_delta_at(co, 1, c)
    src_word = eval_tensor([co.seq], Chain.single(c.top))
    direct = co.delta(c)
    assert lhs.mat == direct.mat


def test_graph_cooperad_verify_small():
    co = graph_cooperad(3)
    rep = verify_cooperad(co, 3)
    assert rep.ok
    checks = {e["check"] for e in rep.entries}
    assert {"coassociativity", "counit-left", "counit-right",
            "naturality"} <= checks


def test_dirgraph_cooperad_verify_small():
    assert verify_cooperad(dirgraph_cooperad(3), 3).ok


def test_cosimplicial_graph_small():
    assert verify_cosimplicial(graph_cooperad(3), 3, 3).ok


# --- coface / codegeneracy -------------------------------------------------------

def test_coface_commutes_with_projections_graph():
    co = graph_cooperad(3)
    tower = co.tower(FinSet.standard(3))
    d = tower.coface(2, 1)
    kan2 = tower.kan(2)
    src = tower.kan(1)
    from coopkit.wreath import face
    for i, fc in enumerate(kan2.classes):
        rep = fc.representative
        lhs = kan2.proj_word(i) @ d
        rhs = tilde_delta_at(co, 1, rep) @ src.iota(face(rep, 1))
        assert lhs == rhs


def test_codegen_counit_composites_are_identity():
    co = graph_cooperad(3)
    for m in (1, 2, 3):
        tower = co.tower(FinSet.standard(m))
        d = tower.coface(2, 1)
        for j in (0, 1):
            comp = tower.codegen(1, j) @ d
            assert comp.mat == IntMatrix.identity(tower.kan(1).rank)


def test_counit_level_on_graph():
    co = graph_cooperad(2)
    tower = co.tower(FinSet.standard(1))
    eps = tower.codegen(0, 0)
    assert eps.mat == IntMatrix.identity(1)


def test_coface_structural_error_on_non_natural_table():
    # T(0) has rank two; the cocomposition at ([2] <- empty) hits a
    # non-symmetric word, so no integer solution exists against the
    # invariants of the swap
    seq = SymSeq([FreeMod(("z1", "z2")), ZERO_MOD, FreeMod(("t",))],
                 [(), (), (__import__("coopkit.zmodule",
                                      fromlist=["SignedPerm"]).SignedPerm((0,)),)],
                 name="T")
    bad_chain = Chain((FinSet.standard(2), EMPTY_SET),
                      (SetMap(EMPTY_SET, FinSet.standard(2), {}),))
    src = evaluate(seq, EMPTY_SET)
    tv = eval_tensor([seq, seq], bad_chain)
    t = evaluate(seq, FinSet.standard(2)).basis[0]
    z1 = ("@", (), "z1")
    z2 = ("@", (), "z2")
    bad = LinMap.from_tag_entries(src, tv.value, [((t, z1, z2), z1, 1)])

    def rule(canon):
        if canon == bad_chain:
            return bad
        s = evaluate(seq, canon.top)
        w = eval_tensor([seq, seq], canon)
        return LinMap.zero(s, w.value)

    counit = LinMap.zero(evaluate(seq, FinSet.standard(1)), UNIT_MOD)
    coop = CooperadStructure(seq, rule=rule, counit=counit, name="bad")
    tower = coop.tower(EMPTY_SET)
    with pytest.raises(StructuralError):
        tower.coface(2, 1)


# --- negative controls -------------------------------------------------------------

def corrupt_sign(coop, seed, max_set=3):
    """Flip the sign of one nonzero cocomposition entry (seeded)."""
    rng = random.Random(seed)
    chains = [c for c in enumerate_canonical_two_chains(
        max_set, coop.seq.max_support())
        if not coop.delta(c).is_zero()]
    target = rng.choice(chains)
    entry = rng.choice(coop.delta(target).mat.sorted_entries())
    table = {target: coop.delta(target)
             + LinMap.from_entries(coop.delta(target).dom,
                                   coop.delta(target).cod,
                                   [(entry[0], entry[1], -2 * entry[2])])}
    original = coop.delta

    def rule(canon):
        return original(canon)

    out = CooperadStructure(coop.seq, rule=rule, counit=coop.counit,
                            name=coop.name + "-signflip")
    out.table.update(table)
    return out, encode_chain(target)


def test_negative_control_sign_flip():
    co, where = corrupt_sign(dirgraph_cooperad(3), seed=7)
    rep = verify_cooperad(co, 3)
    assert not rep.ok
    assert rep.failures()[0].get("witness") is not None


def test_negative_control_dropped_zero_case():
    # the corruption is invisible at three labels (its junk images happen
    # to be stable under all the available symmetries) and is caught at
    # four
    co = graph_cooperad_no_zero_rule(4)
    rep = verify_cooperad(co, 4)
    assert not rep.ok
    assert rep.failures()[0].get("witness") is not None


def test_negative_control_wrong_counit():
    base = graph_cooperad(3)
    wrong = CooperadStructure(
        base.seq, rule=base.delta,
        counit=base.counit.scale(2), name="gr-counit2")
    rep = verify_cooperad(wrong, 2)
    assert not rep.ok
    assert any(e["check"].startswith("counit") for e in rep.failures())
    cos = verify_cosimplicial(wrong, 2, 2)
    assert any(e["check"] == "mixed-identity" for e in cos.failures())


# --- comodules and coalgebras --------------------------------------------------------

def test_cooperad_is_comodule_over_itself():
    co = graph_cooperad(3)
    m = Comodule(co, co.seq, rule=lambda canon: co.delta(canon), name="self")
    assert verify_comodule(m, 3).ok
    mat, tower = comodule_delta_n(m, 3, FinSet.standard(2))
    assert mat.dom == tower.kan(1).value


def test_square_zero_coalgebra_verifies_and_paths_agree():
    co = graph_cooperad(3)
    coalg = square_zero_coalgebra(co)
    assert verify_coalgebra(coalg, 3).ok
    for n in (1, 2, 3):
        mat, tower = coalgebra_delta_n(coalg, n)
        assert mat.dom == tower.kan(1).value
    # the base case is the coaction itself
    mat2, tower2 = coalgebra_delta_n(coalg, 2)
    assert mat2 == tower2.coface(2, 1)


def test_coalgebra_corruption_detected():
    # replace the symmetric arity-2 coaction value by the asymmetric word
    # (edge (x) x (x) y): equivariance fails, and building the iterated
    # coaction hits an unsolvable cone constraint
    co = graph_cooperad(3)
    good = square_zero_coalgebra(co)
    from coopkit.comodule import CoalgebraObj, _bar_two_chain
    std2 = _bar_two_chain(FinSet.standard(2))
    tv2 = eval_tensor([co.seq, good.coeff], std2)
    dom = evaluate(good.coeff, EMPTY_SET)
    edge = evaluate(co.seq, FinSet.standard(2)).basis[0]
    x, y = dom.basis
    table = dict(good.table)
    table[2] = LinMap.from_tag_entries(dom, tv2.value, [((edge, x, y), y, 1)])
    bad = CoalgebraObj(co, good.carrier, table, name="bad")
    rep = verify_coalgebra(bad, 3)
    assert not rep.ok
    assert any(e["check"] == "equivariance" for e in rep.failures())
    with pytest.raises(StructuralError):
        coalgebra_delta_n(bad, 2)


def test_cooperad_json_negative_control_roundtrip():
    import json
    co = graph_cooperad(3)
    data = cooperad_to_json(co)
    # corrupt the counit: send the one-vertex graph to 2
    data["counit"]["entries"][0][2] = 2
    bad = cooperad_from_json(json.loads(json.dumps(data)))
    rep = verify_cooperad(bad, 2)
    assert not rep.ok
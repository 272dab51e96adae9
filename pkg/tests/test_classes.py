
import pytest

from fraisse.classes import (
    BUILTIN_NAMES,
    ClassSpec,
    MembershipPredicate,
    builtin,
    check_fully_relational,
    check_property_preservation,
    check_relation_property,
    check_self_similarity,
    enumerate_pair_types,
    parse_class_expr,
    power,
    superpose,
    verify_class_axioms,
)
from fraisse.errors import TransitivityOnNonBinary, UnknownRelation
from fraisse.structures import FiniteStructure, Signature


def tournament_3cycle():
    return FiniteStructure.build(
        Signature((("<", 2),)), 3, {"<": {(0, 1), (1, 2), (2, 0)}}
    )


# -- relation properties -------------------------------------------------------


def test_trichotomous_on_3cycle():
    assert check_relation_property(tournament_3cycle(), "<", "trichotomous")


def test_irreflexive_rejects_loop():
    loop = FiniteStructure.build(Signature((("E", 2),)), 1, {"E": {(0, 0)}})
    assert not check_relation_property(loop, "E", "irreflexive")
    assert check_relation_property(loop, "E", "reflexive")


def test_equivalence_has_all_three_properties():
    two_classes = FiniteStructure.build(
        Signature((("E", 2),)),
        3,
        {"E": {(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)}},
    )
    for prop in ("symmetric", "reflexive", "transitive"):
        assert check_relation_property(two_classes, "E", prop)


def test_transitivity_needs_binary():
    tri = FiniteStructure.build(Signature((("R", 3),)), 3, {"R": set()})
    with pytest.raises(TransitivityOnNonBinary):
        check_relation_property(tri, "R", "transitive")


def test_unknown_relation():
    with pytest.raises(UnknownRelation):
        check_relation_property(tournament_3cycle(), "E", "symmetric")


# -- built-ins and class algebra ------------------------------------------------------


def test_builtin_names_cover_expected():
    assert set(BUILTIN_NAMES) == {"S", "LO", "E", "G", "T", "H3"}


def test_superpose_keeps_names_when_disjoint():
    spec = superpose(builtin("LO"), builtin("G"))
    assert tuple(spec.signature.names) == ("<", "E")


def test_superpose_with_empty_class_is_identity():
    spec = superpose(builtin("LO"), builtin("S"))
    assert tuple(spec.signature.names) == ("<",)
    lo = builtin("LO")
    for member in lo.members_upto(4):
        assert spec.admits(member)
    for member in spec.members_upto(4):
        assert lo.admits(member)


def test_superpose_renames_on_collision():
    spec = superpose(builtin("G"), builtin("G"))
    assert tuple(spec.signature.names) == ("E#0", "E#1")
    member = FiniteStructure.build(
        spec.signature, 2, {"E#0": {(0, 1), (1, 0)}, "E#1": set()}
    )
    assert spec.admits(member)


def test_power_names_and_parse():
    assert tuple(power(builtin("LO"), 2).signature.names) == ("<#0", "<#1")
    assert power(builtin("E"), 1).signature.names == builtin("E").signature.names
    assert parse_class_expr("LO*G").name == "LO*G"
    assert tuple(parse_class_expr("(LO^2)*S").signature.names) == ("<#0", "<#1")


# -- axiom verification -----------------------------------------------------------------


@pytest.mark.parametrize("axiom", ["hereditary", "joint_embedding", "amalgamation"])
def test_G_axioms(axiom):
    assert verify_class_axioms(builtin("G"), 3, axiom)


def test_LO_amalgamation():
    report = verify_class_axioms(builtin("LO"), 3, "amalgamation")
    assert report and report.bound == 3


def test_G_strong_amalgamation():
    assert verify_class_axioms(builtin("G"), 3, "strong_amalgamation")


def at_most_one_P():
    sig = Signature((("P", 1),))
    pred = MembershipPredicate(
        lambda s: len(s.relations["P"]) <= 1, ("P",), ("P",), "at-most-one-P"
    )
    return ClassSpec("P<=1", sig, (("P", frozenset()),), (pred,))


def test_at_most_one_P_fails_strong_joint_embedding():
    report = verify_class_axioms(at_most_one_P(), 1, "joint_embedding")
    assert report.status == "refuted"
    b0, b1 = report.witness["B0"], report.witness["B1"]
    assert len(b0.relations["P"]) == 1 and len(b1.relations["P"]) == 1


def test_property_preservation_under_superposition():
    assert check_property_preservation(builtin("G"), builtin("G"), "symmetric", 4)
    assert check_property_preservation(builtin("LO"), builtin("LO"), "trichotomous", 4)
    assert check_property_preservation(builtin("E"), builtin("E"), "transitive", 4)


# -- fully relational ---------------------------------------------------------------------


@pytest.mark.parametrize("expr", ["LO", "E", "G", "T", "LO^2"])
def test_fully_relational(expr):
    assert check_fully_relational(parse_class_expr(expr), 2, 2)


# -- pair types ------------------------------------------------------------------------------


def test_pair_type_counts():
    assert len(enumerate_pair_types(builtin("G"))) == 2
    assert len(enumerate_pair_types(parse_class_expr("LO^3"))) == 8
    assert len(enumerate_pair_types(parse_class_expr("E^2"))) == 4


@pytest.mark.parametrize("name", ["LO", "E", "G", "T"])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_pair_types_of_powers_are_2_to_m(name, m):
    from fraisse.ranks import power_pair_types

    assert len(power_pair_types(builtin(name), m)) == 2**m


def test_star_is_an_involution():
    types = enumerate_pair_types(parse_class_expr("LO^2"))
    for p in types:
        assert p.star().star() == p
        assert p.star() in types


# -- self-similarity ---------------------------------------------------------------------------


def test_self_similarity_verdicts():
    assert check_self_similarity(builtin("LO"), 3)
    assert check_self_similarity(builtin("G"), 3)
    report = check_self_similarity(builtin("E"), 3)
    assert report.status == "refuted"
    # the witness type demands equivalence with an existing point
    p = report.witness["p"]
    assert any(tup == [0, 1] or tup == (0, 1) for tup in p["E"])

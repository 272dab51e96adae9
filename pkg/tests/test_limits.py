import json
import os
import subprocess
import sys

import pytest

from fraisse.classes import builtin, parse_class_expr
from fraisse.errors import NotAmalgamation
from fraisse.limits import (
    GenericModel,
    build_box_model,
    build_generic_model,
    build_order_box_model,
    check_extension_property,
    order_box_embedding,
)
from fraisse.structures import enumerate_structures, find_embeddings


def test_box_model_shape():
    model = build_box_model(2, 3)
    assert model.structure.size == 27
    assert model.certified_level == 2
    names = list(model.structure.signature.names)
    assert names == ["E#0", "E#1"]
    # coordinate semantics: (0,0,0) vs (0,1,2) agree exactly in coordinate 0
    assert model.structure.holds("E#0", (0, 5 * 1))  # indices of lex order
    report = check_extension_property(model, 2)
    assert report


def test_order_box_embedding_is_strong():
    model = build_order_box_model(2, 5)
    pattern = enumerate_structures(parse_class_expr("LO^2"), 3)[2]
    mapping = order_box_embedding(pattern, model)
    for name in pattern.signature.names:
        for a in range(3):
            for b in range(3):
                assert pattern.holds(name, (a, b)) == model.structure.holds(
                    name, (mapping[a], mapping[b])
                )


def test_generic_graph_level_2():
    model = build_generic_model(builtin("G"), level=2, size_cap=128)
    assert model.meta["closed"]
    assert model.certified_level == 2
    assert model.structure.size == 22
    assert check_extension_property(model, 2)


def test_generic_graph_level_3_frozen_size(graph_model):
    assert graph_model.structure.size == 86
    assert graph_model.certified_level == 3
    assert graph_model.meta["closed"]


def test_level_3_graph_contains_every_4_point_graph(graph_model):
    for pattern in enumerate_structures(builtin("G"), 4):
        assert find_embeddings(pattern, graph_model.structure, limit=1)


def test_generic_model_deterministic_across_kernel_paths(graph_model):
    script = (
        "import json;"
        "from fraisse.classes import builtin;"
        "from fraisse.limits import build_generic_model;"
        "m = build_generic_model(builtin('G'), level=3, size_cap=200);"
        "print(json.dumps(m.to_json(), sort_keys=True))"
    )
    env = dict(os.environ, FRAISSE_PURE_NUMPY="1")
    out = subprocess.run(
        [sys.executable, "-c", script], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0, out.stderr
    pure = json.loads(out.stdout)
    assert pure == graph_model.to_json()


def test_generic_order_hits_cap_and_stays_uncertified():
    model = build_generic_model(builtin("LO"), level=1, size_cap=16)
    assert model.meta["closed"] is False
    assert model.certified_level == -1


def test_generic_equivalence_model_closes():
    model = build_generic_model(builtin("E"), level=2, size_cap=256)
    assert model.meta["closed"]
    assert model.certified_level == 2


def test_superposition_model_closes():
    model = build_generic_model(parse_class_expr("G^2"), level=1, size_cap=128)
    assert model.meta["closed"]
    assert model.certified_level == 1


def test_order_superposition_hits_cap():
    model = build_generic_model(parse_class_expr("LO*G"), level=1, size_cap=64)
    assert model.meta["closed"] is False
    assert model.certified_level == -1


def test_amalgamation_precheck_rejects_bad_class():
    # matchings (graphs of maximum degree 1) fail strong amalgamation:
    # two edges through a shared point force degree 2
    from fraisse.classes import ClassSpec, MembershipPredicate
    from fraisse.structures import Signature

    def max_degree_one(s):
        degrees = [0] * s.size
        for a, b in s.relations["E"]:
            if a < b:
                degrees[a] += 1
                degrees[b] += 1
        return all(d <= 1 for d in degrees)

    pred = MembershipPredicate(max_degree_one, ("E",), ("E",), "matching")
    spec = ClassSpec(
        "matching",
        Signature((("E", 2),)),
        (("E", frozenset(("symmetric", "irreflexive"))),),
        (pred,),
    )
    with pytest.raises(NotAmalgamation):
        build_generic_model(spec, level=1, size_cap=16)


def test_model_json_round_trip(graph_model):
    again = GenericModel.loads(graph_model.dumps())
    assert again.structure == graph_model.structure
    assert again.certified_level == graph_model.certified_level

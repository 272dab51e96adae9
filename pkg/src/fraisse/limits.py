"""Finite approximations of generic limits.

Infinite generic structures are replaced by finite models carrying a
*certified extension level* ``k``: every quantifier-free 1-type over at
most ``k`` points consistent with the class is realized by some point of
the model.  Three builders are provided:

* ``build_box_model(m, n)``: the grid ``n**(m+1)`` with ``E_i`` reading
  equality of coordinate ``i`` — a member of the m-fold superposition of
  equivalence relations, certified at level ``n - 1`` by construction.
* ``build_generic_model``: one-point-extension closure, the workhorse for
  graph-like classes.  For order-like classes closure cannot terminate
  (density forces unbounded growth), so it stops at the size cap and
  returns the partial model flagged uncertified.
* ``build_order_box_model(k, side)``: ``side**k`` points carrying ``k``
  coordinate orders with lexicographic tie-breaking.  No finite set with
  a linear order can realize below-the-minimum types, so these models are
  never extension-certified; instead they are *age-universal*: every
  pattern of ``k`` linear orders on at most ``side`` points embeds, via
  an explicitly computable rank embedding.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .classes import ClassSpec, builtin, parse_class_expr, power, verify_class_axioms
from .errors import BoundExceeded, NotAmalgamation, NonBinarySignature
from .report import VerificationReport
from .structures import FiniteStructure, all_extension_tuples


@dataclass
class GenericModel:
    """A finite structure standing in for a generic limit of its class."""

    structure: FiniteStructure
    spec: ClassSpec
    certified_level: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.spec.admits(self.structure):
            raise ValueError("model structure is not a member of its class")

    @property
    def size(self) -> int:
        return self.structure.size

    def to_json(self) -> dict:
        out = self.structure.to_json()
        out["certified_level"] = self.certified_level
        out["spec"] = self.spec.name
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GenericModel":
        structure = FiniteStructure.from_json(data)
        spec = parse_class_expr(data["spec"])
        return cls(
            structure, spec, int(data["certified_level"]), data.get("meta", {})
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "GenericModel":
        return cls.from_json(json.loads(text))


# -- the equivalence-relations box model -------------------------------------


def box_tuples(m: int, n: int) -> list[tuple[int, ...]]:
    """The (m+1)-tuples over range(n) in lexicographic order."""
    return list(itertools.product(range(n), repeat=m + 1))


def build_box_model(m: int, n: int, budget: int = 4096) -> GenericModel:
    """The box on ``n**(m+1)`` points: ``E_i`` holds iff coordinate ``i``
    agrees, for i < m.  Certified at level ``n - 1``: a type over at most
    n-1 points prescribes, per coordinate, one of at most n-1 values to
    hit or avoid, and the final coordinate supplies enough distinct
    realizers."""
    if m < 1 or n < 1:
        raise ValueError(f"need m, n >= 1, got {(m, n)}")
    if n ** (m + 1) > budget:
        raise BoundExceeded(f"box size {n ** (m + 1)} exceeds budget {budget}")
    spec = power(builtin("E"), m)
    points = box_tuples(m, n)
    index = {p: i for i, p in enumerate(points)}
    tables = {name: set() for name in spec.signature.names}
    names = list(spec.signature.names)
    for a in points:
        for b in points:
            for i, name in enumerate(names):
                if a[i] == b[i]:
                    tables[name].add((index[a], index[b]))
    structure = FiniteStructure.build(spec.signature, len(points), tables)
    return GenericModel(
        structure,
        spec,
        n - 1,
        meta={"builder": "box", "m": m, "n": n},
    )


# -- order boxes ---------------------------------------------------------------


def build_order_box_model(k: int, side: int, budget: int = 4096) -> GenericModel:
    """``side**k`` points with k linear orders: a <_i b iff a_i < b_i, ties
    broken lexicographically on the whole tuple.

    Finite order models are never extension-certified (no point lies below
    the minimum), so ``certified_level`` is -1; what these models offer is
    age-universality up to ``side`` points, witnessed constructively by
    ``order_box_embedding``.
    """
    if k < 1 or side < 1:
        raise ValueError(f"need k, side >= 1, got {(k, side)}")
    if side**k > budget:
        raise BoundExceeded(f"order box size {side ** k} exceeds budget {budget}")
    spec = power(builtin("LO"), k)
    points = list(itertools.product(range(side), repeat=k))
    index = {p: i for i, p in enumerate(points)}
    tables = {name: set() for name in spec.signature.names}
    names = list(spec.signature.names)
    for a in points:
        for b in points:
            for i, name in enumerate(names):
                if (a[i], a) < (b[i], b):
                    tables[name].add((index[a], index[b]))
    structure = FiniteStructure.build(spec.signature, len(points), tables)
    return GenericModel(
        structure,
        spec,
        -1,
        meta={"builder": "order-box", "k": k, "side": side, "age_universal_upto": side},
    )


def order_box_embedding(structure: FiniteStructure, model: GenericModel) -> list[int]:
    """Embed a k-orders pattern into an order box by rank vectors.

    Point ``p`` goes to the tuple of its ranks in the k orders; distinct
    ranks make the coordinate comparison decide every pair, so the
    embedding is strong.  Requires ``structure.size <= side``.
    """
    if model.meta.get("builder") != "order-box":
        raise ValueError("target is not an order box")
    k, side = model.meta["k"], model.meta["side"]
    if structure.size > side:
        raise BoundExceeded(
            f"pattern has {structure.size} points, order box side is {side}"
        )
    names = list(model.spec.signature.names)
    if tuple(structure.signature.names) != tuple(names):
        raise NonBinarySignature(
            f"pattern signature {structure.signature.names} does not match "
            f"order box signature {tuple(names)}"
        )
    ranks = []
    for v in range(structure.size):
        vec = tuple(
            sum(1 for u in range(structure.size) if structure.holds(name, (u, v)))
            for name in names
        )
        ranks.append(vec)
    points = list(itertools.product(range(side), repeat=k))
    index = {p: i for i, p in enumerate(points)}
    return [index[vec] for vec in ranks]


# -- 1-types over subsets of a model -------------------------------------------


def consistent_one_types(spec: ClassSpec, anchor: FiniteStructure):
    """All atom assignments between a fresh point and the points of
    ``anchor`` whose one-point extension stays in the class."""
    names = list(spec.signature.names)
    for combo in itertools.product(
        *(list(spec.extension_choices(anchor, name)) for name in names)
    ):
        assignment = dict(zip(names, combo))
        extended = anchor.disjoint_union_universe(1).with_relations(
            {n: anchor.relations[n] | assignment[n] for n in names}
        )
        if spec.admits(extended):
            yield assignment


def point_realizes(
    structure: FiniteStructure, points: list[int], v: int, atoms: dict
) -> bool:
    """Does ``v`` relate to ``points`` exactly as the assignment's fresh
    point (index len(points)) does?"""
    k = len(points)
    to_model = {i: p for i, p in enumerate(points)}
    to_model[k] = v
    for name, arity in structure.signature.symbols:
        decided = atoms[name]
        for tup in all_extension_tuples(k, arity):
            image = tuple(to_model[x] for x in tup)
            if structure.holds(name, image) != (tup in decided):
                return False
    return True


# -- extension-property certification ------------------------------------------


def _graph_like(spec: ClassSpec) -> bool:
    """Single binary symmetric irreflexive relation without transitivity:
    the case the array kernels handle."""
    if spec.predicates or len(spec.signature.symbols) != 1:
        return False
    (name, arity), = spec.signature.symbols
    props = spec.properties(name)
    return arity == 2 and props == frozenset({"symmetric", "irreflexive"})


def _adjacency(structure: FiniteStructure) -> np.ndarray:
    (name, _), = structure.signature.symbols
    adj = np.zeros((structure.size, structure.size), dtype=np.uint8)
    for a, b in structure.relations[name]:
        adj[a, b] = 1
    return adj


def check_extension_property(model: GenericModel, level: int) -> VerificationReport:
    """Exhaustively verify that every spec-consistent quantifier-free
    1-type over at most ``level`` points of the model is realized."""
    structure, spec = model.structure, model.spec
    if level >= 1 and structure.size == 0:
        return VerificationReport.refuted(
            "extension-property", {"subset": [], "reason": "empty model"}, bound=level
        )
    if _graph_like(spec):
        adj = _adjacency(structure)
        if structure.size == 0:
            return VerificationReport.refuted(
                "extension-property", {"subset": []}, bound=level
            )
        for vmax in range(structure.size):
            missing = kernels.missing_graph_demands(adj, vmax, level)
            if missing:
                points, mask = missing[0]
                return VerificationReport.refuted(
                    "extension-property",
                    {"subset": list(points), "type_mask": mask},
                    bound=level,
                )
        return VerificationReport.verified_up_to("extension-property", level)
    # generic path
    for size in range(level + 1):
        for subset in itertools.combinations(range(structure.size), size):
            if size == 0 and structure.size == 0:
                return VerificationReport.refuted(
                    "extension-property", {"subset": []}, bound=level
                )
            anchor = structure.induced_substructure(subset)
            for atoms in consistent_one_types(spec, anchor):
                if not any(
                    point_realizes(structure, list(subset), v, atoms)
                    for v in range(structure.size)
                    if v not in subset
                ):
                    return VerificationReport.refuted(
                        "extension-property",
                        {
                            "subset": list(subset),
                            "type": {
                                n: sorted(map(list, t)) for n, t in atoms.items()
                            },
                        },
                        bound=level,
                    )
    return VerificationReport.verified_up_to("extension-property", level)


# -- generic-model closure -------------------------------------------------------


def _hash_bits(a: int, b: int, salt: int = 0) -> int:
    """Deterministic pseudorandom integer from a point pair (splitmix-style)."""
    x = (a * 0x9E3779B97F4A7C15 ^ (b + 1) * 0xBF58476D1CE4E5B9 ^ salt) & (2**64 - 1)
    x = (x ^ (x >> 30)) * 0xD6E8FEB86659FD93 & (2**64 - 1)
    x = (x ^ (x >> 27)) * 0xD6E8FEB86659FD93 & (2**64 - 1)
    return (x ^ (x >> 31)) & 0xFFFF


def build_generic_model(
    spec: ClassSpec,
    level: int,
    size_cap: int,
    check_amalgamation: bool = True,
    amalgamation_bound: int | None = None,
) -> GenericModel:
    """Close the empty structure under one-point extension demands.

    Demands are scanned grouped by the largest point they mention, so
    each is visited exactly once: realized demands stay realized when
    points are appended.  Fresh witness points relate to the demanding
    subset as the type prescribes; edges to all other points are chosen
    pseudorandomly (deterministically) for free classes, which drives the
    model toward quasi-randomness and makes the closure terminate, and by
    backtracking search for classes with transitive relations.

    On success the model self-certifies at ``level``.  If the cap is hit
    first the partial model is returned flagged uncertified
    (``certified_level == -1``) — unavoidable for order-like classes,
    where density makes true closure impossible.
    """
    if not spec.is_binary():
        raise NonBinarySignature("generic-model closure needs a binary signature")
    if check_amalgamation:
        bound = amalgamation_bound if amalgamation_bound is not None else level + 1
        axiom_report = verify_class_axioms(spec, max(bound, 1), "strong_amalgamation")
        if not axiom_report:
            raise NotAmalgamation(
                f"{spec.name} fails strong amalgamation at bound {bound}"
            )
    if _graph_like(spec):
        structure, closed = _close_graph(spec, level, size_cap)
    else:
        structure, closed = _close_generic(spec, level, size_cap)
    model = GenericModel(
        structure,
        spec,
        level if closed else -1,
        meta={
            "builder": "closure",
            "level": level,
            "size_cap": size_cap,
            "closed": closed,
        },
    )
    return model


def _close_graph(spec: ClassSpec, level: int, size_cap: int):
    adj = np.zeros((0, 0), dtype=np.uint8)

    def add_point(forced: dict[int, int]) -> None:
        nonlocal adj
        n = adj.shape[0]
        row = np.zeros(n + 1, dtype=np.uint8)
        for u in range(n):
            row[u] = forced[u] if u in forced else _hash_bits(u, n) & 1
        grown = np.zeros((n + 1, n + 1), dtype=np.uint8)
        grown[:n, :n] = adj
        grown[n, :] = row
        grown[:, n] = row
        adj = grown

    if level >= 0 and size_cap >= 1:
        add_point({})
    vmax = 0
    while vmax < adj.shape[0]:
        for points, mask in kernels.missing_graph_demands(adj, vmax, level):
            if adj.shape[0] >= size_cap:
                return _graph_structure(spec, adj), False
            if not kernels.graph_demand_met(adj, points, mask):
                add_point(
                    {d: (mask >> bit) & 1 for bit, d in enumerate(points)}
                )
        vmax += 1
    return _graph_structure(spec, adj), True


def _graph_structure(spec: ClassSpec, adj: np.ndarray) -> FiniteStructure:
    (name, _), = spec.signature.symbols
    edges = {(int(a), int(b)) for a, b in zip(*np.nonzero(adj))}
    return FiniteStructure.build(spec.signature, adj.shape[0], {name: edges})


def _close_generic(spec: ClassSpec, level: int, size_cap: int):
    structure = spec.empty_structure()
    if size_cap >= 1:
        grown = _add_witness(spec, structure, [], None)
        if grown is None:
            raise NotAmalgamation(f"{spec.name} admits no one-point structure")
        structure = grown
    vmax = 0
    while vmax < structure.size:
        for size in range(1, level + 1):
            if size > vmax + 1:
                continue
            for rest in itertools.combinations(range(vmax), size - 1):
                subset = list(rest) + [vmax]
                anchor = structure.induced_substructure(subset)
                for atoms in consistent_one_types(spec, anchor):
                    if any(
                        point_realizes(structure, subset, v, atoms)
                        for v in range(structure.size)
                        if v not in subset
                    ):
                        continue
                    if structure.size >= size_cap:
                        return structure, False
                    grown = _add_witness(spec, structure, subset, atoms)
                    if grown is None:
                        # the demand was consistent on the subset alone but
                        # has no completion against the whole model
                        return structure, False
                    structure = grown
        vmax += 1
    return structure, True


def _add_witness(spec, structure, subset, atoms):
    """Append one point realizing ``atoms`` over ``subset``, completing its
    relations to the rest of the model by backtracking (pseudorandom
    preference order), staying inside the class."""
    n = structure.size
    names = list(spec.signature.names)
    others = [v for v in range(n) if v not in subset]
    pair_options = {}
    for u in others:
        pair_options[u] = _pair_choice_list(spec, u, n)
    diag_options = _diag_choice_list(spec, n)
    forced: dict[str, set] = {name: set() for name in names}
    if atoms is not None:
        translate = {i: p for i, p in enumerate(subset)}
        translate[len(subset)] = n
        for name in names:
            for tup in atoms[name]:
                forced[name].add(tuple(translate[x] for x in tup))

    order = sorted(others, key=lambda u: _hash_bits(u, n, salt=1))

    def build(assignments):
        tables = {name: set(structure.relations[name]) | forced[name] for name in names}
        for chosen in assignments:
            for name, tups in chosen.items():
                tables[name] |= tups
        return structure.disjoint_union_universe(1).with_relations(tables)

    def rec(i, chosen):
        if i == len(order):
            for diag in diag_options:
                candidate = build(chosen + [diag])
                if spec.admits(candidate):
                    return candidate
            return None
        u = order[i]
        for option in pair_options[u]:
            candidate = chosen + [option]
            if _partial_consistent(spec, structure, forced, candidate):
                result = rec(i + 1, candidate)
                if result is not None:
                    return result
        return None

    return rec(0, [])


def _pair_choice_list(spec, u, new):
    """Locally admissible atom assignments between existing point u and
    the fresh point, per relation, hash-shuffled for genericity."""
    names = list(spec.signature.names)
    per_rel = []
    for name in names:
        props = spec.properties(name)
        options = []
        for fwd in (False, True):
            for back in (False, True):
                if "symmetric" in props and fwd != back:
                    continue
                if "trichotomous" in props and fwd == back:
                    continue
                tups = set()
                if fwd:
                    tups.add((new, u))
                if back:
                    tups.add((u, new))
                options.append(frozenset(tups))
        per_rel.append(options)
    combos = [
        {name: tups for name, tups in zip(names, combo)}
        for combo in itertools.product(*per_rel)
    ]
    combos.sort(
        key=lambda c: _hash_bits(
            u, new, salt=sum(hash(frozenset(v)) & 0xFF for v in c.values())
        )
    )
    return combos


def _diag_choice_list(spec, new):
    names = list(spec.signature.names)
    per_rel = []
    for name in names:
        props = spec.properties(name)
        if "irreflexive" in props or "trichotomous" in props:
            per_rel.append([frozenset()])
        elif "reflexive" in props:
            per_rel.append([frozenset({(new, new)})])
        else:
            per_rel.append([frozenset(), frozenset({(new, new)})])
    return [
        {name: tups for name, tups in zip(names, combo)}
        for combo in itertools.product(*per_rel)
    ]


def _partial_consistent(spec, structure, forced, chosen):
    """Cheap transitivity screen on the decided pairs (full membership is
    checked at the end)."""
    n = structure.size
    for name in spec.signature.names:
        if "transitive" not in spec.properties(name):
            continue
        fwd = {u for u in range(n) if (n, u) in _decided(name, forced, chosen)}
        back = {u for u in range(n) if (u, n) in _decided(name, forced, chosen)}
        table = structure.relations[name]
        for u in back:
            for w in fwd:
                if u != w and (u, w) not in table:
                    return False
    return True


def _decided(name, forced, chosen):
    out = set(forced[name])
    for c in chosen:
        out |= c.get(name, set())
    return out

"""Fraïssé-class specifications and bounded verification of their axioms.

A class is described by a decidable membership predicate on finite
structures: per-relation property sets (symmetric, trichotomous,
reflexive, irreflexive, transitive) plus optional custom predicates.
Built-ins:

========  =========================================  ===========
name      properties                                 relation
========  =========================================  ===========
``S``     (empty signature)                          --
``LO``    trichotomous, irreflexive, transitive      ``<``
``E``     symmetric, reflexive, transitive           ``E``
``G``     symmetric, irreflexive                     ``E``
``T``     trichotomous, irreflexive                  ``<``
``H_k``   symmetric, irreflexive, arity k            ``R``
========  =========================================  ===========

Free superposition takes the union signature (renaming colliding names
with ``#i`` suffixes) and requires each reduct to lie in its factor; the
``power`` convenience builds the iterated superposition of a class with
itself.

All axiom checks here are bounded and three-valued: ``verified`` always
means verified up to the stated bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    BudgetExceeded,
    NonBinarySignature,
    SignatureMismatch,
    TransitivityOnNonBinary,
    UnknownRelation,
)
from .report import VerificationReport
from .structures import (
    EMPTY_SIGNATURE,
    FiniteStructure,
    Signature,
    all_extension_tuples,
    enumerate_structures_upto,
    find_embeddings,
)

PROPERTIES = ("symmetric", "trichotomous", "reflexive", "irreflexive", "transitive")


def check_relation_property(
    structure: FiniteStructure, name: str, prop: str
) -> bool:
    """Does relation ``name`` have ``prop`` on this structure?

    symmetric      closed under all coordinate permutations;
    trichotomous   every distinct-entry tuple satisfies the relation under
                   exactly one coordinate permutation;
    reflexive      all constant tuples hold;
    irreflexive    no tuple with a repeated entry holds;
    transitive     (binary only) R(a,b) and R(b,c) imply R(a,c).
    """
    if name not in structure.signature:
        raise UnknownRelation(f"no relation named {name!r}")
    arity = structure.signature.arity(name)
    table = structure.relations[name]
    n = structure.size
    if prop == "symmetric":
        return all(
            tuple(tup[i] for i in perm) in table
            for tup in table
            for perm in itertools.permutations(range(arity))
        )
    if prop == "trichotomous":
        for combo in itertools.combinations(range(n), arity):
            hits = sum(
                1 for perm in itertools.permutations(combo) if perm in table
            )
            if hits != 1:
                return False
        return True
    if prop == "reflexive":
        return all((a,) * arity in table for a in range(n))
    if prop == "irreflexive":
        return all(len(set(tup)) == len(tup) for tup in table)
    if prop == "transitive":
        if arity != 2:
            raise TransitivityOnNonBinary(f"{name!r} has arity {arity}")
        for a, b in table:
            for c in range(n):
                if (b, c) in table and (a, c) not in table:
                    return False
        return True
    raise ValueError(f"unknown property {prop!r}")


@dataclass(frozen=True)
class MembershipPredicate:
    """A custom membership condition on the reduct to ``names``.

    ``fn`` receives the reduct renamed back to ``original_names`` (in the
    same order as ``names``) and must look relations up by name.
    """

    fn: Callable[[FiniteStructure], bool]
    names: tuple[str, ...]
    original_names: tuple[str, ...]
    label: str = "predicate"

    def holds(self, structure: FiniteStructure) -> bool:
        sub = structure.reduct(self.names)
        if self.names != self.original_names:
            sub = sub.rename_relations(dict(zip(self.names, self.original_names)))
        return bool(self.fn(sub))

    def renamed(self, mapping: dict[str, str]) -> "MembershipPredicate":
        return MembershipPredicate(
            self.fn,
            tuple(mapping.get(n, n) for n in self.names),
            self.original_names,
            self.label,
        )


@dataclass(frozen=True)
class ClassSpec:
    """A hereditary class of finite structures given by local properties
    (and optional custom predicates)."""

    name: str
    signature: Signature
    constraints: tuple[tuple[str, frozenset[str]], ...]
    predicates: tuple[MembershipPredicate, ...] = ()

    def __post_init__(self):
        declared = {n for n, _ in self.constraints}
        if declared != set(self.signature.names):
            raise SignatureMismatch(
                f"constraints for {sorted(declared)} do not cover signature "
                f"{list(self.signature.names)}"
            )

    def properties(self, name: str) -> frozenset[str]:
        for rel, props in self.constraints:
            if rel == name:
                return props
        raise UnknownRelation(f"no relation named {name!r}")

    def admits(self, structure: FiniteStructure) -> bool:
        if structure.signature != self.signature:
            return False
        for name, props in self.constraints:
            for prop in props:
                if not check_relation_property(structure, name, prop):
                    return False
        return all(pred.holds(structure) for pred in self.predicates)

    # -- one-point extension choices (drives enumeration and searches) ----

    def extension_choices(
        self, parent: FiniteStructure, name: str
    ) -> Iterator[frozenset[tuple[int, ...]]]:
        """All assignments of the new tuples mentioning a fresh point that
        respect the *local* properties of ``name`` (transitivity and custom
        predicates are filtered later by ``admits``)."""
        props = self.properties(name)
        arity = self.signature.arity(name)
        n = parent.size
        new_tuples = all_extension_tuples(n, arity)
        forced: set[tuple[int, ...]] = set()
        open_tuples: list[tuple[int, ...]] = []
        for tup in new_tuples:
            distinct = len(set(tup)) == len(tup)
            if not distinct:
                if "irreflexive" in props:
                    continue
                if "reflexive" in props and len(set(tup)) == 1:
                    forced.add(tup)
                    continue
            open_tuples.append(tup)

        if "trichotomous" in props:
            groups: dict[frozenset[int], list[tuple[int, ...]]] = {}
            rest: list[tuple[int, ...]] = []
            for tup in open_tuples:
                if len(set(tup)) == len(tup):
                    groups.setdefault(frozenset(tup), []).append(tup)
                else:
                    rest.append(tup)
            units = [tuple(sorted(g)) for g in groups.values()]
            units.sort()
            for picks in itertools.product(*units):
                for extra in _subset_choices(rest, props):
                    yield frozenset(forced) | set(picks) | extra
            return

        yield from (
            frozenset(forced) | chosen
            for chosen in _subset_choices(open_tuples, props)
        )

    # -- convenience -------------------------------------------------------

    def members_upto(self, bound: int, budget: int | None = None):
        return enumerate_structures_upto(self, bound, budget=budget)

    def empty_structure(self) -> FiniteStructure:
        return FiniteStructure.build(self.signature, 0)

    def is_binary(self) -> bool:
        return all(a == 2 for _, a in self.signature.symbols)


def _subset_choices(
    tuples: Sequence[tuple[int, ...]], props: frozenset[str]
) -> Iterator[set[tuple[int, ...]]]:
    """Subsets of the given tuples, whole permutation-orbits at a time if
    the relation is symmetric."""
    if "symmetric" in props:
        orbits: dict[tuple, list[tuple[int, ...]]] = {}
        for tup in tuples:
            orbits.setdefault(tuple(sorted(tup)), []).append(tup)
        units = sorted(orbits.values())
    else:
        units = [[t] for t in sorted(tuples)]
    for mask in itertools.product((False, True), repeat=len(units)):
        yield {t for unit, take in zip(units, mask) if take for t in unit}


# -- built-ins --------------------------------------------------------------


def _simple(name: str, rel: str, arity: int, props: Iterable[str]) -> ClassSpec:
    return ClassSpec(
        name,
        Signature(((rel, arity),)),
        ((rel, frozenset(props)),),
    )


def builtin(name: str) -> ClassSpec:
    """The built-in class with the given name (S, LO, E, G, T, H3, H4, ...)."""
    if name == "S":
        return ClassSpec("S", EMPTY_SIGNATURE, ())
    if name == "LO":
        return _simple("LO", "<", 2, ("trichotomous", "irreflexive", "transitive"))
    if name == "E":
        return _simple("E", "E", 2, ("symmetric", "reflexive", "transitive"))
    if name == "G":
        return _simple("G", "E", 2, ("symmetric", "irreflexive"))
    if name == "T":
        return _simple("T", "<", 2, ("trichotomous", "irreflexive"))
    if name.startswith("H") and name[1:].isdigit():
        k = int(name[1:])
        if k < 2:
            raise ValueError(f"hypergraph arity {k} < 2")
        return _simple(name, "R", k, ("symmetric", "irreflexive"))
    raise ValueError(f"unknown built-in class {name!r}")


BUILTIN_NAMES = ("S", "LO", "E", "G", "T", "H3")


# -- free superposition ------------------------------------------------------


def superpose(spec0: ClassSpec, spec1: ClassSpec) -> ClassSpec:
    """The free superposition: structures over the union signature whose
    reduct to each factor's signature lies in that factor.

    Colliding relation names are renamed with ``#0``/``#1`` suffixes.
    """
    collide = set(spec0.signature.names) & set(spec1.signature.names)
    map0 = {n: f"{n}#0" for n in collide}
    map1 = {n: f"{n}#1" for n in collide}
    return _combine([(spec0, map0), (spec1, map1)], f"{_atom(spec0)}*{_atom(spec1)}")


def power(spec: ClassSpec, k: int) -> ClassSpec:
    """The iterated superposition of ``spec`` with itself, ``k`` factors,
    with relations renamed ``name#0 .. name#k-1``."""
    if k < 1:
        raise ValueError(f"power {k} < 1")
    if k == 1:
        return spec
    factors = [
        (spec, {n: f"{n}#{i}" for n in spec.signature.names}) for i in range(k)
    ]
    return _combine(factors, f"{_atom(spec)}^{k}")


def _atom(spec: ClassSpec) -> str:
    return spec.name if _is_atomic_name(spec.name) else f"({spec.name})"


def _is_atomic_name(name: str) -> bool:
    return all(c.isalnum() for c in name)


def _combine(
    factors: list[tuple[ClassSpec, dict[str, str]]], name: str
) -> ClassSpec:
    sig = EMPTY_SIGNATURE
    constraints: list[tuple[str, frozenset[str]]] = []
    predicates: list[MembershipPredicate] = []
    for spec, mapping in factors:
        sig = sig.union(spec.signature.rename(mapping))
        constraints.extend(
            (mapping.get(rel, rel), props) for rel, props in spec.constraints
        )
        predicates.extend(p.renamed(mapping) for p in spec.predicates)
    return ClassSpec(name, sig, tuple(constraints), tuple(predicates))


# -- class-expression syntax for the CLI -------------------------------------


def parse_class_expr(text: str) -> ClassSpec:
    """Parse expressions like ``LO*G``, ``E^2``, ``(LO^2)*S``."""
    tokens = _tokenize(text)
    spec, rest = _parse_product(tokens)
    if rest:
        raise ValueError(f"trailing tokens {rest!r} in class expression {text!r}")
    return spec


def _tokenize(text: str) -> list[str]:
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "*^()":
            out.append(c)
            i += 1
        elif c.isalnum():
            j = i
            while j < len(text) and text[j].isalnum():
                j += 1
            out.append(text[i:j])
            i = j
        else:
            raise ValueError(f"bad character {c!r} in class expression")
    return out


def _parse_product(tokens: list[str]) -> tuple[ClassSpec, list[str]]:
    spec, tokens = _parse_power(tokens)
    while tokens and tokens[0] == "*":
        rhs, tokens = _parse_power(tokens[1:])
        spec = superpose(spec, rhs)
    return spec, tokens


def _parse_power(tokens: list[str]) -> tuple[ClassSpec, list[str]]:
    spec, tokens = _parse_atom(tokens)
    if tokens and tokens[0] == "^":
        if len(tokens) < 2 or not tokens[1].isdigit():
            raise ValueError("expected integer after '^'")
        spec, tokens = power(spec, int(tokens[1])), tokens[2:]
    return spec, tokens


def _parse_atom(tokens: list[str]) -> tuple[ClassSpec, list[str]]:
    if not tokens:
        raise ValueError("unexpected end of class expression")
    if tokens[0] == "(":
        spec, rest = _parse_product(tokens[1:])
        if not rest or rest[0] != ")":
            raise ValueError("unbalanced parentheses")
        return spec, rest[1:]
    return builtin(tokens[0]), tokens[1:]


# -- axiom verification -------------------------------------------------------


def verify_class_axioms(
    spec: ClassSpec,
    bound: int,
    axiom: str,
    budget: int | None = None,
) -> VerificationReport:
    """Exhaustively check a class axiom over instances with parts of size
    at most ``bound``.

    The amalgam search caps ``|C|`` at ``|B0| + |B1| - |A|`` (the strong
    disjoint-union size); a failure within this cap is reported as refuted
    with ``within_cap`` set, which for plain amalgamation is weaker than a
    true refutation.
    """
    if bound < 1:
        raise ValueError(f"bound {bound} < 1")
    if axiom == "hereditary":
        return _verify_hereditary(spec, bound, budget)
    if axiom == "joint_embedding":
        return _verify_amalgamation(spec, bound, strong=True, joint=True, budget=budget)
    if axiom == "amalgamation":
        return _verify_amalgamation(spec, bound, strong=False, joint=False, budget=budget)
    if axiom == "strong_amalgamation":
        return _verify_amalgamation(spec, bound, strong=True, joint=False, budget=budget)
    raise ValueError(f"unknown axiom {axiom!r}")


def _verify_hereditary(spec, bound, budget) -> VerificationReport:
    checked = 0
    for member in spec.members_upto(bound, budget=budget):
        for size in range(member.size):
            for subset in itertools.combinations(range(member.size), size):
                checked += 1
                if not spec.admits(member.induced_substructure(subset)):
                    return VerificationReport.refuted(
                        "hereditary",
                        {"member": member, "subset": list(subset)},
                        bound=bound,
                    )
    return VerificationReport.verified_up_to("hereditary", bound, instances=checked)


def _verify_amalgamation(spec, bound, strong, joint, budget) -> VerificationReport:
    axiom = (
        "joint_embedding"
        if joint
        else ("strong_amalgamation" if strong else "amalgamation")
    )
    members = spec.members_upto(bound, budget=budget)
    bases = [spec.empty_structure()] if joint else members
    checked = 0
    for base in bases:
        arms = []
        for b in members:
            if b.size < base.size:
                continue
            for emb in find_embeddings(base, b, budget=budget):
                arms.append((b, emb.mapping))
        for i, (b0, f0) in enumerate(arms):
            for b1, f1 in arms[i:]:
                checked += 1
                amalgam = _find_amalgam(spec, base, b0, f0, b1, f1, strong=True)
                if amalgam is None and not strong:
                    amalgam = _amalgam_with_identifications(spec, base, b0, f0, b1, f1)
                if amalgam is None:
                    return VerificationReport.refuted(
                        axiom,
                        {
                            "A": base,
                            "B0": b0,
                            "B1": b1,
                            "f0": list(f0),
                            "f1": list(f1),
                        },
                        bound=bound,
                        within_cap=True,
                        cap=b0.size + b1.size - base.size,
                    )
    return VerificationReport.verified_up_to(axiom, bound, instances=checked)


def _find_amalgam(spec, base, b0, f0, b1, f1, strong):
    """Search for C over B0 + (B1 minus the base image), gluing the base.

    Point layout: B0 keeps its indices; the points of B1 outside f1(base)
    follow in increasing order.  Tuples inside either part are inherited;
    only the tuples mixing the two private parts are searched, relation by
    relation (relations do not interact for property-defined classes, but a
    final ``admits`` guards the general case).
    """
    x1 = [v for v in range(b1.size) if v not in set(f1)]
    to_c = {}
    for a_pt, image in enumerate(f1):
        to_c[image] = f0[a_pt]
    for offset, v in enumerate(x1):
        to_c[v] = b0.size + offset
    size = b0.size + len(x1)
    base_tables = {}
    undecided: dict[str, list[tuple[int, ...]]] = {}
    part0 = set(range(b0.size))
    part1 = {to_c[v] for v in range(b1.size)}
    for name, arity in spec.signature.symbols:
        table = set(b0.relations[name])
        for tup in b1.relations[name]:
            table.add(tuple(to_c[x] for x in tup))
        base_tables[name] = table
        free = []
        for tup in itertools.product(range(size), repeat=arity):
            pts = set(tup)
            if pts <= part0 or pts <= part1:
                continue
            free.append(tup)
        undecided[name] = free
    candidate = FiniteStructure.build(spec.signature, size, base_tables)

    for name, _ in spec.signature.symbols:
        filled = _fill_relation(spec, candidate, name, undecided[name])
        if filled is None:
            return None
        candidate = filled
    if spec.admits(candidate):
        return candidate
    return None


def _fill_relation(spec, structure, name, free_tuples):
    """Choose the undecided tuples of one relation so its properties hold.

    Tries a constructive completion first (tailored to the declared
    property combination), then falls back to exhaustive search over
    orbit-respecting assignments.
    """
    if not free_tuples:
        return structure if _relation_ok(spec, structure, name) else None
    props = spec.properties(name)
    guess = _constructive_fill(spec, structure, name, free_tuples, props)
    if guess is not None and _relation_ok(spec, guess, name):
        return guess
    for choice in _free_assignments(free_tuples, props):
        candidate = structure.with_relations(
            {name: structure.relations[name] | choice}
        )
        if _relation_ok(spec, candidate, name):
            return candidate
    return None


def _relation_ok(spec, structure, name) -> bool:
    return all(
        check_relation_property(structure, name, prop)
        for prop in spec.properties(name)
    )


def _constructive_fill(spec, structure, name, free_tuples, props):
    arity = spec.signature.arity(name)
    table = set(structure.relations[name])
    if "transitive" in props and arity == 2:
        if "symmetric" in props:
            # Equivalence-style: relate across parts only through a common
            # related point already present (class-merging along the base).
            closure = _transitive_symmetric_closure(table, structure.size, props)
            added = {t for t in closure if t in set(free_tuples)}
            extra = closure - table - added
            if extra:
                return None
            return structure.with_relations({name: table | added})
        # Order-style: merge by counting how many related "pivots" precede.
        below = {v: sum(1 for u in range(structure.size) if (u, v) in table) for v in range(structure.size)}
        chosen = set()
        for u, v in free_tuples:
            key_u = (below[u], u)
            key_v = (below[v], v)
            if (u, v) not in chosen and (v, u) not in chosen and key_u < key_v:
                chosen.add((u, v))
            elif (u, v) not in chosen and (v, u) not in chosen:
                chosen.add((v, u))
        chosen = {t for t in chosen if t in set(free_tuples)}
        # keep only one orientation per pair, matching the free list
        out = set()
        seen_pairs = set()
        for t in sorted(chosen):
            pair = frozenset(t)
            if pair not in seen_pairs:
                seen_pairs.add(pair)
                out.add(t)
        return structure.with_relations({name: table | out})
    if "trichotomous" in props:
        chosen = set()
        seen = set()
        for tup in sorted(free_tuples):
            if len(set(tup)) != len(tup):
                continue
            key = frozenset(tup)
            if key not in seen:
                seen.add(key)
                chosen.add(tup)
        return structure.with_relations({name: table | chosen})
    # Symmetric or unconstrained without transitivity: leave everything out.
    return structure.with_relations({name: table})


def _transitive_symmetric_closure(table, size, props):
    rel = set(table)
    if "reflexive" in props:
        rel |= {(a, a) for a in range(size)}
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            if (b, a) not in rel:
                rel.add((b, a))
                changed = True
            for c in range(size):
                if (b, c) in rel and (a, c) not in rel:
                    rel.add((a, c))
                    changed = True
    return rel


def _free_assignments(free_tuples, props) -> Iterator[set[tuple[int, ...]]]:
    if "trichotomous" in props:
        groups: dict[frozenset, list] = {}
        rest = []
        for tup in free_tuples:
            if len(set(tup)) == len(tup):
                groups.setdefault(frozenset(tup), []).append(tup)
            else:
                rest.append(tup)
        units = [sorted(g) for g in groups.values()]
        for picks in itertools.product(*units):
            for extra in _subset_choices(rest, props):
                yield set(picks) | extra
        return
    yield from _subset_choices(free_tuples, props)


def _amalgam_with_identifications(spec, base, b0, f0, b1, f1):
    """Plain amalgamation: also try identifying private points pairwise."""
    x0 = [v for v in range(b0.size) if v not in set(f0)]
    x1 = [v for v in range(b1.size) if v not in set(f1)]
    for k in range(1, min(len(x0), len(x1)) + 1):
        for sub0 in itertools.combinations(x0, k):
            for sub1 in itertools.permutations(x1, k):
                quotient = _identify(spec, base, b0, f0, b1, f1, dict(zip(sub0, sub1)))
                if quotient is not None:
                    return quotient
    return None


def _identify(spec, base, b0, f0, b1, f1, pairing):
    """Amalgam candidate where ``pairing`` maps some of B0's private points
    onto B1's private points; atoms must agree where both sides decide."""
    to_c = {}
    for v in range(b0.size):
        to_c[("0", v)] = v
    next_idx = b0.size
    for a_pt, image in enumerate(f1):
        to_c[("1", image)] = f0[a_pt]
    for v0, v1 in pairing.items():
        to_c[("1", v1)] = v0
    for v in range(b1.size):
        if ("1", v) not in to_c:
            to_c[("1", v)] = next_idx
            next_idx += 1
    size = next_idx
    tables = {}
    for name, arity in spec.signature.symbols:
        table = set()
        for tup in b0.relations[name]:
            table.add(tup)
        for tup in b1.relations[name]:
            table.add(tuple(to_c[("1", x)] for x in tup))
        # agreement check: a tuple decided absent on one side but present on
        # the other (within the shared image) makes the quotient invalid
        shared = {to_c[("1", v)] for v in range(b1.size)} & set(range(b0.size))
        for tup in itertools.product(sorted(shared), repeat=arity):
            in0 = tup in b0.relations[name] if set(tup) <= set(range(b0.size)) else None
            back1 = _preimage_tuple(tup, to_c, b1.size)
            in1 = back1 in b1.relations[name] if back1 is not None else None
            if in0 is not None and in1 is not None and in0 != in1:
                return None
        tables[name] = table
    candidate = FiniteStructure.build(spec.signature, size, tables)
    # fill tuples not decided by either part
    part0 = set(range(b0.size))
    part1 = {to_c[("1", v)] for v in range(b1.size)}
    for name, arity in spec.signature.symbols:
        free = [
            tup
            for tup in itertools.product(range(size), repeat=arity)
            if not (set(tup) <= part0 or set(tup) <= part1)
        ]
        filled = _fill_relation(spec, candidate, name, free)
        if filled is None:
            return None
        candidate = filled
    return candidate if spec.admits(candidate) else None


def _preimage_tuple(tup, to_c, b1_size):
    inverse = {}
    for v in range(b1_size):
        inverse.setdefault(to_c[("1", v)], v)
    try:
        return tuple(inverse[x] for x in tup)
    except KeyError:
        return None


# -- property preservation under superposition -------------------------------


def check_property_preservation(
    spec0: ClassSpec, spec1: ClassSpec, prop: str, bound: int
) -> VerificationReport:
    """All members of the superposition (up to ``bound``) keep ``prop`` on
    every relation that declared it."""
    combined = superpose(spec0, spec1)
    declared = [
        name for name, props in combined.constraints if prop in props
    ]
    for member in combined.members_upto(bound):
        for name in declared:
            if not check_relation_property(member, name, prop):
                return VerificationReport.refuted(
                    f"preserves-{prop}",
                    {"member": member, "relation": name},
                    bound=bound,
                )
    return VerificationReport.verified_up_to(
        f"preserves-{prop}", bound, relations=declared
    )


# -- full relationality --------------------------------------------------------


def check_fully_relational(
    spec: ClassSpec, arity: int, witness_bound: int
) -> VerificationReport:
    """Every Boolean pattern over the arity-``arity`` relation symbols is
    realized on some distinct-entry tuple of some member up to the bound."""
    if arity < 1:
        raise ValueError(f"arity {arity} < 1")
    rels = [n for n, a in spec.signature.symbols if a == arity]
    members = spec.members_upto(witness_bound)
    witnesses = {}
    for pattern in itertools.product((False, True), repeat=len(rels)):
        want = dict(zip(rels, pattern))
        found = None
        for member in members:
            if member.size < arity:
                continue
            for tup in itertools.permutations(range(member.size), arity):
                if all(member.holds(r, tup) == want[r] for r in rels):
                    found = (member, tup)
                    break
            if found:
                break
        if found is None:
            return VerificationReport.refuted(
                "fully-relational",
                {"pattern": {r: want[r] for r in rels}},
                bound=witness_bound,
            )
        witnesses[str(pattern)] = {
            "member": found[0].to_json(),
            "tuple": list(found[1]),
        }
    return VerificationReport.verified_up_to(
        "fully-relational", witness_bound, patterns=len(witnesses)
    )


# -- quantifier-free pair types ------------------------------------------------


@dataclass(frozen=True)
class PairType:
    """A complete quantifier-free type of an ordered pair of distinct
    points: the truth assignment to all atoms R(x_i, x_j), i,j < 2,
    realized in some size-2 member."""

    signature: Signature
    atoms: frozenset[tuple[str, tuple[int, int]]]

    def holds(self, name: str, i: int, j: int) -> bool:
        return (name, (i, j)) in self.atoms

    def star(self) -> "PairType":
        """The reversed type: atoms of the pair read in the other order."""
        return PairType(
            self.signature,
            frozenset((n, (1 - i, 1 - j)) for n, (i, j) in self.atoms),
        )

    def forward_bits(self) -> tuple[bool, ...]:
        """Truth values of R(x_0, x_1) per relation, in signature order."""
        return tuple(
            self.holds(name, 0, 1) for name in self.signature.names
        )

    def sort_key(self) -> tuple:
        return tuple(
            self.holds(name, i, j)
            for name in self.signature.names
            for i in (0, 1)
            for j in (0, 1)
        )

    def realization(self) -> FiniteStructure:
        tables: dict[str, set] = {n: set() for n in self.signature.names}
        for name, (i, j) in self.atoms:
            tables[name].add((i, j))
        return FiniteStructure.build(self.signature, 2, tables)

    def to_json(self) -> dict:
        return {
            "atoms": sorted(
                f"{name}(x{i},x{j})" for name, (i, j) in self.atoms
            )
        }


def enumerate_pair_types(spec: ClassSpec) -> list[PairType]:
    """All quantifier-free 2-types realized by distinct pairs in members of
    a binary-relational class, in deterministic order."""
    if not spec.is_binary():
        raise NonBinarySignature(
            f"pair types need a binary signature, got {spec.signature.symbols}"
        )
    names = list(spec.signature.names)
    cells = [(name, (i, j)) for name in names for i in (0, 1) for j in (0, 1)]
    out = []
    for mask in itertools.product((False, True), repeat=len(cells)):
        atoms = frozenset(c for c, keep in zip(cells, mask) if keep)
        candidate = PairType(spec.signature, atoms)
        if spec.admits(candidate.realization()):
            out.append(candidate)
    out.sort(key=PairType.sort_key)
    return out


# -- the finitary self-similarity criterion -----------------------------------


def check_self_similarity(
    spec: ClassSpec, bound: int, budget: int | None = None
) -> VerificationReport:
    """Bounded check of the one-point-extension criterion for definable
    self-similarity.

    For every member C (size <= bound), subset A, complete non-algebraic
    quantifier-free 1-type p over A (consistent with membership of
    A+point), every tuple S of distinct points of C realizing p (the image
    of an embedded B, |S| <= bound-1), and every one-point extension
    pattern tau of the structure induced on S: some point realizing p and
    related to S by tau must exist, either in C already or in a one-point
    extension of C inside the class.  Refutations return the full witness
    tuple.
    """
    if bound < 2:
        raise ValueError(f"bound {bound} < 2")
    nodes = 0
    for c_struct in spec.members_upto(bound, budget=budget):
        for a_subset in _subsets(c_struct.size):
            a_points = list(a_subset)
            for p_atoms in _one_types(spec, c_struct, a_points):
                realizers = [
                    v
                    for v in range(c_struct.size)
                    if v not in a_subset
                    and _point_matches(c_struct, a_points, v, p_atoms)
                ]
                for s_tuple in _image_tuples(realizers, bound - 1):
                    induced = c_struct.induced_substructure(s_tuple)
                    for tau in _one_types(spec, c_struct, list(s_tuple), base=induced):
                        nodes += 1
                        if budget is not None and nodes > budget:
                            raise BudgetExceeded(
                                f"self-similarity search exceeded {budget} nodes"
                            )
                        if not _extension_exists(
                            spec, c_struct, a_points, p_atoms, s_tuple, tau
                        ):
                            return VerificationReport.refuted(
                                "self-similarity",
                                {
                                    "C": c_struct,
                                    "A": a_points,
                                    "p": _atoms_json(p_atoms),
                                    "S": list(s_tuple),
                                    "tau": _atoms_json(tau),
                                },
                                bound=bound,
                            )
    return VerificationReport.verified_up_to("self-similarity", bound)


def _subsets(n: int):
    for size in range(n + 1):
        yield from itertools.combinations(range(n), size)


def _image_tuples(realizers: list[int], max_size: int):
    for size in range(min(len(realizers), max_size) + 1):
        yield from itertools.permutations(realizers, size)


def _one_types(spec, c_struct, points, base=None):
    """Atom assignments between a fresh point and the given points of C,
    consistent with class membership of the induced structure plus the
    fresh point.  Assignments are expressed over the induced indexing
    (0..len(points)-1 plus len(points) for the fresh point)."""
    anchor = base if base is not None else c_struct.induced_substructure(points)
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


def _point_matches(c_struct, points, v, atoms) -> bool:
    """Does point ``v`` of C relate to ``points`` exactly as the fresh
    point of the assignment does?"""
    k = len(points)
    to_c = {i: p for i, p in enumerate(points)}
    to_c[k] = v
    for name, arity in c_struct.signature.symbols:
        decided = atoms[name]
        for tup in all_extension_tuples(k, arity):
            image = tuple(to_c[x] for x in tup)
            if c_struct.holds(name, image) != (tup in decided):
                return False
    return True


def _extension_exists(spec, c_struct, a_points, p_atoms, s_tuple, tau) -> bool:
    # An existing point may already finish the job.
    for v in range(c_struct.size):
        if v in set(a_points) or v in set(s_tuple):
            continue
        if _point_matches(c_struct, a_points, v, p_atoms) and _point_matches(
            c_struct, list(s_tuple), v, tau
        ):
            return True
    # Otherwise search one-point extensions of C inside the class.
    names = list(spec.signature.names)
    for combo in itertools.product(
        *(list(spec.extension_choices(c_struct, name)) for name in names)
    ):
        assignment = dict(zip(names, combo))
        extended = c_struct.disjoint_union_universe(1).with_relations(
            {n: c_struct.relations[n] | assignment[n] for n in names}
        )
        if not spec.admits(extended):
            continue
        new_pt = c_struct.size
        if _point_matches(extended, a_points, new_pt, p_atoms) and _point_matches(
            extended, list(s_tuple), new_pt, tau
        ):
            return True
    return False


def _atoms_json(atoms) -> dict:
    return {name: sorted(map(list, tuples)) for name, tuples in atoms.items()}


SELF_SIMILARITY_TABLE = {
    "LO": True,
    "G": True,
    "T": True,
    "H3": True,
    "E": False,
    "LO^2": True,
    "G^2": True,
}
"""Known verdicts of the self-similarity criterion for the built-ins,
re-validated by ``check_self_similarity`` in the test suite."""

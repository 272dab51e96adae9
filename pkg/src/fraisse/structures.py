"""Finite relational structures over explicit universes ``{0, ..., n-1}``.

A structure is a relational signature together with one set of tuples per
relation symbol.  Everything downstream (class membership, model building,
interpretation verification) manipulates these objects, so the
representation stays deliberately simple: tuples of ints in frozensets.

Isomorphism is handled by brute-force canonicalisation: the canonical form
of a structure is the relabelling (over all ``n!`` permutations) whose
bit-encoding of the relation tables is minimal.  Universes stay small
(single digits) throughout, so this is both adequate and easy to audit.

Embeddings are strong: they must preserve *and* reflect every relation.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import (
    BoundExceeded,
    BudgetExceeded,
    NotAnEmbedding,
    NotBijective,
    OutOfRange,
    SignatureMismatch,
    SignatureOverlap,
    UnknownRelation,
)


@dataclass(frozen=True)
class Signature:
    """An ordered list of relation symbols with arities.

    The declaration order is significant: it fixes the bit-encoding used by
    canonical forms and the serialization order of relation tables.
    """

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.symbols]
        if len(set(names)) != len(names):
            raise SignatureOverlap(f"duplicate relation names in {names}")
        for name, arity in self.symbols:
            if arity < 1:
                raise OutOfRange(f"relation {name!r} has arity {arity} < 1")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    def arity(self, name: str) -> int:
        for sym, arity in self.symbols:
            if sym == name:
                return arity
        raise UnknownRelation(f"no relation named {name!r} in {self.names}")

    def __contains__(self, name: str) -> bool:
        return any(sym == name for sym, _ in self.symbols)

    def union(self, other: "Signature") -> "Signature":
        """Concatenate two signatures with disjoint relation names."""
        overlap = set(self.names) & set(other.names)
        if overlap:
            raise SignatureOverlap(f"relation names collide: {sorted(overlap)}")
        return Signature(self.symbols + other.symbols)

    def restrict(self, names: Sequence[str]) -> "Signature":
        for name in names:
            if name not in self:
                raise UnknownRelation(f"no relation named {name!r}")
        return Signature(tuple((n, a) for n, a in self.symbols if n in set(names)))

    def rename(self, mapping: dict[str, str]) -> "Signature":
        return Signature(tuple((mapping.get(n, n), a) for n, a in self.symbols))

    def to_json(self) -> list[dict]:
        return [{"name": n, "arity": a} for n, a in self.symbols]

    @classmethod
    def from_json(cls, data: list[dict]) -> "Signature":
        return cls(tuple((d["name"], int(d["arity"])) for d in data))


EMPTY_SIGNATURE = Signature(())


@lru_cache(maxsize=None)
def _tuple_index(n: int, arity: int) -> dict[tuple[int, ...], int]:
    """Lexicographic position of each tuple over ``range(n)**arity``."""
    return {t: i for i, t in enumerate(itertools.product(range(n), repeat=arity))}


@dataclass(frozen=True)
class FiniteStructure:
    """A finite relational structure with universe ``{0, ..., size-1}``."""

    signature: Signature
    size: int
    relations: dict[str, frozenset[tuple[int, ...]]]

    def __post_init__(self):
        if self.size < 0:
            raise OutOfRange(f"size {self.size} < 0")
        if set(self.relations) != set(self.signature.names):
            raise SignatureMismatch(
                f"relation tables {sorted(self.relations)} do not match "
                f"signature {list(self.signature.names)}"
            )
        for name, table in self.relations.items():
            arity = self.signature.arity(name)
            for tup in table:
                if len(tup) != arity:
                    raise OutOfRange(f"{name}{tup} has wrong arity (want {arity})")
                if any(not (0 <= x < self.size) for x in tup):
                    raise OutOfRange(f"{name}{tup} leaves universe of size {self.size}")

    # -- basic accessors ------------------------------------------------

    @property
    def universe(self) -> range:
        return range(self.size)

    def holds(self, name: str, tup: tuple[int, ...]) -> bool:
        if name not in self.relations:
            raise UnknownRelation(f"no relation named {name!r}")
        return tup in self.relations[name]

    # -- construction helpers -------------------------------------------

    @classmethod
    def build(
        cls,
        signature: Signature,
        size: int,
        relations: dict[str, Iterable[tuple[int, ...]]] | None = None,
    ) -> "FiniteStructure":
        relations = relations or {}
        tables = {
            name: frozenset(map(tuple, relations.get(name, ())))
            for name in signature.names
        }
        return cls(signature, size, tables)

    def with_relations(
        self, relations: dict[str, Iterable[tuple[int, ...]]]
    ) -> "FiniteStructure":
        tables = dict(self.relations)
        for name, table in relations.items():
            tables[name] = frozenset(map(tuple, table))
        return FiniteStructure(self.signature, self.size, tables)

    # -- substructures, reducts, gluing ---------------------------------

    def induced_substructure(self, points: Sequence[int]) -> "FiniteStructure":
        """Substructure on ``points`` relabelled to ``0..len(points)-1`` in
        the order given (duplicates rejected)."""
        if len(set(points)) != len(points):
            raise NotBijective(f"duplicate points in {points}")
        for p in points:
            if not (0 <= p < self.size):
                raise OutOfRange(f"point {p} outside universe")
        index = {p: i for i, p in enumerate(points)}
        keep = set(points)
        tables = {}
        for name, table in self.relations.items():
            tables[name] = frozenset(
                tuple(index[x] for x in tup)
                for tup in table
                if all(x in keep for x in tup)
            )
        return FiniteStructure(self.signature, len(points), tables)

    def reduct(self, names: Sequence[str]) -> "FiniteStructure":
        sig = self.signature.restrict(names)
        return FiniteStructure(
            sig, self.size, {n: self.relations[n] for n in sig.names}
        )

    def rename_relations(self, mapping: dict[str, str]) -> "FiniteStructure":
        sig = self.signature.rename(mapping)
        return FiniteStructure(
            sig,
            self.size,
            {mapping.get(n, n): t for n, t in self.relations.items()},
        )

    def relabel(self, perm: Sequence[int]) -> "FiniteStructure":
        """Apply the bijection ``i -> perm[i]`` to the universe."""
        if sorted(perm) != list(range(self.size)):
            raise NotBijective(f"{perm} is not a permutation of {self.size} points")
        tables = {
            name: frozenset(tuple(perm[x] for x in tup) for tup in table)
            for name, table in self.relations.items()
        }
        return FiniteStructure(self.signature, self.size, tables)

    def disjoint_union_universe(self, extra: int) -> "FiniteStructure":
        """The same structure on a universe padded by ``extra`` fresh points."""
        return FiniteStructure(self.signature, self.size + extra, self.relations)

    # -- canonical forms and isomorphism ---------------------------------

    def encode(self) -> tuple[int, ...]:
        """Bit-encoding of the relation tables, one integer per relation.

        Bits follow the lexicographic order of tuples with the first tuple
        most significant, so integer comparison matches comparison of the
        bit strings.
        """
        out = []
        for name, arity in self.signature.symbols:
            index = _tuple_index(self.size, arity)
            code = 0
            total = self.size**arity
            for tup in self.relations[name]:
                code |= 1 << (total - 1 - index[tup])
            out.append(code)
        return tuple(out)

    def canonical_form(self) -> "FiniteStructure":
        """Minimal relabelling under the bit-encoding, over all permutations."""
        best = None
        best_key = None
        for perm in itertools.permutations(range(self.size)):
            candidate = self.relabel(perm)
            key = candidate.encode()
            if best_key is None or key < best_key:
                best, best_key = candidate, key
        return self if best is None else best

    def canonical_key(self) -> tuple:
        form = self.canonical_form()
        return (form.signature.symbols, form.size, form.encode())

    def is_isomorphic(self, other: "FiniteStructure") -> bool:
        if self.signature != other.signature or self.size != other.size:
            return False
        return self.canonical_key() == other.canonical_key()

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "signature": self.signature.to_json(),
            "size": self.size,
            "relations": {
                name: sorted(list(t) for t in self.relations[name])
                for name in self.signature.names
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteStructure":
        sig = Signature.from_json(data["signature"])
        tables = {
            name: frozenset(tuple(t) for t in data["relations"].get(name, []))
            for name in sig.names
        }
        return cls(sig, int(data["size"]), tables)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "FiniteStructure":
        return cls.from_json(json.loads(text))


@dataclass(frozen=True)
class Embedding:
    """A strong embedding: injective, preserving and reflecting relations."""

    source: FiniteStructure
    target: FiniteStructure
    mapping: tuple[int, ...]

    def __post_init__(self):
        if self.source.signature != self.target.signature:
            raise SignatureMismatch("embedding endpoints have different signatures")
        if len(self.mapping) != self.source.size:
            raise OutOfRange("mapping length does not match source size")
        if len(set(self.mapping)) != len(self.mapping):
            raise NotBijective(f"mapping {self.mapping} is not injective")
        for v in self.mapping:
            if not (0 <= v < self.target.size):
                raise OutOfRange(f"image {v} outside target universe")
        for name, arity in self.source.signature.symbols:
            for tup in itertools.product(range(self.source.size), repeat=arity):
                image = tuple(self.mapping[x] for x in tup)
                if self.source.holds(name, tup) != self.target.holds(name, image):
                    raise NotAnEmbedding(
                        f"{name}{tup} -> {name}{image} is not preserved/reflected"
                    )

    def __call__(self, x: int) -> int:
        return self.mapping[x]


def _extends_partial(
    source: FiniteStructure,
    target: FiniteStructure,
    partial: list[int],
    candidate: int,
) -> bool:
    """Can ``candidate`` serve as the image of point ``len(partial)``?"""
    k = len(partial)
    trial = partial + [candidate]
    for name, arity in source.signature.symbols:
        for tup in itertools.product(range(k + 1), repeat=arity):
            if k not in tup:
                continue
            image = tuple(trial[x] for x in tup)
            if source.holds(name, tup) != target.holds(name, image):
                return False
    return True


def find_embeddings(
    source: FiniteStructure,
    target: FiniteStructure,
    limit: int | None = None,
    budget: int | None = None,
) -> list[Embedding]:
    """All (or the first ``limit``) strong embeddings of source into target.

    Backtracking over images point by point, checking every relation tuple
    that becomes decided.  Raises :class:`BudgetExceeded` if more than
    ``budget`` search nodes are visited.
    """
    if source.signature != target.signature:
        raise SignatureMismatch("embedding endpoints have different signatures")
    found: list[Embedding] = []
    nodes = 0

    def rec(partial: list[int], used: set[int]) -> bool:
        nonlocal nodes
        if len(partial) == source.size:
            found.append(Embedding(source, target, tuple(partial)))
            return limit is not None and len(found) >= limit
        for candidate in range(target.size):
            if candidate in used:
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded(f"embedding search exceeded {budget} nodes")
            if _extends_partial(source, target, partial, candidate):
                used.add(candidate)
                if rec(partial + [candidate], used):
                    return True
                used.discard(candidate)
        return False

    rec([], set())
    return found


def glue(
    a: FiniteStructure, b: FiniteStructure, bijection: Sequence[int]
) -> FiniteStructure:
    """Impose ``b``'s relations on ``a``'s universe through a bijection.

    ``bijection[i]`` is the point of ``b`` matched with point ``i`` of
    ``a``.  The result carries the union signature (names must be
    disjoint); its reduct to ``a``'s signature is ``a`` itself and its
    reduct to ``b``'s signature is isomorphic to ``b``.
    """
    if a.size != b.size:
        raise NotBijective("gluing requires equal universe sizes")
    if sorted(bijection) != list(range(a.size)):
        raise NotBijective(f"{bijection} is not a bijection on {a.size} points")
    sig = a.signature.union(b.signature)
    inverse = [0] * a.size
    for i, v in enumerate(bijection):
        inverse[v] = i
    tables = dict(a.relations)
    for name, table in b.relations.items():
        tables[name] = frozenset(
            tuple(inverse[x] for x in tup) for tup in table
        )
    return FiniteStructure(sig, a.size, tables)


def enumerate_structures(
    spec,
    size: int,
    budget: int | None = None,
    max_size_guard: int = 8,
) -> list[FiniteStructure]:
    """All members of ``spec`` with exactly ``size`` points, up to isomorphism.

    ``spec`` must provide ``signature``, ``admits(structure)`` and
    ``extension_choices(structure, name)`` (see ``classes.ClassSpec``).
    Structures are generated by one-point extension of the canonical members
    one size down, which is complete because membership is hereditary, and
    deduplicated by canonical form.  Results come back sorted by canonical
    encoding, so the order is deterministic.
    """
    if size > max_size_guard:
        raise BoundExceeded(
            f"enumeration up to iso at size {size} exceeds guard {max_size_guard}"
        )
    empty = FiniteStructure.build(spec.signature, 0)
    if size == 0:
        return [empty] if spec.admits(empty) else []
    layer = [empty]
    nodes = 0
    for _ in range(size):
        seen: dict[tuple, FiniteStructure] = {}
        for parent in layer:
            for child in _one_point_extensions(spec, parent):
                nodes += 1
                if budget is not None and nodes > budget:
                    raise BudgetExceeded(f"enumeration exceeded {budget} nodes")
                if not spec.admits(child):
                    continue
                key = child.canonical_key()
                if key not in seen:
                    seen[key] = child.canonical_form()
        layer = [seen[k] for k in sorted(seen)]
    return layer


def enumerate_structures_upto(
    spec, bound: int, budget: int | None = None
) -> list[FiniteStructure]:
    """Members of every size from 1 through ``bound``, up to isomorphism."""
    out = []
    for size in range(1, bound + 1):
        out.extend(enumerate_structures(spec, size, budget=budget))
    return out


def _one_point_extensions(
    spec, parent: FiniteStructure
) -> Iterator[FiniteStructure]:
    """Extend ``parent`` by one fresh point in every way offered by the spec."""
    base = parent.disjoint_union_universe(1)
    names = list(spec.signature.names)
    choice_lists = [list(spec.extension_choices(parent, name)) for name in names]
    for combo in itertools.product(*choice_lists):
        tables = {
            name: base.relations[name] | new_tuples
            for name, new_tuples in zip(names, combo)
        }
        yield base.with_relations(tables)


def all_extension_tuples(size: int, arity: int) -> list[tuple[int, ...]]:
    """All arity-tuples over ``size+1`` points that mention the new point
    ``size``."""
    return [
        t
        for t in itertools.product(range(size + 1), repeat=arity)
        if size in t
    ]

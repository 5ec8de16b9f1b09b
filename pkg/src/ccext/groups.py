"""Finite groups stored as validated multiplication tables.

Elements are the indices ``0 .. order-1`` and index 0 is always the
identity.  Cyclic groups use residue encoding, so element ``i`` of
``cyclic_group(k)`` is the residue ``i`` mod ``k``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from . import config
from .errors import (
    CapExceeded,
    NoIdentity,
    NotASubgroup,
    NotAssociative,
    NotLatin,
    NotNormal,
)

__all__ = [
    "FiniteGroup",
    "ElementSet",
    "GroupMorphism",
    "cyclic_group",
    "dihedral_group",
    "direct_product",
    "from_cayley_table",
    "element_order",
    "automorphisms",
    "isomorphisms",
    "find_isomorphism",
    "subgroup_generated",
    "core_of_subgroup",
    "quotient_group",
    "is_normal",
    "center",
    "generating_set",
    "group_to_json",
    "group_from_json",
]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    mul: np.ndarray
    inv: np.ndarray
    label: str = ""
    sampled: bool = False

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    def __len__(self):
        return self.order

    @property
    def elements(self) -> range:
        return range(self.order)

    def op(self, x: int, y: int) -> int:
        return int(self.mul[x, y])

    def power(self, g: int, e: int) -> int:
        """``g**e`` for any integer ``e`` (negative exponents use the inverse)."""
        if e < 0:
            g, e = int(self.inv[g]), -e
        result, base = 0, g
        while e:
            if e & 1:
                result = int(self.mul[result, base])
            base = int(self.mul[base, base])
            e >>= 1
        return result

    def conj(self, x: int, g: int) -> int:
        """``g^-1 x g``."""
        return int(self.mul[self.mul[self.inv[g], x], g])

    @cached_property
    def orders(self) -> tuple[int, ...]:
        return tuple(_element_order(self.mul, g) for g in range(self.order))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def same_table(self, other: "FiniteGroup") -> bool:
        return self.order == other.order and bool(np.array_equal(self.mul, other.mul))

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"<FiniteGroup{tag} order={self.order}>"


@dataclass(frozen=True)
class ElementSet:
    group: FiniteGroup = field(repr=False)
    members: tuple[int, ...]
    subgroup: bool = False

    def __contains__(self, x):
        return x in self._lookup

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    @cached_property
    def _lookup(self) -> frozenset:
        return frozenset(self.members)

    def as_set(self) -> frozenset:
        return self._lookup


@dataclass(frozen=True, eq=False)
class GroupMorphism:
    source: FiniteGroup = field(repr=False)
    target: FiniteGroup = field(repr=False)
    image: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.image[x]

    @property
    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and len(set(self.image)) == len(self.image)

    @property
    def is_automorphism(self) -> bool:
        return self.source is self.target and self.is_bijective

    def is_homomorphism(self) -> bool:
        img = np.asarray(self.image)
        return bool(np.array_equal(img[self.source.mul], self.target.mul[np.ix_(img, img)]))

    def compose(self, other: "GroupMorphism") -> "GroupMorphism":
        """``self ∘ other`` (apply ``other`` first)."""
        return GroupMorphism(other.source, self.target, tuple(self.image[i] for i in other.image))

    def inverse(self) -> "GroupMorphism":
        inv = [0] * len(self.image)
        for x, y in enumerate(self.image):
            inv[y] = x
        return GroupMorphism(self.target, self.source, tuple(inv))

    def kernel(self) -> ElementSet:
        return ElementSet(self.source, tuple(x for x, y in enumerate(self.image) if y == 0), True)

    def __eq__(self, other):
        return isinstance(other, GroupMorphism) and self.image == other.image

    def __hash__(self):
        return hash(self.image)


# --------------------------------------------------------------------------
# construction and validation

def _element_order(mul: np.ndarray, g: int) -> int:
    e, x = 1, g
    while x != 0:
        x = int(mul[x, g])
        e += 1
    return e


def _first_latin_violation(table: np.ndarray) -> Optional[tuple]:
    n = table.shape[0]
    target = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(table[i]), target):
            seen = set()
            for j in range(n):
                v = int(table[i, j])
                if v in seen:
                    return (i, j)
                seen.add(v)
    for j in range(n):
        if not np.array_equal(np.sort(table[:, j]), target):
            seen = set()
            for i in range(n):
                v = int(table[i, j])
                if v in seen:
                    return (i, j)
                seen.add(v)
    return None


def _find_identity(table: np.ndarray) -> Optional[int]:
    n = table.shape[0]
    target = np.arange(n)
    for e in range(n):
        if np.array_equal(table[e], target) and np.array_equal(table[:, e], target):
            return e
    return None


def _relabel(table: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Table of the same operation after renaming element ``i`` to ``perm[i]``."""
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    return perm[table[np.ix_(inv, inv)]]


def associativity_violation(mul: np.ndarray, sample: Optional[int] = None,
                            seed: int = config.SAMPLE_SEED) -> Optional[tuple[int, int, int]]:
    """First triple (x, y, z) with (xy)z != x(yz), or None.

    With ``sample`` set, only that many random triples are tested.
    """
    n = mul.shape[0]
    if sample is not None:
        rng = np.random.default_rng(seed)
        xs, ys, zs = (rng.integers(0, n, size=sample) for _ in range(3))
        bad = np.nonzero(mul[mul[xs, ys], zs] != mul[xs, mul[ys, zs]])[0]
        if len(bad):
            i = bad[0]
            return (int(xs[i]), int(ys[i]), int(zs[i]))
        return None
    chunk = max(1, (1 << 22) // max(1, n * n))
    for start in range(0, n, chunk):
        rows = mul[start:start + chunk]
        bad = np.argwhere(mul[rows] != rows[:, mul])
        if len(bad):
            a, y, z = bad[0]
            return (int(start + a), int(y), int(z))
    return None


def _inverse_table(mul: np.ndarray) -> np.ndarray:
    return np.argmin(mul, axis=1) if mul.shape[0] else np.zeros(0, dtype=np.int64)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


def _trusted(table, label: str, sampled: bool = False) -> FiniteGroup:
    mul = _freeze(np.asarray(table))
    return FiniteGroup(mul, _freeze(_inverse_table(mul)), label, sampled)


def from_cayley_table(table: Sequence[Sequence[int]], label: str = "",
                      assoc_cap: int = config.ASSOC_CAP) -> FiniteGroup:
    """Validate a multiplication table and return it as a group.

    The identity is moved to index 0 (by swapping it with element 0) if
    necessary.  Associativity is checked exhaustively up to ``assoc_cap``;
    above that ``10*order`` random triples are checked and the group is
    flagged ``sampled``.
    """
    arr = np.asarray(table, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise NotLatin((0, 0), "table must be a non-empty square grid")
    n = arr.shape[0]
    out_of_range = np.argwhere((arr < 0) | (arr >= n))
    if len(out_of_range):
        raise NotLatin(tuple(int(v) for v in out_of_range[0]), "entry out of range")
    cell = _first_latin_violation(arr)
    if cell is not None:
        raise NotLatin(cell, f"repeated entry {int(arr[cell])}")
    e = _find_identity(arr)
    if e is None:
        raise NoIdentity()
    if e != 0:
        perm = np.arange(n)
        perm[0], perm[e] = e, 0
        arr = _relabel(arr, perm)
    sampled = n > assoc_cap
    triple = associativity_violation(arr, sample=config.SAMPLE_FACTOR * n if sampled else None)
    if triple is not None:
        raise NotAssociative(triple)
    return _trusted(arr, label, sampled)


def cyclic_group(k: int) -> FiniteGroup:
    if k < 1:
        raise ValueError(f"cyclic group order must be positive, got {k}")
    r = np.arange(k)
    return _trusted((r[:, None] + r[None, :]) % k, f"cyclic:{k}")


def dihedral_group(k: int) -> FiniteGroup:
    """Dihedral group of order 2k; element ``i + k*j`` is rho^i sigma^j."""
    if k < 1:
        raise ValueError(f"dihedral parameter must be positive, got {k}")
    table = np.empty((2 * k, 2 * k), dtype=np.int64)
    for j1 in range(2):
        for i1 in range(k):
            for j2 in range(2):
                for i2 in range(k):
                    i = (i1 + (-1) ** j1 * i2) % k
                    table[i1 + k * j1, i2 + k * j2] = i + k * ((j1 + j2) % 2)
    return _trusted(table, f"dihedral:{k}")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """G x H with element (g, h) stored at index ``g*|H| + h``."""
    n, m = G.order, H.order
    g = np.arange(n * m) // m
    h = np.arange(n * m) % m
    table = G.mul[np.ix_(g, g)] * m + H.mul[np.ix_(h, h)]
    return _trusted(table, f"({G.label})x({H.label})")


def element_order(G: FiniteGroup, g: int) -> int:
    return G.orders[g]


def center(G: FiniteGroup) -> ElementSet:
    members = tuple(int(z) for z in range(G.order) if np.array_equal(G.mul[z], G.mul[:, z]))
    return ElementSet(G, members, True)


# --------------------------------------------------------------------------
# subgroups

def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> ElementSet:
    gens = sorted(set(int(g) for g in gens))
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(G.mul[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return ElementSet(G, tuple(sorted(seen)), True)


def subgroup_violation(G: FiniteGroup, members: Iterable[int]) -> Optional[tuple]:
    """A witness that ``members`` is not a subgroup, or None."""
    s = set(members)
    if 0 not in s:
        return (0,)
    for x in s:
        if int(G.inv[x]) not in s:
            return (x,)
        for y in s:
            if int(G.mul[x, y]) not in s:
                return (x, y)
    return None


def as_subgroup(G: FiniteGroup, members: Iterable[int]) -> ElementSet:
    members = tuple(sorted(set(int(x) for x in members)))
    witness = subgroup_violation(G, members)
    if witness is not None:
        raise NotASubgroup(witness)
    return ElementSet(G, members, True)


def conjugate_set(G: FiniteGroup, H: Iterable[int], g: int) -> frozenset:
    """``g^-1 H g``."""
    return frozenset(G.conj(h, g) for h in H)


def normality_violation(G: FiniteGroup, H: ElementSet) -> Optional[tuple[int, int]]:
    hs = H.as_set()
    for g in range(G.order):
        for h in H:
            if G.conj(h, g) not in hs:
                return (h, g)
    return None


def is_normal(G: FiniteGroup, H: ElementSet) -> bool:
    return subgroup_violation(G, H) is None and normality_violation(G, H) is None


def core_of_subgroup(G: FiniteGroup, H: ElementSet) -> ElementSet:
    """Largest normal subgroup of G inside H."""
    witness = subgroup_violation(G, H)
    if witness is not None:
        raise NotASubgroup(witness)
    core = set(H)
    for g in range(G.order):
        core &= conjugate_set(G, H, g)
    return ElementSet(G, tuple(sorted(core)), True)


def quotient_group(G: FiniteGroup, N: ElementSet) -> tuple[FiniteGroup, GroupMorphism]:
    """G/N with cosets numbered by their least element; coset N is index 0."""
    witness = subgroup_violation(G, N)
    if witness is not None:
        raise NotASubgroup(witness)
    witness = normality_violation(G, N)
    if witness is not None:
        raise NotNormal(witness)
    coset = [-1] * G.order
    reps = []
    for g in range(G.order):
        if coset[g] < 0:
            for h in N:
                coset[int(G.mul[g, h])] = len(reps)
            reps.append(g)
    cs = np.asarray(coset)
    r = np.asarray(reps)
    Q = _trusted(cs[G.mul[np.ix_(r, r)]], f"({G.label})/{len(N)}" if G.label else "")
    return Q, GroupMorphism(G, Q, tuple(coset))


# --------------------------------------------------------------------------
# generators, homomorphism search

def generating_set(G: FiniteGroup, prefer=None) -> tuple[int, ...]:
    """Greedy small generating set.

    Each step adds the element that enlarges the generated subgroup the
    most; ties go to ``prefer(g)`` (smaller is better) and then to the
    lower index.
    """
    gens: list[int] = []
    current = subgroup_generated(G, gens)
    while len(current) < G.order:
        best = None
        for g in range(1, G.order):
            if g in current:
                continue
            size = len(subgroup_generated(G, gens + [g]))
            key = (-size, prefer(g) if prefer else 0, g)
            if best is None or key < best[0]:
                best = (key, g)
        gens.append(best[1])
        current = subgroup_generated(G, gens)
    return tuple(gens)


def _extend(G: FiniteGroup, H: FiniteGroup, gens, images, injective: bool):
    """Extend gens -> images to a homomorphism on <gens>; None on conflict."""
    f = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            fx = f[x]
            for g, img in zip(gens, images):
                y = int(G.mul[x, g])
                fy = int(H.mul[fx, img])
                old = f.get(y)
                if old is None:
                    f[y] = fy
                    nxt.append(y)
                elif old != fy:
                    return None
        frontier = nxt
    if injective and len(set(f.values())) != len(f):
        return None
    return f


def isomorphisms(G: FiniteGroup, H: FiniteGroup, first_only: bool = False) -> list[GroupMorphism]:
    """All isomorphisms G -> H by backtracking over images of generators,
    sorted by one-line image notation."""
    if G.order != H.order or sorted(G.orders) != sorted(H.orders):
        return []
    gens = generating_set(G)
    cands = [[h for h in range(H.order) if H.orders[h] == G.orders[g]] for g in gens]
    found: list[GroupMorphism] = []

    def search(i, images):
        if i == len(gens):
            f = _extend(G, H, gens, images, True)
            if f is not None and len(f) == G.order:
                found.append(GroupMorphism(G, H, tuple(f[x] for x in range(G.order))))
            return
        for h in cands[i]:
            trial = images + [h]
            if _extend(G, H, gens[:i + 1], trial, True) is None:
                continue
            search(i + 1, trial)
            if first_only and found:
                return

    search(0, [])
    found.sort(key=lambda f: f.image)
    return found


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> Optional[GroupMorphism]:
    if G.order != H.order:
        return None
    if G.order == 1:
        return GroupMorphism(G, H, (0,))
    found = isomorphisms(G, H, first_only=True)
    return found[0] if found else None


def automorphisms(G: FiniteGroup, cap: int = config.AUT_ENUM_CAP) -> list[GroupMorphism]:
    if G.order > cap:
        raise CapExceeded("automorphism enumeration", G.order, cap)
    if G.order == 1:
        return [GroupMorphism(G, G, (0,))]
    return isomorphisms(G, G)


# --------------------------------------------------------------------------
# serialization

def group_to_json(G: FiniteGroup) -> dict:
    return {"label": G.label, "order": G.order, "mul": G.mul.tolist()}


def group_from_json(record) -> FiniteGroup:
    if isinstance(record, str):
        record = json.loads(record)
    G = from_cayley_table(record["mul"], label=record.get("label", ""))
    if G.order != record.get("order", G.order):
        raise ValueError(f"declared order {record['order']} does not match table size {G.order}")
    return G

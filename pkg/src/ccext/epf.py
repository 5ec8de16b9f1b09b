"""Extended power functions of a skew-morphism.

For a skew-morphism ``phi`` of order ``m`` and a multiple ``n`` of ``m``,
an extended power function is a map ``Pi: A -> Z_n`` lifting ``pi`` with
``Pi(1) = 1`` and ``Pi(xy) = sum_{i=1}^{Pi(x)} Pi(phi^{i-1}(y))`` (mod n).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import config
from .errors import (
    BudgetExceeded,
    CapExceeded,
    CongruenceMismatch,
    DivisibilityViolation,
    IdentityValue,
    InternalError,
    NonUnitAverage,
    NotMultiple,
    ProductLaw,
)
from .groups import ElementSet, FiniteGroup, generating_set, subgroup_violation
from .skewmorph import SkewMorphism, skew_from_json, skew_to_json

__all__ = [
    "ExtendedPowerFunction",
    "validate_epf",
    "enumerate_epfs",
    "enumerate_epfs_bruteforce",
    "sigma_Pi",
    "kernel_Pi",
    "core_Pi",
    "Av",
    "Lambda",
    "is_smooth_epf",
    "epf_to_json",
    "epf_from_json",
]


@dataclass(frozen=True, eq=False)
class ExtendedPowerFunction:
    skew: SkewMorphism = field(repr=False)
    n: int
    values: tuple[int, ...]

    @property
    def group(self) -> FiniteGroup:
        return self.skew.group

    @property
    def m(self) -> int:
        return self.skew.m

    @cached_property
    def sigma_table(self) -> np.ndarray:
        return _prefix_sums(self.skew, np.asarray(self.values, dtype=np.int64))

    def __eq__(self, other):
        return (isinstance(other, ExtendedPowerFunction) and self.n == other.n
                and self.values == other.values and self.skew == other.skew)

    def __hash__(self):
        return hash((self.n, self.values))


def _prefix_sums(sm: SkewMorphism, values: np.ndarray) -> np.ndarray:
    """``T[x, k]`` = integer sum of values over the first k orbit points of x (k <= m)."""
    steps = values[sm.powers]
    table = np.zeros((sm.group.order, sm.m + 1), dtype=np.int64)
    table[:, 1:] = np.cumsum(steps.T, axis=1)
    return table


def _sigma_matrix(values: np.ndarray, table: np.ndarray, m: int, n: int) -> np.ndarray:
    """``S[x, y] = sigma(y, values[x]) mod n`` using sigma(y, qm+r) = q sigma(y,m) + sigma(y,r)."""
    q, r = np.divmod(values, m)
    return (q[:, None] * table[:, m][None, :] + table[:, r].T) % n


def _product_law_violation(sm: SkewMorphism, n: int, values: np.ndarray) -> Optional[tuple[int, int]]:
    table = _prefix_sums(sm, values)
    lhs = values[sm.group.mul] % n
    bad = np.argwhere(lhs != _sigma_matrix(values, table, sm.m, n))
    if len(bad):
        return (int(bad[0][0]), int(bad[0][1]))
    return None


def validate_epf(sm: SkewMorphism, n: int, values: Sequence[int]) -> ExtendedPowerFunction:
    m = sm.m
    if n <= 0 or n % m:
        raise NotMultiple(n, m)
    if len(values) != sm.group.order:
        raise ValueError(f"expected {sm.group.order} values, got {len(values)}")
    vals = tuple(int(v) % n for v in values)
    if vals[0] != 1 % n:
        raise IdentityValue(vals[0])
    for x, v in enumerate(vals):
        if v % m != sm.pi[x]:
            raise CongruenceMismatch(x)
    bad = _product_law_violation(sm, n, np.asarray(vals, dtype=np.int64))
    if bad is not None:
        raise ProductLaw(*bad)
    return ExtendedPowerFunction(sm, n, vals)


def _orbit_closure(sm: SkewMorphism, gens) -> list[int]:
    out = set()
    for g in gens:
        out.update(sm.orbit(g))
    out.discard(0)
    return sorted(out)


def _spanning_tree(G: FiniteGroup, free: list[int]):
    """BFS from the identity along right multiplication by ``free``.

    Returns the edges (child, parent, step) that reach every element outside
    ``free`` and the identity.
    """
    fixed = set(free) | {0}
    seen = {0}
    frontier = [0]
    edges = []
    while frontier:
        nxt = []
        for x in frontier:
            for t in free:
                y = int(G.mul[x, t])
                if y in seen:
                    continue
                seen.add(y)
                nxt.append(y)
                if y not in fixed:
                    edges.append((y, x, t))
        frontier = nxt
    if len(seen) != G.order:
        raise InternalError("orbit closure of the generators does not generate the group")
    return edges


def enumerate_epfs(sm: SkewMorphism, n: int, budget: int = config.EPF_BUDGET,
                   chunk: int = 1 << 15) -> list[ExtendedPowerFunction]:
    """All extended power functions of ``sm`` with modulus ``n``, sorted by values.

    Unknowns are the values on the phi-orbit closure of a small generating
    set; everything else follows from the product law along a spanning
    tree.  Candidates surviving the generator-edge checks are validated in
    full.
    """
    G = sm.group
    m = sm.m
    if n <= 0 or n % m:
        raise NotMultiple(n, m)
    if G.order == 1:
        return [validate_epf(sm, n, [1 % n])]
    ratio = n // m
    gens = generating_set(G, prefer=lambda g: len(sm.orbit(g)))
    free = _orbit_closure(sm, gens)
    total = ratio ** len(free)
    if total > budget:
        raise BudgetExceeded(total, budget)
    edges = _spanning_tree(G, free)
    powers = sm.powers
    orbit_rows = {t: powers[:, t] for t in free}
    choices = [[sm.pi[t] + j * m for j in range(ratio)] for t in free]
    found = []
    combos = itertools.product(*choices)
    while True:
        block = np.array(list(itertools.islice(combos, chunk)), dtype=np.int64)
        if block.size == 0:
            break
        B = block.shape[0]
        V = np.zeros((B, G.order), dtype=np.int64)
        V[:, 0] = 1 % n
        V[:, free] = block
        # sums[t][:, k] = sigma(t, k) for k <= m, per candidate row
        sums = {}
        for t in free:
            s = np.zeros((B, m + 1), dtype=np.int64)
            s[:, 1:] = np.cumsum(V[:, orbit_rows[t]], axis=1)
            sums[t] = s
        rows = np.arange(B)

        def sigma(t, bound):
            q, r = np.divmod(bound, m)
            s = sums[t]
            return (q * s[:, m] + s[rows, r]) % n

        for y, x, t in edges:
            V[:, y] = sigma(t, V[:, x])
        ok = np.ones(B, dtype=bool)
        for x in range(G.order):
            for t in free:
                ok &= V[:, int(G.mul[x, t])] == sigma(t, V[:, x])
        for row in V[ok]:
            found.append(validate_epf(sm, n, row.tolist()))
    found.sort(key=lambda e: e.values)
    return found


def enumerate_epfs_bruteforce(sm: SkewMorphism, n: int,
                              cap: int = config.EPF_BRUTE_CAP) -> list[ExtendedPowerFunction]:
    """Exhaustive search over every value vector; an independent check on tiny groups."""
    G = sm.group
    if G.order > cap:
        raise CapExceeded("brute-force EPF enumeration", G.order, cap)
    if n <= 0 or n % sm.m:
        raise NotMultiple(n, sm.m)
    found = []
    for rest in itertools.product(range(n), repeat=G.order - 1):
        vals = np.asarray((1 % n,) + rest, dtype=np.int64)
        if any(int(v) % sm.m != sm.pi[x] for x, v in enumerate(vals)):
            continue
        if _product_law_violation(sm, n, vals) is None:
            found.append(ExtendedPowerFunction(sm, n, tuple(int(v) for v in vals)))
    found.sort(key=lambda e: e.values)
    return found


def sigma_Pi(epf: ExtendedPowerFunction, x: int, k: int) -> int:
    if k < 0:
        raise ValueError("k must be nonnegative")
    q, r = divmod(k, epf.m)
    t = epf.sigma_table
    return int(q * t[x, epf.m] + t[x, r]) % epf.n


def _subgroup(G: FiniteGroup, members) -> ElementSet:
    witness = subgroup_violation(G, members)
    if witness is not None:
        raise InternalError(f"set is not closed (witness {witness}); invalid extended power function")
    return ElementSet(G, tuple(sorted(members)), True)


def kernel_Pi(epf: ExtendedPowerFunction) -> ElementSet:
    one = 1 % epf.n
    return _subgroup(epf.group, [x for x, v in enumerate(epf.values) if v == one])


def core_Pi(epf: ExtendedPowerFunction) -> ElementSet:
    ker = set(kernel_Pi(epf))
    core = set(ker)
    for i in range(1, epf.m):
        core &= {epf.skew.apply(x, i) for x in ker}
    return _subgroup(epf.group, core)


def Av(epf: ExtendedPowerFunction) -> tuple[int, ...]:
    """Average function sigma_Pi(x, m) / m as residues mod n/m; values are units."""
    m, ratio = epf.m, epf.n // epf.m
    out = []
    for x in range(epf.group.order):
        total = int(epf.sigma_table[x, m])
        if total % m:
            raise DivisibilityViolation(x, total, m)
        a = (total // m) % ratio
        if math.gcd(a, ratio) != 1:
            raise NonUnitAverage(x, a, ratio)
        out.append(a)
    return tuple(out)


def Lambda(epf: ExtendedPowerFunction) -> tuple[int, ...]:
    """Mate function (Pi(x) - pi(x)) / m as residues mod n/m, with pi lifted to 1..m."""
    m, ratio = epf.m, epf.n // epf.m
    out = []
    for x, v in enumerate(epf.values):
        diff = v - ((epf.skew.pi[x] - 1) % m + 1)
        if diff % m:
            raise DivisibilityViolation(x, diff, m)
        out.append((diff // m) % ratio)
    return tuple(out)


def is_smooth_epf(epf: ExtendedPowerFunction) -> bool:
    return all(epf.values[epf.skew.perm[x]] == v for x, v in enumerate(epf.values))


def epf_to_json(epf: ExtendedPowerFunction) -> dict:
    return {"skew": skew_to_json(epf.skew), "n": epf.n, "values": list(epf.values)}


def epf_from_json(record: dict, G: FiniteGroup) -> ExtendedPowerFunction:
    sm = skew_from_json(record["skew"], G)
    return validate_epf(sm, record["n"], record["values"])

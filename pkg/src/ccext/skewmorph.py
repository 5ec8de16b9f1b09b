"""Skew-morphisms of finite groups.

A skew-morphism is a permutation ``phi`` of a group fixing the identity
together with a power function ``pi`` such that
``phi(xy) = phi(x) * phi^pi(x)(y)`` for all x, y.  Values of ``pi`` are
stored as least nonnegative residues mod ``m``, the order of ``phi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import config
from .errors import (
    CapExceeded,
    DivisibilityViolation,
    IdentityMoved,
    InternalError,
    NoPowerFunction,
    NotAPermutation,
    NotInvariant,
    NotNormal,
)
from .groups import (
    ElementSet,
    FiniteGroup,
    normality_violation,
    quotient_group,
    subgroup_violation,
)

__all__ = [
    "SkewMorphism",
    "PeriodData",
    "validate_skew",
    "enumerate_skew",
    "sigma_pi",
    "kernel_pi",
    "core_pi",
    "period",
    "is_smooth",
    "quotient_skew",
    "power_skew",
    "av_function",
    "mate_lambda",
    "permutation_order",
    "skew_to_json",
    "skew_from_json",
]


@dataclass(frozen=True, eq=False)
class SkewMorphism:
    group: FiniteGroup = field(repr=False)
    perm: tuple[int, ...]
    pi: tuple[int, ...]
    m: int

    @cached_property
    def powers(self) -> np.ndarray:
        """Row ``i`` is the permutation phi^i, for i in 0..m-1."""
        return _power_rows(self.perm, self.m)

    def apply(self, x: int, i: int = 1) -> int:
        """phi^i(x); negative and large exponents are reduced mod m."""
        return int(self.powers[i % self.m, x])

    def orbit(self, x: int) -> list[int]:
        out = [x]
        y = self.perm[x]
        while y != x:
            out.append(y)
            y = self.perm[y]
        return out

    @property
    def order(self) -> int:
        return self.m

    @property
    def is_automorphism(self) -> bool:
        return all(v == 1 % self.m for v in self.pi)

    @cached_property
    def sigma_table(self) -> np.ndarray:
        """``T[x, k]`` = plain integer sum of pi over the first k points of the orbit, k <= m."""
        pi = np.asarray(self.pi, dtype=np.int64)
        steps = pi[self.powers]  # (m, N): pi(phi^i(x))
        table = np.zeros((self.group.order, self.m + 1), dtype=np.int64)
        table[:, 1:] = np.cumsum(steps.T, axis=1)
        return table

    def key(self) -> tuple:
        return (self.perm, self.pi)

    def __eq__(self, other):
        return (isinstance(other, SkewMorphism) and self.group.same_table(other.group)
                and self.perm == other.perm and self.pi == other.pi)

    def __hash__(self):
        return hash((self.perm, self.pi))


@dataclass(frozen=True)
class PeriodData:
    p: int
    quotient: SkewMorphism
    smooth_power: SkewMorphism


def permutation_order(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    m = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        m = math.lcm(m, length)
    return m


def _power_rows(perm: Sequence[int], m: int) -> np.ndarray:
    p = np.asarray(perm, dtype=np.int64)
    rows = np.empty((m, len(p)), dtype=np.int64)
    rows[0] = np.arange(len(p))
    for i in range(1, m):
        rows[i] = p[rows[i - 1]]
    rows.setflags(write=False)
    return rows


def validate_skew(G: FiniteGroup, perm: Sequence[int]) -> SkewMorphism:
    """Check that ``perm`` is a skew-morphism of G and solve for its power function."""
    perm = tuple(int(v) for v in perm)
    if len(perm) != G.order or sorted(perm) != list(range(G.order)):
        raise NotAPermutation(f"not a permutation of 0..{G.order - 1}")
    if perm[0] != 0:
        raise IdentityMoved(perm[0])
    m = permutation_order(perm)
    powers = _power_rows(perm, m)
    index: dict[bytes, int] = {}
    for i in range(m):
        key = powers[i].tobytes()
        if key in index:
            raise InternalError(f"phi^{index[key]} == phi^{i} although the order is {m}")
        index[key] = i
    p = np.asarray(perm, dtype=np.int64)
    # shifted[x, y] = phi(x)^-1 phi(xy); must be a power of phi for every x
    shifted = G.mul[G.inv[p][:, None], p[G.mul]]
    pi = []
    for x in range(G.order):
        i = index.get(shifted[x].tobytes())
        if i is None:
            raise NoPowerFunction(x)
        pi.append(i)
    if pi[0] != 1 % m:
        raise InternalError("power function is not 1 at the identity")
    return SkewMorphism(G, perm, tuple(pi), m)


# --------------------------------------------------------------------------
# enumeration

_OPEN = -2


def _gcd_consistent(congruences: dict[int, int]) -> bool:
    items = list(congruences.items())
    for i in range(len(items)):
        L1, d1 = items[i]
        for j in range(i):
            L2, d2 = items[j]
            if (d1 - d2) % math.gcd(L1, L2):
                return False
    return True


class _SkewSearch:
    """Backtracking over permutations fixing 0, built one cycle at a time.

    For every x with phi(x) known, ``L_x(y) = phi(x)^-1 phi(xy)`` must be
    one fixed power of phi.  Partial assignments are rejected when a known
    value of ``L_x`` leaves the orbit of ``y``, when the implied exponents
    disagree between cycles, or when ``L_x`` fails to commute with phi.
    """

    def __init__(self, G: FiniteGroup):
        self.G = G
        self.n = G.order
        self.mul = G.mul.tolist()
        self.inv = G.inv.tolist()
        self.img = [-1] * self.n
        self.img[0] = 0
        self.cyc = [-1] * self.n
        self.cyc[0] = 0
        self.pos = [0] * self.n
        self.clen = [1]
        self.chain: list[int] = []
        self.found: list[SkewMorphism] = []

    def run(self) -> list[SkewMorphism]:
        self._next_cycle()
        return self.found

    def _consistent(self) -> bool:
        n, mul, inv, img, cyc, pos, clen = self.n, self.mul, self.inv, self.img, self.cyc, self.pos, self.clen
        chain_len = len(self.chain)
        for x in range(1, n):
            fx = img[x]
            if fx < 0:
                continue
            ix = inv[fx]
            mx, mix = mul[x], mul[ix]
            cong: dict[int, int] = {}
            fwd = None
            back = None
            for y in range(1, n):
                fxy = img[mx[y]]
                if fxy < 0:
                    continue
                v = mix[fxy]
                cy, cv = cyc[y], cyc[v]
                if cy >= 0:
                    if cv != cy:
                        return False
                    L = clen[cy]
                    d = (pos[v] - pos[y]) % L
                    old = cong.get(L)
                    if old is None:
                        cong[L] = d
                    elif old != d:
                        return False
                elif cy == _OPEN:
                    if cv >= 0:
                        return False
                    if cv == _OPEN:
                        d = pos[v] - pos[y]
                        if d >= 0:
                            if fwd is None:
                                fwd = d
                            elif fwd != d:
                                return False
                        elif back is None:
                            back = d
                        elif back != d:
                            return False
                elif cv >= 0:
                    return False
                fy = img[y]
                if fy >= 0:
                    fxfy = img[mx[fy]]
                    fv = img[v]
                    if fxfy >= 0 and fv >= 0 and mix[fxfy] != fv:
                        return False
            if fwd is not None and back is not None and fwd - back < chain_len:
                return False
            if len(cong) > 1 and not _gcd_consistent(cong):
                return False
        return True

    def _next_cycle(self):
        start = next((x for x in range(1, self.n) if self.cyc[x] == -1), None)
        if start is None:
            self.found.append(validate_skew(self.G, self.img))
            return
        self.chain.append(start)
        self.cyc[start] = _OPEN
        self.pos[start] = 0
        self._extend_chain()
        self.chain.pop()
        self.cyc[start] = -1

    def _extend_chain(self):
        chain = self.chain
        cur = chain[-1]
        start = chain[0]
        candidates = [start] + [y for y in range(1, self.n) if self.cyc[y] == -1]
        for y in candidates:
            self.img[cur] = y
            if y == start:
                cid = len(self.clen)
                self.clen.append(len(chain))
                for z in chain:
                    self.cyc[z] = cid
                if self._consistent():
                    saved = self.chain
                    self.chain = []
                    self._next_cycle()
                    self.chain = saved
                for z in chain:
                    self.cyc[z] = _OPEN
                self.clen.pop()
            else:
                chain.append(y)
                self.cyc[y] = _OPEN
                self.pos[y] = len(chain) - 1
                if self._consistent():
                    self._extend_chain()
                chain.pop()
                self.cyc[y] = -1
            self.img[cur] = -1


def enumerate_skew(G: FiniteGroup, cap: int = config.SKEW_ENUM_CAP) -> list[SkewMorphism]:
    """All skew-morphisms of G, sorted by one-line permutation notation."""
    if G.order > cap:
        raise CapExceeded("skew-morphism enumeration", G.order, cap)
    if G.order == 1:
        return [validate_skew(G, (0,))]
    found = _SkewSearch(G).run()
    found.sort(key=lambda s: s.perm)
    return found


# --------------------------------------------------------------------------
# derived power function and its companions

def sigma_pi(sm: SkewMorphism, x: int, k: int) -> int:
    """Sum of pi over the first k points of the orbit of x, mod m."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return int(sm.sigma_table[x, k % sm.m]) % sm.m


def _checked_subgroup(G: FiniteGroup, members) -> ElementSet:
    witness = subgroup_violation(G, members)
    if witness is not None:
        raise InternalError(f"kernel set is not closed (witness {witness}); invalid skew-morphism")
    return ElementSet(G, tuple(sorted(members)), True)


def kernel_pi(sm: SkewMorphism) -> ElementSet:
    one = 1 % sm.m
    return _checked_subgroup(sm.group, [x for x, v in enumerate(sm.pi) if v == one])


def core_pi(sm: SkewMorphism) -> ElementSet:
    """Largest phi-invariant subgroup contained in Ker pi."""
    ker = set(kernel_pi(sm))
    core = set(ker)
    for i in range(1, sm.m):
        core &= {sm.apply(x, i) for x in ker}
    return _checked_subgroup(sm.group, core)


def _period(sm: SkewMorphism) -> int:
    pi = np.asarray(sm.pi)
    for p in range(1, sm.m + 1):
        if np.array_equal(pi[sm.powers[p % sm.m]], pi):
            return p
    raise InternalError("no period found")


def period(sm: SkewMorphism) -> PeriodData:
    p = _period(sm)
    quotient = quotient_skew(sm, core_pi(sm))
    smooth = power_skew(sm, p)
    if smooth is None:
        raise InternalError(f"phi^{p} is not a skew-morphism")
    if sm.m % p or quotient.m != p or _period(smooth) != 1:
        raise InternalError("period data violates its invariants")
    return PeriodData(p, quotient, smooth)


def is_smooth(sm: SkewMorphism) -> bool:
    return _period(sm) == 1


def quotient_skew(sm: SkewMorphism, N: ElementSet) -> SkewMorphism:
    """Induced skew-morphism on A/N for a phi-invariant normal subgroup N."""
    G = sm.group
    w = subgroup_violation(G, N)
    if w is not None:
        raise NotNormal(w)
    w = normality_violation(G, N)
    if w is not None:
        raise NotNormal(w)
    ns = N.as_set()
    for x in N:
        if sm.perm[x] not in ns:
            raise NotInvariant(x)
    Q, proj = quotient_group(G, N)
    bar = [-1] * Q.order
    for x in range(G.order):
        q, fq = proj(x), proj(sm.perm[x])
        if bar[q] == -1:
            bar[q] = fq
        elif bar[q] != fq:
            raise NotInvariant(x)
    qsm = validate_skew(Q, bar)
    for x in range(G.order):
        if qsm.pi[proj(x)] != sm.pi[x] % qsm.m:
            raise InternalError(f"quotient power function disagrees at {x}")
    return qsm


def power_skew(sm: SkewMorphism, k: int) -> Optional[SkewMorphism]:
    """phi^k as a skew-morphism, or None when phi^k admits no power function.

    Solvability of ``k * pi_mu(x) = sigma_pi(x, k) (mod m)`` for all x is
    checked alongside direct validation and the two must agree.
    """
    m = sm.m
    solvable = all(sigma_pi(sm, x, k) % math.gcd(k, m) == 0 for x in range(sm.group.order))
    mu = tuple(int(v) for v in sm.powers[k % m])
    try:
        result = validate_skew(sm.group, mu)
    except NoPowerFunction:
        result = None
    if (result is not None) != solvable:
        raise InternalError(f"power-function criterion disagrees with validation for k={k}")
    return result


def av_function(sm: SkewMorphism) -> tuple[int, ...]:
    """av(x) = sigma_pi(x, p) / p as residues mod m/p, where p is the period.

    This is the power function of the smooth skew-morphism phi^p.
    """
    p = _period(sm)
    mod = sm.m // p
    out = []
    for x in range(sm.group.order):
        total = int(sm.sigma_table[x, p])
        if total % p:
            raise DivisibilityViolation(x, total, p)
        out.append((total // p) % mod)
    return tuple(out)


def _lift(v: int, modulus: int) -> int:
    # integer representative in 1..modulus, so the identity always lifts to 1
    return (v - 1) % modulus + 1


def mate_lambda(sm: SkewMorphism) -> tuple[int, ...]:
    """lambda(x) = (pi(x) - quotient pi(x)) / p as residues mod m/p.

    Both power functions are lifted to 1..m and 1..p before subtracting.
    """
    core = core_pi(sm)
    quotient = quotient_skew(sm, core)
    p = quotient.m
    mod = sm.m // p
    Q, proj = quotient_group(sm.group, core)
    out = []
    for x in range(sm.group.order):
        diff = _lift(sm.pi[x], sm.m) - _lift(quotient.pi[proj(x)], p)
        if diff % p:
            raise DivisibilityViolation(x, diff, p)
        out.append((diff // p) % mod)
    return tuple(out)


# --------------------------------------------------------------------------
# serialization

def skew_to_json(sm: SkewMorphism) -> dict:
    return {"group": sm.group.label, "perm": list(sm.perm), "pi": list(sm.pi), "m": sm.m}


def skew_from_json(record: dict, G: FiniteGroup) -> SkewMorphism:
    sm = validate_skew(G, record["perm"])
    if list(sm.pi) != list(record["pi"]) or sm.m != record["m"]:
        raise InternalError("stored power function or order disagrees with recomputation")
    return sm

"""Extended skew products Ext(A, phi, Pi) and the reverse extraction.

Elements are pairs ``(a, e)`` with ``a`` in A and ``e`` in Z_n, stored at
index ``a*n + e``; the product is

    (x, c^i) * (y, c^j) = (x phi^i(y), c^(sigma_Pi(y, i) + j)).

Index 0 is ``(1_A, 0)``, so the Cayley table needs no relabeling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from . import config
from .epf import (
    Av,
    ExtendedPowerFunction,
    core_Pi,
    epf_from_json,
    epf_to_json,
    kernel_Pi,
    sigma_Pi,
    validate_epf,
)
from .errors import (
    AssociativityFailure,
    CapExceeded,
    FactorizationCollision,
    InternalError,
    NotExactProduct,
)
from .groups import (
    FiniteGroup,
    GroupMorphism,
    as_subgroup,
    associativity_violation,
    automorphisms,
    core_of_subgroup,
    from_cayley_table,
    subgroup_generated,
)
from .skewmorph import SkewMorphism, validate_skew

__all__ = [
    "ExtElement",
    "ExtSkewProduct",
    "ExtractionResult",
    "EquivalenceClass",
    "build_extension",
    "ext_multiply",
    "ext_inverse",
    "to_cayley",
    "extract_pair",
    "skew_product",
    "verify_structure",
    "equivalent_pairs",
    "pair_isomorphism",
    "classify_equivalence",
    "extension_to_json",
    "extension_from_json",
]


class ExtElement(NamedTuple):
    a: int
    e: int


@dataclass(frozen=True, eq=False)
class ExtSkewProduct:
    epf: ExtendedPowerFunction

    @property
    def group(self) -> FiniteGroup:
        return self.epf.group

    @property
    def n(self) -> int:
        return self.epf.n

    @property
    def order(self) -> int:
        return self.group.order * self.epf.n

    @property
    def c(self) -> ExtElement:
        return ExtElement(0, 1 % self.n)

    def index(self, g: Sequence[int]) -> int:
        a, e = g
        return a * self.n + e % self.n

    def element(self, idx: int) -> ExtElement:
        return ExtElement(*divmod(int(idx), self.n))

    @cached_property
    def sigma_full(self) -> np.ndarray:
        """``S[y, i] = sigma_Pi(y, i)`` for 0 <= i < n."""
        epf = self.epf
        m, n = epf.m, epf.n
        q, r = np.divmod(np.arange(n), m)
        t = epf.sigma_table
        return (t[:, m][:, None] * q[None, :] + t[:, r]) % n

    @cached_property
    def table(self) -> np.ndarray:
        A, n, m = self.group, self.n, self.epf.m
        idx = np.arange(self.order)
        a, e = np.divmod(idx, n)
        moved = self.epf.skew.powers[(e % m)[:, None], a[None, :]]
        new_a = A.mul[a[:, None], moved]
        new_e = (self.sigma_full[a[None, :], e[:, None]] + e[None, :]) % n
        out = new_a * n + new_e
        out.setflags(write=False)
        return out

    def embedded_A(self) -> tuple[int, ...]:
        return tuple(a * self.n for a in range(self.group.order))


@dataclass(frozen=True)
class ExtractionResult:
    skew: SkewMorphism
    epf: ExtendedPowerFunction
    core_index: int
    subgroup: tuple[int, ...] = field(repr=False, default=())


def ext_multiply(ext: ExtSkewProduct, g1: Sequence[int], g2: Sequence[int]) -> ExtElement:
    x, i = g1
    y, j = g2
    sm = ext.epf.skew
    a = ext.group.op(x, sm.apply(y, i))
    return ExtElement(a, (sigma_Pi(ext.epf, y, i) + j) % ext.n)


def ext_inverse(ext: ExtSkewProduct, g: Sequence[int]) -> ExtElement:
    """Left inverse (phi^-i(x^-1), c^sigma_Pi(x^-1, n-i)), which is two-sided."""
    x, i = g
    n = ext.n
    xi = int(ext.group.inv[x])
    return ExtElement(ext.epf.skew.apply(xi, -i), sigma_Pi(ext.epf, xi, (n - i) % n))


def build_extension(epf: ExtendedPowerFunction, assoc_cap: int = config.ASSOC_CAP) -> ExtSkewProduct:
    """Ext(A, phi, Pi); group axioms are rechecked exhaustively when order <= assoc_cap."""
    ext = ExtSkewProduct(epf)
    if ext.order <= assoc_cap:
        t = ext.table
        triple = associativity_violation(t)
        if triple is not None:
            raise AssociativityFailure(tuple(ext.element(v) for v in triple))
        ident = np.arange(ext.order)
        if not (np.array_equal(t[0], ident) and np.array_equal(t[:, 0], ident)):
            raise InternalError("(1, c^0) is not a two-sided identity")
        for idx in range(ext.order):
            g = ext.element(idx)
            h = ext.index(ext_inverse(ext, g))
            if t[h, idx] != 0 or t[idx, h] != 0:
                raise InternalError(f"inverse formula fails at {g}")
    return ext


def to_cayley(ext: ExtSkewProduct, cap: Optional[int] = None) -> FiniteGroup:
    cap = config.order_cap() if cap is None else cap
    if ext.order > cap:
        raise CapExceeded("Cayley table", ext.order, cap)
    label = f"ext({ext.group.label};n={ext.n};Pi={','.join(map(str, ext.epf.values))})"
    return from_cayley_table(ext.table, label=label)


def skew_product(sm: SkewMorphism) -> ExtSkewProduct:
    """A<phi>: the extension with n = m and Pi = pi."""
    return build_extension(validate_epf(sm, sm.m, sm.pi))


def extract_pair(G: FiniteGroup, A_set, c: int) -> ExtractionResult:
    """Read (phi, Pi) off an exact product G = A<c> from ``c x = phi(x) c^Pi(x)``.

    The returned skew-morphism lives on a fresh group whose element ``i`` is
    the ``i``-th smallest member of ``A_set``.
    """
    A = as_subgroup(G, A_set)
    members = A.members
    n = G.orders[c]
    if len(members) * n != G.order:
        raise NotExactProduct(f"|A| * |c| = {len(members) * n} but |G| = {G.order}")
    powers = [G.power(c, i) for i in range(n)]
    if any(p in A for p in powers[1:]):
        raise NotExactProduct("A meets <c> nontrivially")
    pos = {a: i for i, a in enumerate(members)}
    factor: dict[int, tuple[int, int]] = {}
    for a in members:
        for i, ci in enumerate(powers):
            g = int(G.mul[a, ci])
            if g in factor:
                raise FactorizationCollision(g, factor[g], (a, i))
            factor[g] = (a, i)
    if len(factor) != G.order:
        raise NotExactProduct("A<c> does not cover G")
    sub = from_cayley_table([[pos[int(G.mul[x, y])] for y in members] for x in members],
                            label=f"{G.label}|A" if G.label else "A")
    perm, values = [], []
    for x in members:
        a, i = factor[int(G.mul[c, x])]
        perm.append(pos[a])
        values.append(i)
    sm = validate_skew(sub, perm)
    epf = validate_epf(sm, n, values)
    core = core_of_subgroup(G, subgroup_generated(G, [c]))
    core_index = n // len(core)
    if core_index != sm.m:
        raise InternalError(f"skew-morphism order {sm.m} differs from core index {core_index}")
    return ExtractionResult(sm, epf, core_index, members)


# --------------------------------------------------------------------------
# structure checks

def _check(ok: bool, witness=None) -> dict:
    return {"pass": bool(ok), "witness": None if ok else witness}


def verify_structure(ext: ExtSkewProduct, cap: Optional[int] = None) -> dict:
    """Structural facts about Ext(A, phi, Pi) checked on its Cayley table.

    Returns ``{check_name: {"pass": bool, "witness": ...}}``.
    """
    cap = config.order_cap() if cap is None else cap
    if ext.order > cap:
        raise CapExceeded("structure verification", ext.order, cap)
    epf, A, sm = ext.epf, ext.group, ext.epf.skew
    n, m, N = ext.n, sm.m, A.order
    T = ext.table
    order = ext.order
    inv = np.argmin(T, axis=1)
    a_idx = np.arange(N) * n
    a_set = set(a_idx.tolist())
    c = 1 % n
    cm = m % n
    report = {}

    c_pow = [0]
    for _ in range(n - 1):
        c_pow.append(int(T[c_pow[-1], c]))
    c_order = len(set(c_pow))
    prod = {int(T[a, ci]) for a in a_idx for ci in c_pow}
    closed = all(int(T[x, y]) in a_set for x in a_idx for y in a_idx)
    bad = next((int(ci) for ci in c_pow[1:] if ci in a_set), None)
    report["complement"] = _check(
        closed and c_order == n and bad is None and len(prod) == order,
        {"closed": closed, "c_order": c_order, "meets_A_at": bad, "product_size": len(prod)})

    cm_group = sorted({int(x) for x in c_pow[::m]} if m < n else {0})
    cm_set = set(cm_group)
    normal_bad = next(((h, g) for g in range(order) for h in cm_group
                       if int(T[T[inv[g], h], g]) not in cm_set), None)
    report["cm_normal"] = _check(normal_bad is None, normal_bad)

    H = skew_product(sm)
    idx = np.arange(order)
    phi_map = (idx // n) * m + (idx % n) % m
    hom_bad = np.argwhere(phi_map[T] != H.table[phi_map[:, None], phi_map[None, :]])
    kernel = sorted(int(g) for g in np.nonzero(phi_map == 0)[0])
    surjective = len(set(phi_map.tolist())) == H.order
    report["quotient_map"] = _check(
        len(hom_bad) == 0 and surjective and kernel == cm_group and len(kernel) == n // m,
        {"hom_fails_at": hom_bad[0].tolist() if len(hom_bad) else None,
         "surjective": surjective, "kernel": kernel})

    conj_bad = None
    for x in range(N):
        g = x * n
        lhs = int(T[T[inv[g], cm], g])
        rhs = sigma_Pi(epf, x, m) % n
        if lhs != rhs:
            conj_bad = {"x": x, "conjugate": lhs, "expected": rhs}
            break
    report["conjugation_exponent"] = _check(conj_bad is None, conj_bad)

    av_trivial = all(v == 1 % (n // m) for v in Av(epf))
    central = bool(np.array_equal(T[cm], T[:, cm]))
    report["av_centrality"] = _check(av_trivial == central, {"av_trivial": av_trivial, "cm_central": central})

    def conj_A(g):
        return {int(T[T[inv[g], a], g]) for a in a_idx}

    ker = {x * n for x in kernel_Pi(epf)}
    meet = a_set & conj_A(c)
    report["kernel_intersection"] = _check(ker == meet, {"ker_Pi": sorted(ker), "A_meet_Ac": sorted(meet)})

    inter = set(a_set)
    for ci in c_pow:
        inter &= conj_A(ci)
    core = {x * n for x in core_Pi(epf)}
    report["core_intersection"] = _check(core == inter, {"core_Pi": sorted(core), "intersection": sorted(inter)})
    return report


# --------------------------------------------------------------------------
# equivalence of pairs

PairLike = Union[ExtendedPowerFunction, tuple]


def _as_epf(p: PairLike) -> ExtendedPowerFunction:
    if isinstance(p, ExtendedPowerFunction):
        return p
    sm, epf = p
    if epf.skew != sm:
        raise ValueError("pair's extended power function belongs to a different skew-morphism")
    return epf


def equivalent_pairs(p1: PairLike, p2: PairLike, cap: int = config.AUT_ENUM_CAP) -> Optional[GroupMorphism]:
    """First automorphism theta with phi2 = theta phi1 theta^-1 and Pi2 = Pi1 theta^-1."""
    e1, e2 = _as_epf(p1), _as_epf(p2)
    A = e1.group
    if not A.same_table(e2.group) or e1.n != e2.n:
        raise ValueError("pairs must share the group and the modulus n")
    phi1, phi2 = e1.skew.perm, e2.skew.perm
    for theta in automorphisms(A, cap):
        back = theta.inverse().image
        if all(phi2[x] == theta.image[phi1[back[x]]] and e2.values[x] == e1.values[back[x]]
               for x in range(A.order)):
            return theta
    return None


def pair_isomorphism(ext1: ExtSkewProduct, ext2: ExtSkewProduct, theta: GroupMorphism) -> bool:
    """Check that x c1^i -> theta(x) c2^i is an isomorphism of the two tables."""
    n = ext1.n
    idx = np.arange(ext1.order)
    a, e = np.divmod(idx, n)
    img = np.asarray(theta.image)[a] * n + e
    return bool(np.array_equal(img[ext1.table], ext2.table[img[:, None], img[None, :]]))


@dataclass(frozen=True)
class EquivalenceClass:
    representative: int
    members: tuple[int, ...]


def _sort_key(epf: ExtendedPowerFunction):
    return (epf.skew.perm, epf.values)


def classify_equivalence(pairs: Sequence[PairLike], cap: int = config.AUT_ENUM_CAP) -> list[EquivalenceClass]:
    """Partition pairs into equivalence classes (indices into ``pairs``).

    Each class is represented by its least member in (perm, values) order;
    classes are listed in order of their representatives.
    """
    epfs = [_as_epf(p) for p in pairs]
    classes: list[list[int]] = []
    for i, e in enumerate(epfs):
        for cls in classes:
            if equivalent_pairs(epfs[cls[0]], e, cap) is not None:
                cls.append(i)
                break
        else:
            classes.append([i])
    out = []
    for cls in classes:
        rep = min(cls, key=lambda i: _sort_key(epfs[i]))
        out.append(EquivalenceClass(rep, tuple(sorted(cls))))
    out.sort(key=lambda c: _sort_key(epfs[c.representative]))
    return out


# --------------------------------------------------------------------------
# serialization

def extension_to_json(ext: ExtSkewProduct) -> dict:
    record = epf_to_json(ext.epf)
    record["order"] = ext.order
    return record


def extension_from_json(record: dict, A: FiniteGroup) -> ExtSkewProduct:
    ext = build_extension(epf_from_json(record, A))
    if ext.order != record["order"]:
        raise ValueError(f"declared order {record['order']} does not match {ext.order}")
    return ext

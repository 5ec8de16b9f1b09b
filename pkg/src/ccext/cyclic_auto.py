"""Cyclic complementary extensions of Z_k determined by automorphisms x -> rx.

Every such extension is ``<a, c | a^k = c^n = 1, c^m a = a c^(mt), c a = a^r c^(1+ms)>``
where m is the multiplicative order of r mod k and (s, t) range over
Z_{n/m} x Z_{n/m}^* subject to three congruences.  The extended power
function is ``Pi(x) = 1 + m s tau(t, x)`` with ``tau(t, x) = 1 + t + ... + t^(x-1)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import config
from .epf import Av, ExtendedPowerFunction, Lambda, validate_epf
from .errors import CapExceeded, CcextError, InternalError, NotCoprime, NotMultiple, ValidationFailure
from .extension import ExtSkewProduct, build_extension, classify_equivalence
from .groups import FiniteGroup, cyclic_group
from .skewmorph import SkewMorphism, validate_skew

__all__ = [
    "AutoTriple",
    "PresentationRecord",
    "ClassifiedRecord",
    "tau",
    "multiplicative_order",
    "enumerate_triples",
    "epf_from_triple",
    "dedupe_triples",
    "presentation",
    "table_relations",
    "pi_formula",
    "relation_holds",
    "check_relations",
    "classify",
    "rotation",
    "admissible_r",
    "REFERENCE_TABLE",
    "compare_reference_table",
]


def tau(t: int, x: int, modulus: int) -> int:
    """Geometric sum 1 + t + ... + t^(x-1) mod ``modulus`` by doubling.

    Uses tau(t, 2x) = tau(t, x)(1 + t^x) and tau(t, x+1) = tau(t, x) + t^x.
    """
    if x < 0:
        raise ValueError("x must be nonnegative")
    if modulus == 1:
        return 0
    total, power = 0, 1  # tau(t, prefix), t^prefix
    for bit in bin(x)[2:] if x else "":
        total = total * (1 + power) % modulus
        power = power * power % modulus
        if bit == "1":
            total = (total + power) % modulus
            power = power * t % modulus
    return total


def multiplicative_order(r: int, k: int) -> int:
    if k == 1:
        return 1
    if math.gcd(r, k) != 1:
        raise NotCoprime(r, k)
    m, x = 1, r % k
    while x != 1:
        x = x * r % k
        m += 1
    return m


def _rep(r: int, k: int) -> int:
    """Representative of r mod k in 1..k."""
    return (r - 1) % k + 1


@dataclass(frozen=True)
class AutoTriple:
    k: int
    n: int
    r: int
    m: int
    s: int
    t: int

    @property
    def ratio(self) -> int:
        return self.n // self.m

    def conditions(self) -> tuple[bool, bool, bool]:
        q, k, r, m, s, t = self.ratio, self.k, self.r, self.m, self.s, self.t
        a = pow(t, r - 1, q) == 1 % q
        b = s * tau(t, k, q) % q == 0
        c = s * tau(tau(t, r, q), m, q) % q == (t - 1) % q
        return a, b, c

    def is_valid(self) -> bool:
        return all(self.conditions())


@dataclass(frozen=True)
class PresentationRecord:
    triple: AutoTriple
    relations: str


def _check_params(k: int, n: int, r: int) -> tuple[int, int]:
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    if math.gcd(r, k) != 1:
        raise NotCoprime(r, k)
    m = multiplicative_order(r, k)
    if n % m:
        raise NotMultiple(n, m)
    return _rep(r, k), m


def enumerate_triples(k: int, n: int, r: int) -> list[AutoTriple]:
    """All (s, t) with s in Z_{n/m}, t a unit mod n/m, satisfying the three conditions."""
    r, m = _check_params(k, n, r)
    q = n // m
    units = [t for t in range(q) if math.gcd(t, q) == 1]
    out = []
    for s in range(q):
        for t in units:
            tr = AutoTriple(k, n, r, m, s, t)
            if tr.is_valid():
                out.append(tr)
    return out


def rotation(k: int, r: int) -> SkewMorphism:
    return validate_skew(cyclic_group(k), [r * x % k for x in range(k)])


def epf_from_triple(tr: AutoTriple, sm: Optional[SkewMorphism] = None) -> ExtendedPowerFunction:
    """Pi(x) = 1 + m s tau(t, x) mod n, validated against x -> rx."""
    if sm is None:
        sm = rotation(tr.k, tr.r)
    q = tr.ratio
    values = [(1 + tr.m * (tr.s * tau(tr.t, x, q) % q)) % tr.n for x in range(tr.k)]
    try:
        return validate_epf(sm, tr.n, values)
    except CcextError as exc:
        raise ValidationFailure(f"{tr} does not give an extended power function: {exc}") from exc


def _same_function(a: AutoTriple, b: AutoTriple) -> bool:
    q = a.ratio
    return (a.s - b.s) % q == 0 and a.s * (a.t - b.t) % q == 0


def dedupe_triples(triples: Sequence[AutoTriple]) -> list[AutoTriple]:
    """Keep the least (s, t) among triples giving the same Pi.

    Equality is decided by the congruences s = s' and s(t - t') = 0 mod n/m
    and cross-checked against the value vectors.
    """
    triples = sorted(triples, key=lambda tr: (tr.s, tr.t))
    if len({(tr.k, tr.n, tr.r) for tr in triples}) > 1:
        raise ValueError("triples must share (k, n, r)")
    if not triples:
        return []
    sm = rotation(triples[0].k, triples[0].r)
    vectors = [epf_from_triple(tr, sm).values for tr in triples]
    kept: list[int] = []
    for i, tr in enumerate(triples):
        match = None
        for j in kept:
            same = _same_function(triples[j], tr)
            if same != (vectors[j] == vectors[i]):
                raise InternalError(f"dedupe criterion disagrees with values for {triples[j]} and {tr}")
            if same:
                match = j
                break
        if match is None:
            kept.append(i)
    return [triples[i] for i in kept]


# --------------------------------------------------------------------------
# relation text

def _pw(sym: str, e: int) -> str:
    if e == 0:
        return ""
    return sym if e == 1 else f"{sym}^{e}"


def _word(*parts: str) -> str:
    w = "".join(parts)
    return w or "1"


def presentation(tr: AutoTriple) -> PresentationRecord:
    k, n, m = tr.k, tr.n, tr.m
    mt = m * tr.t % n
    lift = (1 + m * tr.s) % n
    rels = (f"{_word(_pw('a', k))}={_word(_pw('c', n))}=1, "
            f"{_word(_pw('c', m % n), 'a')}={_word('a', _pw('c', mt))}, "
            f"ca={_word(_pw('a', tr.r % k), _pw('c', lift))}")
    return PresentationRecord(tr, f"⟨a,c | {rels}⟩")


def table_relations(tr: AutoTriple, epf: Optional[ExtendedPowerFunction] = None) -> list[str]:
    """Relations in the style of the printed classification table.

    ``a^c = a^(r^-1)`` when Pi is identically 1, otherwise ``c a^x = a^(rx) c^Pi(x)``
    for x running over the orbit of 1 under x -> rx.
    """
    if epf is None:
        epf = epf_from_triple(tr)
    k, n = tr.k, tr.n
    head = f"{_word(_pw('a', k))}={_word(_pw('c', n))}=1"
    if all(v == 1 % n for v in epf.values):
        rinv = pow(tr.r, -1, k) if k > 1 else 0
        return [head, f"a^c={_word(_pw('a', rinv % k))}"]
    rels = [head]
    x = 1 % k
    for _ in range(tr.m):
        y = tr.r * x % k
        rels.append(f"c{_word(_pw('a', x))}={_word(_pw('a', y), _pw('c', epf.values[x]))}")
        x = y
    return rels


def pi_formula(tr: AutoTriple) -> str:
    coef = tr.m * tr.s % tr.n
    if coef == 0:
        return "1"
    if tr.t % tr.ratio == 1 % tr.ratio:
        return f"1+{coef}x"
    return f"1+{coef}Σ_{{i=1}}^x {tr.t}^{{i-1}}"


_TOKEN = re.compile(r"([ac])(?:\^([0-9]+|[ac]))?")


def _eval_word(word: str, G: FiniteGroup, gens: dict[str, int]) -> int:
    if word == "1":
        return 0
    pos, out = 0, 0
    while pos < len(word):
        mt = _TOKEN.match(word, pos)
        if mt is None:
            raise ValueError(f"cannot parse relation word {word!r}")
        sym, exp = mt.group(1), mt.group(2)
        g = gens[sym]
        if exp is None:
            v = g
        elif exp.isdigit():
            v = G.power(g, int(exp))
        else:
            v = G.conj(g, gens[exp])
        out = G.op(out, v)
        pos = mt.end()
    return out


def relation_holds(text: str, G: FiniteGroup, a: int, c: int) -> bool:
    """Evaluate ``w1=w2(=...)`` in G; ``x^y`` with a letter exponent means y^-1 x y."""
    sides = [_eval_word(w.strip(), G, {"a": a, "c": c}) for w in text.split("=")]
    return all(v == sides[0] for v in sides)


def _relations_of(text: str) -> list[str]:
    body = text.strip()
    if body.startswith("⟨"):
        body = body[1:-1].split("|", 1)[1]
    return [r.strip() for r in body.split(",")]


def check_relations(tr: AutoTriple, ext: Optional[ExtSkewProduct] = None) -> dict[str, bool]:
    """Evaluate every presentation relation in the Cayley table of the extension."""
    if ext is None:
        ext = build_extension(epf_from_triple(tr))
    G = _TableView(ext)
    a = ext.index((1 % tr.k, 0))
    c = ext.index(ext.c)
    return {rel: relation_holds(rel, G, a, c) for rel in _relations_of(presentation(tr).relations)}


class _TableView:
    """Minimal group interface over an extension table (no revalidation)."""

    def __init__(self, ext: ExtSkewProduct):
        self.t = ext.table
        self.inv = np.argmin(self.t, axis=1)

    def op(self, x, y):
        return int(self.t[x, y])

    def power(self, g, e):
        out = 0
        for _ in range(e):
            out = int(self.t[out, g])
        return out

    def conj(self, x, g):
        return int(self.t[self.t[self.inv[g], x], g])


# --------------------------------------------------------------------------
# classification driver

@dataclass(frozen=True)
class ClassifiedRecord:
    triple: AutoTriple
    epf: ExtendedPowerFunction = field(repr=False)
    presentation: str
    table_relations: tuple[str, ...]
    class_id: Optional[int] = None

    def to_json(self) -> dict:
        tr = self.triple
        return {
            "k": tr.k, "n": tr.n, "r": tr.r, "m": tr.m, "s": tr.s, "t": tr.t,
            "Pi": list(self.epf.values),
            "Pi_formula": pi_formula(tr),
            "presentation": self.presentation,
            "table_relations": list(self.table_relations),
            "class_id": self.class_id,
        }


def admissible_r(k: int, n: int) -> list[int]:
    if k == 1:
        return [1]
    return [r for r in range(1, k) if math.gcd(r, k) == 1 and n % multiplicative_order(r, k) == 0]


def classify(k: int, n: int, r: Optional[int] = None, dedupe: bool = True,
             classes: bool = True, cap: Optional[int] = None) -> list[ClassifiedRecord]:
    """Records for every admissible r (or just ``r``), grouped by r then (s, t)."""
    cap = config.order_cap() if cap is None else cap
    rs = [_rep(r, k)] if r is not None else admissible_r(k, n)
    records: list[ClassifiedRecord] = []
    for rr in rs:
        triples = enumerate_triples(k, n, rr)
        if dedupe:
            triples = dedupe_triples(triples)
        sm = rotation(k, rr)
        for tr in triples:
            epf = epf_from_triple(tr, sm)
            records.append(ClassifiedRecord(tr, epf, presentation(tr).relations,
                                            tuple(table_relations(tr, epf))))
    if classes and records:
        if k * n > cap:
            raise CapExceeded("equivalence classification", k * n, cap)
        ids = [0] * len(records)
        for cid, cls in enumerate(classify_equivalence([rec.epf for rec in records])):
            for i in cls.members:
                ids[i] = cid
        records = [ClassifiedRecord(rec.triple, rec.epf, rec.presentation, rec.table_relations, ids[i])
                   for i, rec in enumerate(records)]
    return records


# --------------------------------------------------------------------------
# published table for k = n = 8, r = 3

REFERENCE_TABLE = [
    {"rst": (3, 0, 1), "Pi": "1", "relations": ["a^8=c^8=1", "a^c=a^3"]},
    {"rst": (3, 1, 1), "Pi": "1+2x", "relations": ["a^8=c^8=1", "ca=a^3c^5", "ca^3=ac^7"]},
    {"rst": (3, 2, 1), "Pi": "1+4x", "relations": ["a^8=c^8=1", "ca=a^3c^5", "ca^3=ac^5"]},
    {"rst": (3, 3, 1), "Pi": "1+6x", "relations": ["a^8=c^8=1", "ca=a^3c^7", "ca^3=ac^3"]},
    {"rst": (3, 1, 3), "Pi": "1+2Σ_{i=1}^x 3^{i-1}", "relations": ["a^8=c^8=1", "ca=a^3c^3", "ca^3=ac^3"]},
    {"rst": (3, 3, 3), "Pi": "1+6Σ_{i=1}^x 3^{i-1}", "relations": ["a^8=c^8=1", "ca=a^3c^7", "ca^3=ac^7"]},
]


def compare_reference_table() -> list[dict]:
    """Diff computed rows against the published table, relation by relation.

    A printed relation is flagged when it differs from the computed text;
    each flag records whether the printed relation holds in the group
    built from the row's own Pi.
    """
    records = {(rec.triple.r, rec.triple.s, rec.triple.t): rec
               for rec in classify(8, 8, r=3, classes=False)}
    report = []
    for row in REFERENCE_TABLE:
        rec = records.get(row["rst"])
        entry = {"rst": row["rst"], "present": rec is not None, "mismatches": []}
        if rec is not None:
            entry["pi_text_match"] = rec.to_json()["Pi_formula"] == row["Pi"]
            ext = build_extension(rec.epf)
            G = _TableView(ext)
            a, c = ext.index((1, 0)), ext.index(ext.c)
            for printed, computed in zip(row["relations"], rec.table_relations):
                if printed != computed:
                    entry["mismatches"].append({
                        "printed": printed,
                        "computed": computed,
                        "printed_holds": relation_holds(printed, G, a, c),
                        "computed_holds": relation_holds(computed, G, a, c),
                    })
        report.append(entry)
    return report

"""Invariant suites run by ``ccext verify`` and by the acceptance tests.

Identities are checked exhaustively over small ranges for every instance of
the default corpus, then on seeded random (x, y, k) probes.  Sums are
recomputed by direct summation so the checks do not reuse the reduction
formulas they are meant to test.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

from . import config
from .cyclic_auto import (
    admissible_r,
    check_relations,
    compare_reference_table,
    dedupe_triples,
    enumerate_triples,
    epf_from_triple,
    multiplicative_order,
    rotation,
    tau,
)
from .epf import Av, Lambda, core_Pi, enumerate_epfs, is_smooth_epf, kernel_Pi, sigma_Pi
from .extension import (
    build_extension,
    classify_equivalence,
    equivalent_pairs,
    extract_pair,
    pair_isomorphism,
    to_cayley,
    verify_structure,
)
from .groups import automorphisms, cyclic_group, dihedral_group
from .skewmorph import (
    av_function,
    core_pi,
    enumerate_skew,
    is_smooth,
    kernel_pi,
    mate_lambda,
    period,
    power_skew,
    sigma_pi,
)

SUITES = ("skew", "epf", "extension", "cyclic")


@dataclass
class Check:
    name: str
    count: int = 0
    failure: object = None

    @property
    def passed(self) -> bool:
        return self.failure is None

    def record(self, ok: bool, witness) -> None:
        self.count += 1
        if not ok and self.failure is None:
            self.failure = witness

    def line(self) -> str:
        if self.passed:
            return f"PASS {self.name} ({self.count} checks)"
        return f"FAIL {self.name} witness={self.failure}"


class Report:
    def __init__(self, suite: str):
        self.suite = suite
        self.checks: dict[str, Check] = {}

    def __call__(self, name: str) -> Check:
        if name not in self.checks:
            self.checks[name] = Check(f"{self.suite}.{name}")
        return self.checks[name]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks.values()]


# --------------------------------------------------------------------------
# corpus

def corpus_groups():
    return [cyclic_group(k) for k in range(2, 9)] + [dihedral_group(k) for k in range(2, 5)]


@lru_cache(maxsize=None)
def corpus() -> tuple:
    """(A, skew, n, epf) for every skew-morphism of the corpus groups, every
    n <= 16 with m | n and |A| n <= 128, and every extended power function."""
    out = []
    for A in corpus_groups():
        for sm in enumerate_skew(A):
            for n in range(sm.m, 17, sm.m):
                if A.order * n > 128:
                    break
                for epf in enumerate_epfs(sm, n):
                    out.append((A, sm, n, epf))
    return tuple(out)


def corpus_skews() -> list:
    seen, out = set(), []
    for A, sm, _, _ in corpus():
        key = (A.label, sm.perm)
        if key not in seen:
            seen.add(key)
            out.append(sm)
    return out


def direct_sigma(perm, values, x: int, k: int, modulus: int) -> int:
    total = 0
    for _ in range(k):
        total += values[x]
        x = perm[x]
    return total % modulus


def _apply_power(sm, x, k):
    for _ in range(k % sm.m):
        x = sm.perm[x]
    return x


# --------------------------------------------------------------------------
# suites

def skew_suite(probes: int, seed: int) -> Report:
    rep = Report("skew")
    rng = random.Random(seed)
    skews = corpus_skews()
    for sm in skews:
        A, m, N = sm.group, sm.m, sm.group.order
        ker = kernel_pi(sm).as_set()
        for x in range(N):
            rep("sigma_full_orbit_zero").record(sigma_pi(sm, x, m) == 0, (A.label, sm.perm, x))
            for y in range(N):
                same = sm.pi[x] == sm.pi[y]
                rep("pi_constant_on_cosets").record(same == (A.op(x, int(A.inv[y])) in ker), (A.label, sm.perm, x, y))
                rep("pi_of_product").record(sm.pi[A.op(x, y)] == sigma_pi(sm, y, sm.pi[x]), (A.label, sm.perm, x, y))
                for k in range(0, 2 * m + 1):
                    lhs = sm.apply(A.op(x, y), k)
                    rhs = A.op(sm.apply(x, k), sm.apply(y, sigma_pi(sm, x, k)))
                    rep("power_product_rule").record(lhs == rhs, (A.label, sm.perm, x, y, k))
                    rep("sigma_product_rule").record(
                        sigma_pi(sm, A.op(x, y), k) == sigma_pi(sm, y, sigma_pi(sm, x, k)), (A.label, sm.perm, x, y, k))
        for k in range(0, 3 * m + 1):
            direct = [direct_sigma(sm.perm, sm.pi, x, k, m) for x in range(N)]
            rep("sigma_reduction").record(direct == [sigma_pi(sm, x, k) for x in range(N)], (A.label, sm.perm, k))
            rep("sigma_zero_iff_m_divides").record(all(v == 0 for v in direct) == (k % m == 0), (A.label, sm.perm, k))
            for k2 in range(0, 3 * m + 1):
                d2 = [direct_sigma(sm.perm, sm.pi, x, k2, m) for x in range(N)]
                rep("sigma_equal_iff_congruent").record((direct == d2) == ((k - k2) % m == 0), (A.label, sm.perm, k, k2))
        for k in range(0, m + 1):
            mu = power_skew(sm, k)
            if mu is not None:
                rep("power_function_of_power").record(
                    all((k * mu.pi[x] - sigma_pi(sm, x, k)) % m == 0 for x in range(N)), (A.label, sm.perm, k))
            auto = all(sigma_pi(sm, x, k) == k % m for x in range(N))
            rep("power_is_automorphism").record(auto == (mu is not None and mu.is_automorphism), (A.label, sm.perm, k))
        pdata = period(sm)
        p = pdata.p
        rep("period_divides_order").record(m % p == 0 and pdata.quotient.m == p, (A.label, sm.perm, p))
        rep("period_power_smooth").record(is_smooth(pdata.smooth_power) and pdata.smooth_power.m == m // p,
                                          (A.label, sm.perm))
        for k in range(1, 2 * m + 1):
            zero = all(sigma_pi(sm, x, k) % p == 0 for x in range(N))
            rep("sigma_mod_period").record(zero == (k % p == 0), (A.label, sm.perm, k))
        av = av_function(sm)
        mod = m // p
        rep("av_is_power_function_of_phi_p").record(
            all(av[x] == pdata.smooth_power.pi[x] % mod for x in range(N)), (A.label, sm.perm))
        for x in range(N):
            rep("av_orbit_constant").record(av[sm.perm[x]] == av[x], (A.label, sm.perm, x))
            rep("av_unit").record(math.gcd(av[x], mod) == 1, (A.label, sm.perm, x))
            for y in range(N):
                rep("av_homomorphism").record(av[A.op(x, y)] == av[x] * av[y] % mod, (A.label, sm.perm, x, y))
        if pdata.quotient.is_automorphism:
            lam = mate_lambda(sm)
            for x in range(N):
                for y in range(N):
                    rep("lambda_cocycle").record(lam[A.op(x, y)] == (av[y] * lam[x] + lam[y]) % mod,
                                                 (A.label, sm.perm, x, y))
        core = core_pi(sm).as_set()
        rep("core_invariant").record(all(sm.perm[x] in core for x in core) and core <= ker, (A.label, sm.perm))
    for A in corpus_groups():
        auts = {f.image for f in automorphisms(A)}
        skews_A = enumerate_skew(A)
        homs = {s.perm for s in skews_A if s.is_automorphism}
        rep("automorphisms_match").record(homs == auts, A.label)
    for k in (3, 5, 7):
        G = cyclic_group(k)
        rep("gcd_criterion").record(len(enumerate_skew(G)) == len(automorphisms(G)), k)
    for _ in range(probes):
        sm = rng.choice(skews)
        A, N = sm.group, sm.group.order
        x, y, k = rng.randrange(N), rng.randrange(N), rng.randrange(10**4)
        rep("random_pi_of_product").record(sm.pi[A.op(x, y)] == sigma_pi(sm, y, sm.pi[x]), (A.label, sm.perm, x, y))
        rep("random_power_product_rule").record(
            sm.apply(A.op(x, y), k) == A.op(sm.apply(x, k), sm.apply(y, sigma_pi(sm, x, k))), (A.label, sm.perm, x, y, k))
        rep("random_sigma_product_rule").record(
            sigma_pi(sm, A.op(x, y), k) == sigma_pi(sm, y, sigma_pi(sm, x, k)), (A.label, sm.perm, x, y, k))
        rep("random_sigma_reduction").record(
            sigma_pi(sm, x, k) == direct_sigma(sm.perm, sm.pi, x, k, sm.m), (A.label, sm.perm, x, k))
    return rep


def epf_suite(probes: int, seed: int, completeness: bool = True) -> Report:
    rep = Report("epf")
    rng = random.Random(seed + 1)
    items = corpus()
    for A, sm, n, epf in items:
        m, N, ratio = sm.m, A.order, n // sm.m
        tag = (A.label, sm.perm, n, epf.values)
        for x in range(N):
            for y in range(N):
                for k in range(0, n + m + 1):
                    rep("sigma_product_rule").record(
                        sigma_Pi(epf, A.op(x, y), k) == sigma_Pi(epf, y, sigma_Pi(epf, x, k)), tag + (x, y, k))
        direct = {}
        for k in range(0, 2 * n + 1):
            direct[k] = [direct_sigma(sm.perm, epf.values, x, k, n) for x in range(N)]
            rep("sigma_reduction").record(direct[k] == [sigma_Pi(epf, x, k) for x in range(N)], tag + (k,))
            rep("sigma_zero_iff_n_divides").record(all(v == 0 for v in direct[k]) == (k % n == 0), tag + (k,))
        for k1 in range(0, 2 * n + 1):
            for k2 in range(k1, 2 * n + 1):
                rep("sigma_equal_iff_congruent").record((direct[k1] == direct[k2]) == ((k1 - k2) % n == 0),
                                                        tag + (k1, k2))
        av, lam = Av(epf), Lambda(epf)
        for x in range(N):
            rep("Av_orbit_constant").record(av[sm.perm[x]] == av[x], tag + (x,))
            for y in range(N):
                rep("Av_homomorphism").record(av[A.op(x, y)] == av[x] * av[y] % ratio, tag + (x, y))
                if sm.is_automorphism:
                    rep("Lambda_cocycle").record(lam[A.op(x, y)] == (lam[y] + lam[x] * av[y]) % ratio, tag + (x, y))
                    if all(a == 1 % ratio for a in av):
                        rep("Lambda_additive").record(lam[A.op(x, y)] == (lam[x] + lam[y]) % ratio, tag + (x, y))
        rep("kernel_containment").record(kernel_Pi(epf).as_set() <= kernel_pi(sm).as_set(), tag)
        rep("core_containment").record(core_Pi(epf).as_set() <= core_pi(sm).as_set(), tag)
        if is_smooth_epf(epf):
            rep("smooth_implies_smooth_skew").record(is_smooth(sm), tag)
    for sm in corpus_skews():
        only = enumerate_epfs(sm, sm.m)
        rep("modulus_m_gives_pi").record([e.values for e in only] == [sm.pi], (sm.group.label, sm.perm))
    for _ in range(probes):
        A, sm, n, epf = rng.choice(items)
        N = A.order
        x, y, k = rng.randrange(N), rng.randrange(N), rng.randrange(10**4)
        tag = (A.label, sm.perm, n, epf.values, x, y, k)
        rep("random_sigma_product_rule").record(
            sigma_Pi(epf, A.op(x, y), k) == sigma_Pi(epf, y, sigma_Pi(epf, x, k)), tag)
        q, r = divmod(k, sm.m)
        rep("random_sigma_split").record(
            sigma_Pi(epf, x, k) == (q * sigma_Pi(epf, x, sm.m) + sigma_Pi(epf, x, r)) % n
            == direct_sigma(sm.perm, epf.values, x, k, n), tag)
    if completeness:
        for k, r, n in completeness_cases():
            sm = rotation(k, r)
            got = sorted(epf_from_triple(tr, sm).values for tr in dedupe_triples(enumerate_triples(k, n, r)))
            want = [e.values for e in enumerate_epfs(sm, n)]
            rep("classifier_completeness").record(got == want, (k, r, n))
    return rep


def completeness_cases(max_k: int = 10, max_order: int = 256) -> Iterator[tuple[int, int, int]]:
    for k in range(1, max_k + 1):
        rs = [1] if k == 1 else [r for r in range(1, k) if math.gcd(r, k) == 1]
        for r in rs:
            m = multiplicative_order(r, k)
            for n in range(m, max_order // k + 1, m):
                yield k, r, n


def extension_suite(probes: int, seed: int) -> Report:
    rep = Report("extension")
    for A, sm, n, epf in corpus():
        tag = (A.label, sm.perm, n, epf.values)
        ext = build_extension(epf)
        G = to_cayley(ext)
        res = extract_pair(G, ext.embedded_A(), ext.index(ext.c))
        rep("round_trip").record(res.skew.perm == sm.perm and res.skew.pi == sm.pi and res.epf.values == epf.values
                                 and res.skew.group.same_table(A), tag)
        rep("core_index").record(res.core_index == sm.m, tag)
        for name, check in verify_structure(ext).items():
            rep(name).record(check["pass"], tag + (check["witness"],))
    by_key: dict = {}
    for A, sm, n, epf in corpus():
        by_key.setdefault((A.label, n), []).append(epf)
    for (label, n), epfs in by_key.items():
        if len(epfs) > 12:
            epfs = epfs[:12]
        for i, e1 in enumerate(epfs):
            rep("reflexive").record(equivalent_pairs(e1, e1) is not None, (label, n, i))
            for j, e2 in enumerate(epfs):
                th = equivalent_pairs(e1, e2)
                back = equivalent_pairs(e2, e1)
                rep("symmetric").record((th is None) == (back is None), (label, n, i, j))
                if th is not None:
                    rep("theta_isomorphism").record(
                        pair_isomorphism(build_extension(e1), build_extension(e2), th), (label, n, i, j))
                    for l, e3 in enumerate(epfs):
                        if equivalent_pairs(e2, e3) is not None:
                            rep("transitive").record(equivalent_pairs(e1, e3) is not None, (label, n, i, j, l))
    return rep


def cyclic_suite(probes: int, seed: int) -> Report:
    rep = Report("cyclic")
    rng = random.Random(seed + 2)
    for _ in range(probes):
        mod = rng.randrange(1, 200)
        t = rng.randrange(mod)
        x, y = rng.randrange(60), rng.randrange(60)
        direct = lambda tt, kk: sum(pow(tt, i, mod) for i in range(kk)) % mod  # noqa: E731
        rep("tau_direct").record(tau(t, x, mod) == direct(t, x), (t, x, mod))
        rep("tau_sum_law").record(
            tau(t, x + y, mod) == (tau(t, x, mod) + pow(t, x, mod) * tau(t, y, mod)) % mod, (t, x, y, mod))
        rep("tau_product_law").record(
            tau(t, x * y, mod) == tau(t, x, mod) * tau(pow(t, x, mod), y, mod) % mod, (t, x, y, mod))
    for k in range(1, 9):
        for n in range(1, 17):
            for r in admissible_r(k, n):
                sm = rotation(k, r)
                for tr in enumerate_triples(k, n, r):
                    epf = epf_from_triple(tr, sm)
                    q = tr.ratio
                    rep("Av_of_generator").record(Av(epf)[1 % k] == tr.t % q, tr)
                    rep("Lambda_of_generator").record(Lambda(epf)[1 % k] == tr.s % q, tr)
                    if k * n <= 128:
                        holds = check_relations(tr)
                        rep("presentation_holds").record(all(holds.values()), (tr, holds))
    table = compare_reference_table()
    flagged = [(row["rst"], mm["printed"]) for row in table for mm in row["mismatches"]]
    rep("reference_table_rows").record(all(row["present"] and row["pi_text_match"] for row in table), table)
    rep("reference_table_only_known_typo").record(flagged == [((3, 1, 1), "ca=a^3c^5")], flagged)
    epfs = [epf_from_triple(tr) for tr in enumerate_triples(8, 8, 3)]
    classes = classify_equivalence(epfs)
    rep("reference_table_classes").record(len(classes) == 5, [c.members for c in classes])
    return rep


def run_suite(name: str, probes: int = 10**4, seed: int = config.DEFAULT_SEED) -> Report:
    fn: dict[str, Callable] = {
        "skew": skew_suite,
        "epf": epf_suite,
        "extension": extension_suite,
        "cyclic": cyclic_suite,
    }
    return fn[name](probes, seed)

"""Subgroup structure: center, derived subgroup, Frattini quotient, parity,
height, and the two Adney-Yen subgroups.

All membership tests are closed-form coordinate checks on collected words:

    derived subgroup  <a1, a3^p, ..., an^p>   (elementary abelian, rank n-1)
    center            <a2^p> x derived

Height is computed directly from its definition, by walking the chain of
p-th power subgroups of the enumerated abelian quotient G/G'.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import TooLarge
from .group import Element, GroupParams, generator, order, vec_pow

QUOTIENT_ENUM_LIMIT = 10**6


@dataclass(frozen=True)
class GroupConstants:
    """Exponents a, b, c with exp(Z) = p^a, exp(G') = p^b, exp(G/G') = p^c,
    and d = min(a, c)."""

    a: int
    b: int
    c: int
    d: int


def constants(params: GroupParams) -> GroupConstants:
    a = params.m - 1
    b = 1
    c = params.m
    return GroupConstants(a=a, b=b, c=c, d=min(a, c))


def is_central(g: Element) -> bool:
    """Membership in <a2^p> x G'."""
    p = g.params.p
    e = g.exps
    return e[0] == 0 and e[2] % p == 0 and all(e[i] % p == 0 for i in range(3, len(e)))


def in_derived(g: Element) -> bool:
    """Membership in <a1, a3^p, ..., an^p>."""
    p = g.params.p
    e = g.exps
    return e[0] == 0 and e[2] == 0 and all(e[i] % p == 0 for i in range(3, len(e)))


def parity(g: Element) -> tuple[int, ...]:
    """The mod-p vector (e0, e3, e4, ..., en); central automorphisms preserve it."""
    p = g.params.p
    e = g.exps
    return (e[0] % p,) + tuple(e[i] % p for i in range(3, len(e)))


def frattini_coordinates(g: Element) -> tuple[int, ...]:
    """Image of g in G/Phi(G) = (Z_p)^n on the minimal generators a0, a2, ..., an.

    a1 is omitted: it lies in G' and hence in the Frattini subgroup.
    """
    p = g.params.p
    e = g.exps
    return (e[0] % p,) + tuple(e[i] % p for i in range(2, len(e)))


def _coset_key(params: GroupParams, exps: tuple[int, ...]) -> tuple[int, ...]:
    # G'-coset invariant of a collected word: a1 dies, i>=3 entries mod p.
    p = params.p
    return (exps[0], exps[2]) + tuple(exps[i] % p for i in range(3, params.n + 1))


def _key_rep(params: GroupParams, key: tuple[int, ...]) -> tuple[int, ...]:
    return (key[0], 0, key[1]) + key[2:]


@lru_cache(maxsize=None)
def _power_chain(params: GroupParams) -> list[frozenset]:
    """Chain [A, pA, p^2 A, ...] of the abelian quotient A = G/G', as coset-key
    sets, ending at the first trivial term."""
    quotient_size = params.p * params.p_m * params.p ** (params.n - 2)
    if quotient_size > QUOTIENT_ENUM_LIMIT:
        raise TooLarge(f"|G/G'| = {quotient_size} exceeds {QUOTIENT_ENUM_LIMIT}")
    p = params.p
    keys = {
        (e0, e2) + tail
        for e0 in range(p)
        for e2 in range(params.p_m)
        for tail in itertools.product(range(p), repeat=params.n - 2)
    }
    chain = [frozenset(keys)]
    trivial = _coset_key(params, params.identity_vec())
    while chain[-1] != frozenset({trivial}):
        nxt = frozenset(
            _coset_key(params, vec_pow(params, _key_rep(params, k), p)) for k in chain[-1]
        )
        chain.append(nxt)
    return chain


def height_mod_derived(g: Element) -> int | float:
    """Height of gG' in G/G': largest t with gG' a p^t-th power; inf on G'."""
    if in_derived(g):
        return math.inf
    chain = _power_chain(g.params)
    key = _coset_key(g.params, g.exps)
    t = 0
    while t + 1 < len(chain) and key in chain[t + 1]:
        t += 1
    return t


def in_K(g: Element) -> bool:
    """Central elements whose G'-coset has height >= b in G/G'."""
    if not is_central(g):
        return False
    return height_mod_derived(g) >= constants(g.params).b


def in_R(g: Element) -> bool:
    """Central elements of order at most p^d."""
    if not is_central(g):
        return False
    return order(g) <= g.params.p ** constants(g.params).d


def characteristic_series(params: GroupParams) -> tuple[list[list[Element]], list[list[Element]]]:
    """Generator lists for the two descending characteristic series K_i, L_i
    (0 <= i <= n-1) inside the maximal abelian subgroup H = <a1, ..., an>."""
    n = params.n
    p = params.p
    a = [generator(params, i) for i in range(n + 1)]
    v = a[2] ** params.v_exponent
    h_gens = [a[i] for i in range(1, n + 1)]

    k_series = [list(h_gens)]
    for i in range(1, n):
        gens = [a[j] for j in range(1, n - i + 1)]
        gens += [a[j] ** p for j in range(n - i + 1, n + 1)]
        k_series.append(gens)

    l_series = [list(h_gens)]
    l_series.append([a[1], v] + [a[j] for j in range(3, n + 1)])
    for i in range(2, n):
        gens = [a[1], v]
        gens += [a[j] ** p for j in range(3, i + 2)]
        gens += [a[j] for j in range(i + 2, n + 1)]
        l_series.append(gens)
    return k_series, l_series

"""Exact arithmetic in a family of finite class-2 p-groups.

The group is generated by a0, a1, ..., an (p prime, m >= 2, n >= 3)
subject to

    a1^p = 1,   a2^(p^m) = 1,   ai^(p^2) = 1  (3 <= i <= n),
    a_{n-1}^p = a0^p,
    [a1, a0] = 1,   [an, a0] = a1,   [a_{i-1}, a0] = ai^p  (3 <= i <= n),
    [ai, aj] = 1    (1 <= i < j <= n).

Every element has a unique collected word a0^e0 a1^e1 ... an^en with
0 <= e0, e1 < p, 0 <= e2 < p^m and 0 <= ei < p^2 for i >= 3, so elements
are stored as exponent vectors.  Because the group has nilpotency class 2,
commutators are central and multiplication reduces to moving the right
factor's a0-block past the left factor's tail in one closed-form step;
an a0 exponent reaching p is folded into the tail via a0^p = a_{n-1}^p.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IndexOutOfRange, NotPrime, ParamMismatch, RangeViolation, WidthOverflow

MAX_WIDTH = 2**63 - 1

# Witnesses making Miller-Rabin deterministic for all 64-bit inputs.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(x: int) -> bool:
    """Deterministic Miller-Rabin, valid for x < 2^64."""
    if x < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if x == q:
            return True
        if x % q == 0:
            return False
    d, s = x - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        y = pow(a, d, x)
        if y in (1, x - 1):
            continue
        for _ in range(s - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class GroupParams:
    """The triple (p, m, n) plus derived constants for one group instance."""

    p: int
    m: int
    n: int
    moduli: tuple[int, ...] = field(init=False, repr=False, compare=False)
    order: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.m < 2 or self.n < 3:
            raise RangeViolation(f"need m >= 2 and n >= 3, got m={self.m}, n={self.n}")
        if not is_prime(self.p):
            raise NotPrime(f"p={self.p} is not prime")
        pm = self.p**self.m
        if pm > MAX_WIDTH:
            raise WidthOverflow(f"p^m = {pm} exceeds the 2^63-1 width contract")
        mods = (self.p, self.p, pm) + (self.p * self.p,) * (self.n - 2)
        object.__setattr__(self, "moduli", mods)
        order = 1
        for m_i in mods:
            order *= m_i
        object.__setattr__(self, "order", order)

    @property
    def p_m(self) -> int:
        """p^m, the modulus of the a2 exponent."""
        return self.moduli[2]

    @property
    def v_exponent(self) -> int:
        """p^(m-1); a2 raised to it generates the order-p central factor."""
        return self.p ** (self.m - 1)

    def identity_vec(self) -> tuple[int, ...]:
        return (0,) * (self.n + 1)


def new_params(p: int, m: int, n: int) -> GroupParams:
    return GroupParams(p, m, n)


# Vector-level arithmetic.  These operate on raw exponent tuples so that
# enumeration sweeps can avoid Element allocation in hot loops; Element
# methods delegate here.


def vec_mul(par: GroupParams, u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    n = par.n
    p = par.p
    w = [a + b for a, b in zip(u, v)]
    y = v[0]
    if y:
        # move a0^y left past u's tail: multiply in [tail(u), a0]^y
        w[1] += u[n] * y
        for i in range(3, n + 1):
            w[i] += p * u[i - 1] * y
    x = w[0]
    if x >= p:
        w[n - 1] += p * (x // p)  # a0^p = a_{n-1}^p
        w[0] = x % p
    return tuple(a % m for a, m in zip(w, par.moduli))


def vec_inv(par: GroupParams, u: tuple[int, ...]) -> tuple[int, ...]:
    n = par.n
    p = par.p
    x = u[0]
    w = [-a for a in u]
    if x:
        # (a0^x t)^-1 = a0^-x t^-1 [t, a0]^x
        w[1] += u[n] * x
        for i in range(3, n + 1):
            w[i] += p * u[i - 1] * x
        r = (-x) % p
        w[0] = r
        w[n - 1] += -x - r  # carry is a multiple of p, folded via a0^p = a_{n-1}^p
    return tuple(a % m for a, m in zip(w, par.moduli))


def vec_pow(par: GroupParams, u: tuple[int, ...], e: int) -> tuple[int, ...]:
    if e < 0:
        u = vec_inv(par, u)
        e = -e
    acc = par.identity_vec()
    base = u
    while e:
        if e & 1:
            acc = vec_mul(par, acc, base)
        e >>= 1
        if e:
            base = vec_mul(par, base, base)
    return acc


@dataclass(frozen=True)
class Element:
    """A group element as its collected exponent vector (e0, ..., en)."""

    params: GroupParams
    exps: tuple[int, ...]

    def __post_init__(self) -> None:
        mods = self.params.moduli
        if len(self.exps) != len(mods):
            raise RangeViolation(
                f"exponent vector has length {len(self.exps)}, expected {len(mods)}"
            )
        object.__setattr__(self, "exps", tuple(a % m for a, m in zip(self.exps, mods)))

    def __mul__(self, other: Element) -> Element:
        if self.params != other.params:
            raise ParamMismatch("elements live in different groups")
        return Element(self.params, vec_mul(self.params, self.exps, other.exps))

    def __pow__(self, e: int) -> Element:
        return Element(self.params, vec_pow(self.params, self.exps, e))

    def inverse(self) -> Element:
        return Element(self.params, vec_inv(self.params, self.exps))

    def is_identity(self) -> bool:
        return not any(self.exps)


def identity(params: GroupParams) -> Element:
    return Element(params, params.identity_vec())


def generator(params: GroupParams, i: int) -> Element:
    if not 0 <= i <= params.n:
        raise IndexOutOfRange(f"generator index {i} not in 0..{params.n}")
    exps = [0] * (params.n + 1)
    exps[i] = 1
    return Element(params, tuple(exps))


def generators(params: GroupParams) -> list[Element]:
    return [generator(params, i) for i in range(params.n + 1)]


def multiply(g: Element, h: Element) -> Element:
    return g * h


def inverse(g: Element) -> Element:
    return g.inverse()


def power(g: Element, e: int) -> Element:
    return g**e


def commutator(g: Element, h: Element) -> Element:
    """[g, h] = g^-1 h^-1 g h, collected."""
    return g.inverse() * h.inverse() * g * h


def conjugate(g: Element, h: Element) -> Element:
    """h^-1 g h."""
    return h.inverse() * g * h


def order(g: Element) -> int:
    """Least e >= 1 with g^e = 1; always a power of p here."""
    e = 1
    x = g
    while not x.is_identity():
        x = x**g.params.p
        e *= g.params.p
    return e


def random_element(params: GroupParams, rng) -> Element:
    return Element(params, tuple(rng.randrange(m) for m in params.moduli))


def element_to_text(g: Element) -> str:
    """Canonical text form ``p,m,n:e0,e1,...,en``."""
    par = g.params
    return f"{par.p},{par.m},{par.n}:" + ",".join(str(e) for e in g.exps)


def element_from_text(text: str) -> Element:
    try:
        head, tail = text.split(":")
        p, m, n = (int(t) for t in head.split(","))
        exps = tuple(int(t) for t in tail.split(","))
    except ValueError as exc:
        raise RangeViolation(f"malformed element text {text!r}") from exc
    return Element(GroupParams(p, m, n), exps)

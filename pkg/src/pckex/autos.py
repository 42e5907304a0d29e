"""Central automorphisms and general automorphism candidates.

The central automorphism group decomposes as a direct product A x B:

  * an A-map is a2 |-> a2^k with k = l*p + 1, plus ai |-> ai * v^(r_i) for
    indices i in a subset of {0, 3, ..., n}, where v = a2^(p^(m-1)) is the
    central element of order p; its whole action on a collected word is a
    single affine update of the a2 exponent;
  * a B-map multiplies each generator other than a1 by an element of the
    derived subgroup, which every central automorphism fixes pointwise.

Both families are closed under composition and inversion componentwise, so
a central automorphism is stored in the canonical form (A-part, B-part).

General candidates are generator-image maps; ``is_automorphism`` checks the
defining relations on the images and invertibility of the induced matrix on
the Frattini quotient, which together certify an automorphism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .errors import (
    NotAutomorphism,
    NotHomomorphism,
    ParamMismatch,
    RangeViolation,
)
from .group import Element, GroupParams, commutator, generator, generators, identity
from .structure import frattini_coordinates, in_derived, is_central


def _norm_coeff_map(params: GroupParams, r: Mapping[int, int] | Iterable[tuple[int, int]]):
    """Sort an index->coefficient map, reduce mod p, drop zeros."""
    items = dict(r)
    allowed = {0, *range(3, params.n + 1)}
    out = []
    for i in sorted(items):
        if i not in allowed:
            raise RangeViolation(f"coefficient index {i} not in {{0, 3..{params.n}}}")
        c = items[i] % params.p
        if c:
            out.append((i, c))
    return tuple(out)


@dataclass(frozen=True)
class AutA:
    """a2-exponent family: a2 |-> a2^(l*p+1), ai |-> ai * v^(r_i)."""

    params: GroupParams
    l: int
    r: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        par = self.params
        if not 0 <= self.l < par.v_exponent:
            raise RangeViolation(f"l={self.l} not in [0, p^(m-1))")
        if par.n == 3 and self.l % par.p ** (par.m - 2):
            # With n = 3 the relation a2^p = a0^p forces k = 1 mod p^(m-1),
            # so only l divisible by p^(m-2) yields an automorphism.
            raise NotAutomorphism(f"l={self.l} breaks a2^p = a0^p at n=3")
        object.__setattr__(self, "r", _norm_coeff_map(par, self.r))

    @property
    def k(self) -> int:
        return self.l * self.params.p + 1

    def is_identity(self) -> bool:
        return self.l == 0 and not self.r

    def apply(self, g: Element) -> Element:
        if g.params != self.params:
            raise ParamMismatch("automorphism and element have different params")
        par = self.params
        s = sum(c * g.exps[i] for i, c in self.r)
        e2 = (self.k * g.exps[2] + par.v_exponent * s) % par.p_m
        exps = g.exps[:2] + (e2,) + g.exps[3:]
        return Element(par, exps)

    def compose(self, other: AutA) -> AutA:
        if other.params != self.params:
            raise ParamMismatch("cannot compose over different params")
        k = self.k * other.k % self.params.p_m
        merged = dict(self.r)
        for i, c in other.r:
            merged[i] = merged.get(i, 0) + c
        return AutA(self.params, (k - 1) // self.params.p, merged)

    def invert(self) -> AutA:
        k_inv = pow(self.k, -1, self.params.p_m)
        return AutA(self.params, (k_inv - 1) // self.params.p, {i: -c for i, c in self.r})


def _norm_z_map(params: GroupParams, z: Mapping[int, Element] | Iterable[tuple[int, Element]]):
    items = dict(z)
    allowed = {0, *range(2, params.n + 1)}
    out = []
    for i in sorted(items):
        if i not in allowed:
            raise RangeViolation(f"z index {i} not in {{0, 2..{params.n}}}")
        zi = items[i]
        if zi.params != params:
            raise ParamMismatch("z value from a different group")
        if not in_derived(zi):
            raise RangeViolation(f"z_{i} is not in the derived subgroup")
        if not zi.is_identity():
            out.append((i, zi))
    return tuple(out)


@dataclass(frozen=True)
class AutB:
    """Derived-factor family: ai |-> ai * z_i with z_i in G', a1 fixed."""

    params: GroupParams
    z: tuple[tuple[int, Element], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "z", _norm_z_map(self.params, self.z))

    def is_identity(self) -> bool:
        return not self.z

    def apply(self, g: Element) -> Element:
        if g.params != self.params:
            raise ParamMismatch("automorphism and element have different params")
        par = self.params
        w = list(g.exps)
        for i, zi in self.z:
            e = g.exps[i]
            if e:
                for c, zc in enumerate(zi.exps):
                    w[c] += zc * e
        return Element(par, tuple(w))

    def compose(self, other: AutB) -> AutB:
        if other.params != self.params:
            raise ParamMismatch("cannot compose over different params")
        merged = dict(self.z)
        for i, zi in other.z:
            merged[i] = merged[i] * zi if i in merged else zi
        return AutB(self.params, merged)

    def invert(self) -> AutB:
        return AutB(self.params, {i: zi.inverse() for i, zi in self.z})


@dataclass(frozen=True)
class CentralAut:
    """A central automorphism in canonical (A-part, B-part) form."""

    a_part: AutA
    b_part: AutB

    def __post_init__(self) -> None:
        if self.a_part.params != self.b_part.params:
            raise ParamMismatch("A- and B-parts built over different params")

    @property
    def params(self) -> GroupParams:
        return self.a_part.params

    def is_identity(self) -> bool:
        return self.a_part.is_identity() and self.b_part.is_identity()

    def apply(self, g: Element) -> Element:
        # The parts commute, so the application order is immaterial.
        return self.a_part.apply(self.b_part.apply(g))

    def compose(self, other: CentralAut) -> CentralAut:
        return CentralAut(
            self.a_part.compose(other.a_part), self.b_part.compose(other.b_part)
        )

    def invert(self) -> CentralAut:
        return CentralAut(self.a_part.invert(), self.b_part.invert())


Automorphism = Union[AutA, AutB, CentralAut, "GeneratorMap"]


def identity_a(params: GroupParams) -> AutA:
    return AutA(params, 0)


def identity_b(params: GroupParams) -> AutB:
    return AutB(params, ())


def identity_central(params: GroupParams) -> CentralAut:
    return CentralAut(identity_a(params), identity_b(params))


def apply(aut: Automorphism, g: Element) -> Element:
    return aut.apply(g)


def compose(f: CentralAut, g: CentralAut) -> CentralAut:
    return f.compose(g)


def invert(f: CentralAut) -> CentralAut:
    return f.invert()


def sample_A(params: GroupParams, rng, stride: int | None = None) -> AutA:
    """Uniform A-map; each index enters the coefficient set with chance 1/2.

    ``stride`` restricts l to multiples of it (used for the constrained
    variant where l is a multiple of p^(m-2)); n = 3 forces that stride.
    """
    if stride is None:
        stride = params.p ** (params.m - 2) if params.n == 3 else 1
    if params.v_exponent % stride:
        raise RangeViolation(f"stride {stride} does not divide p^(m-1)")
    l = stride * rng.randrange(params.v_exponent // stride)
    r = {}
    for i in (0, *range(3, params.n + 1)):
        if rng.getrandbits(1):
            r[i] = rng.randrange(1, params.p) if params.p > 2 else 1
    return AutA(params, l, r)


def random_derived(params: GroupParams, rng) -> Element:
    """Uniform element of the derived subgroup."""
    exps = [0] * (params.n + 1)
    exps[1] = rng.randrange(params.p)
    for i in range(3, params.n + 1):
        exps[i] = params.p * rng.randrange(params.p)
    return Element(params, tuple(exps))


def sample_B(params: GroupParams, rng) -> AutB:
    z = {i: random_derived(params, rng) for i in (0, *range(2, params.n + 1))}
    return AutB(params, z)


def sample_central(params: GroupParams, rng) -> CentralAut:
    return CentralAut(sample_A(params, rng), sample_B(params, rng))


@dataclass(frozen=True)
class GeneratorMap:
    """A candidate endomorphism given by the images of all n+1 generators."""

    params: GroupParams
    images: tuple[Element, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.params.n + 1:
            raise RangeViolation(f"need {self.params.n + 1} generator images")
        for im in self.images:
            if im.params != self.params:
                raise ParamMismatch("generator image from a different group")

    def apply(self, g: Element) -> Element:
        if g.params != self.params:
            raise ParamMismatch("map and element have different params")
        acc = identity(self.params)
        for im, e in zip(self.images, g.exps):
            if e:
                acc = acc * im**e
        return acc


def identity_map(params: GroupParams) -> GeneratorMap:
    return GeneratorMap(params, tuple(generators(params)))


def relations_hold(gm: GeneratorMap) -> bool:
    """Check every defining relation on the generator images."""
    par = gm.params
    n, p = par.n, par.p
    im = gm.images
    e = identity(par)
    if not (im[1] ** p).is_identity():
        return False
    if not (im[2] ** par.p_m).is_identity():
        return False
    for i in range(3, n + 1):
        if not (im[i] ** (p * p)).is_identity():
            return False
    if im[n - 1] ** p != im[0] ** p:
        return False
    if commutator(im[1], im[0]) != e:
        return False
    if commutator(im[n], im[0]) != im[1]:
        return False
    for i in range(3, n + 1):
        if commutator(im[i - 1], im[0]) != im[i] ** p:
            return False
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if commutator(im[i], im[j]) != e:
                return False
    return True


def _invertible_mod_p(rows: list[list[int]], p: int) -> bool:
    n = len(rows)
    a = [row[:] for row in rows]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] % p), None)
        if pivot is None:
            return False
        a[col], a[pivot] = a[pivot], a[col]
        inv = pow(a[col][col], -1, p)
        for r in range(col + 1, n):
            f = a[r][col] * inv % p
            if f:
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[col])]
    return True


def frattini_invertible(gm: GeneratorMap) -> bool:
    """Whether the induced matrix on G/Phi(G) is invertible over Z_p."""
    cols = [frattini_coordinates(gm.images[j]) for j in (0, *range(2, gm.params.n + 1))]
    rows = [[col[r] for col in cols] for r in range(gm.params.n)]
    return _invertible_mod_p(rows, gm.params.p)


def is_automorphism(gm: GeneratorMap) -> bool:
    """Relations on images plus invertibility on the Frattini quotient.

    Relations make the map a well-defined endomorphism; invertibility mod
    the Frattini subgroup makes the images generate, hence a bijection.
    """
    return relations_hold(gm) and frattini_invertible(gm)


def is_central_map(gm: GeneratorMap) -> bool:
    return all(is_central(a.inverse() * im) for a, im in zip(generators(gm.params), gm.images))


@dataclass(frozen=True)
class GeneralAutParams:
    """Free parameters of a general automorphism candidate.

    The a0 image is a0^k0 * a_{n-1}^beta * v^r * z; the remaining exponents
    follow the recursion k_{i+1} = k0*k_i mod p (i = 2..n-1), k_1 = k0*k_n.
    """

    k0: int
    k2: int
    beta_n_minus_1: int = 0
    r: int = 0
    v_exps: tuple[tuple[int, int], ...] = ()
    z_parts: tuple[tuple[int, Element], ...] = ()

    def k_values(self, params: GroupParams) -> dict[int, int]:
        p = params.p
        ks = {0: self.k0, 2: self.k2}
        prev = self.k2 % p
        for i in range(3, params.n + 1):
            prev = self.k0 * prev % p
            ks[i] = prev
        ks[1] = self.k0 * ks[params.n] % p
        return ks


def general_from_k0(
    params: GroupParams,
    k0: int,
    k2: int,
    beta_n_minus_1: int = 0,
    r: int = 0,
    v_exps: Mapping[int, int] | None = None,
    z_parts: Mapping[int, Element] | None = None,
) -> GeneratorMap:
    """Build the candidate generator map for the given free parameters.

    The result is not guaranteed to be an automorphism; run
    ``is_automorphism`` to validate it.
    """
    if not 0 < k0 < params.p:
        raise RangeViolation(f"k0={k0} not in (0, p)")
    if not 0 < k2 < params.p_m or math.gcd(k2, params.p) != 1:
        raise RangeViolation(f"k2={k2} not a unit in (0, p^m)")
    gp = GeneralAutParams(
        k0,
        k2,
        beta_n_minus_1,
        r,
        tuple(sorted((v_exps or {}).items())),
        tuple(sorted((z_parts or {}).items())),
    )
    ks = gp.k_values(params)
    a = generators(params)
    v = a[2] ** params.v_exponent
    zs = dict(gp.z_parts)
    for zi in zs.values():
        if not in_derived(zi):
            raise RangeViolation("z part is not in the derived subgroup")
    ve = dict(gp.v_exps)
    ident = identity(params)
    images = [
        a[0] ** k0 * a[params.n - 1] ** beta_n_minus_1 * v**r * zs.get(0, ident),
        a[1] ** ks[1],
        a[2] ** k2 * zs.get(2, ident),
    ]
    for i in range(3, params.n + 1):
        images.append(a[i] ** ks[i] * v ** ve.get(i, 0) * zs.get(i, ident))
    return GeneratorMap(params, tuple(images))


def noncentral_witness(params: GroupParams) -> GeneratorMap | None:
    """A validated non-central automorphism, when one exists (p odd).

    Takes k0 > 1 and k2 = k0^(4-n) mod p so that the power relation
    a_{n-1}^p = a0^p survives; for p = 2 there is no admissible k0.
    """
    p = params.p
    for k0 in range(2, p):
        k2 = pow(k0, (4 - params.n) % (p - 1), p)
        gm = general_from_k0(params, k0, k2)
        if is_automorphism(gm) and not is_central_map(gm):
            return gm
    return None


@dataclass(frozen=True)
class CenterHom:
    """A homomorphism into the center, given by generator images."""

    params: GroupParams
    images: tuple[Element, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.params.n + 1:
            raise RangeViolation(f"need {self.params.n + 1} generator images")
        for im in self.images:
            if im.params != self.params:
                raise ParamMismatch("image from a different group")
            if not is_central(im):
                raise NotHomomorphism("images must lie in the center")

    def apply(self, g: Element) -> Element:
        acc = identity(self.params)
        for im, e in zip(self.images, g.exps):
            if e:
                acc = acc * im**e
        return acc


def to_hom(f: CentralAut) -> CenterHom:
    """The map g |-> g^-1 f(g) attached to a central automorphism."""
    par = f.params
    images = tuple(a.inverse() * f.apply(a) for a in generators(par))
    return CenterHom(par, images)


def from_hom(h: CenterHom) -> CentralAut:
    """Rebuild the central automorphism g |-> g * h(g) in canonical form.

    Raises NotHomomorphism when the images do not extend to a homomorphism
    and NotAutomorphism when the induced map is not invertible or falls
    outside the A x B parameterization (possible only for n = 3, m > 2).
    """
    par = h.params
    sigma = GeneratorMap(par, tuple(a * hi for a, hi in zip(generators(par), h.images)))
    if not relations_hold(sigma):
        raise NotHomomorphism("generator images violate the defining relations")
    if not frattini_invertible(sigma):
        raise NotAutomorphism("induced map is not invertible")
    p, stride = par.p, par.p ** (par.m - 2)
    r: dict[int, int] = {}
    z: dict[int, Element] = {}
    l = 0
    for i, hi in enumerate(h.images):
        t = hi.exps[2] // p
        if i == 2:
            l = t
        elif i != 1:
            if t % stride:
                raise NotAutomorphism(f"a2-component of image {i} is not in the v-range")
            r[i] = t // stride
        z[i] = Element(par, hi.exps[:2] + (0,) + hi.exps[3:])
    if not z[1].is_identity():
        raise NotHomomorphism("a1 must be fixed")
    aut = CentralAut(AutA(par, l, r), AutB(par, {i: zi for i, zi in z.items() if i != 1}))
    for a, im in zip(generators(par), sigma.images):
        if aut.apply(a) != im:
            raise NotAutomorphism("decomposition does not reproduce the map")
    return aut

"""Key exchange protocols, the conjugacy signature scheme, and the scalar
fast path.

Protocol I publishes a non-central element g and exchanges images of g
under the two parties' private commuting automorphisms; the shared key is
the image of g under the composite.  Protocol II keeps g private: Alice
sends phi_A(g), Bob returns phi_B(phi_A(g)), Alice unwinds her own map and
forwards phi_H(phi_B(g)), and both sides end up holding phi_H(g).

The signature scheme publishes (alpha, beta = a^-1 alpha a) and keeps a
secret; a signature transmits only the single product delta*k, never its
factors.

The scalar fast path carries the whole A-family exchange in one integer
mod p^m, since an A-map only moves the a2 exponent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Literal

from .autos import (
    AutA,
    CentralAut,
    identity_a,
    identity_b,
    sample_A,
    sample_B,
    sample_central,
)
from .errors import BadJson, CentralElement, ParamMismatch, RangeViolation
from .group import Element, GroupParams, element_from_text, element_to_text, random_element
from .structure import is_central

Family = Literal["central", "a", "b"]


def random_noncentral(params: GroupParams, rng) -> Element:
    while True:
        g = random_element(params, rng)
        if not is_central(g):
            return g


def sample_automorphism(
    params: GroupParams, rng, family: Family = "central", stride: int | None = None
) -> CentralAut:
    if family == "central":
        return sample_central(params, rng)
    if family == "a":
        return CentralAut(sample_A(params, rng, stride), identity_b(params))
    if family == "b":
        return CentralAut(identity_a(params), sample_B(params, rng))
    raise RangeViolation(f"unknown automorphism family {family!r}")


def _check_same_params(params: GroupParams, *elements: Element) -> None:
    for el in elements:
        if el.params != params:
            raise ParamMismatch("transcript elements built over different params")


@dataclass(frozen=True)
class Transcript1:
    """Public record of a Protocol I run: g and both exchanged images."""

    params: GroupParams
    g: Element
    msg_a: Element
    msg_b: Element

    def __post_init__(self) -> None:
        _check_same_params(self.params, self.g, self.msg_a, self.msg_b)
        if is_central(self.g):
            raise CentralElement("the public element must be non-central")

    def to_json(self) -> dict:
        return _transcript_json(
            "kex1", self.params, g=self.g, msg_a=self.msg_a, msg_b=self.msg_b
        )


@dataclass(frozen=True)
class Transcript2:
    """Public record of a Protocol II run: the three exchanged images."""

    params: GroupParams
    u1: Element
    u2: Element
    u3: Element

    def __post_init__(self) -> None:
        _check_same_params(self.params, self.u1, self.u2, self.u3)

    def to_json(self) -> dict:
        return _transcript_json("kex2", self.params, u1=self.u1, u2=self.u2, u3=self.u3)


@dataclass(frozen=True)
class Signature:
    """A signed message: the message element and the transmitted product."""

    x: Element
    s: Element

    def __post_init__(self) -> None:
        _check_same_params(self.x.params, self.s)


def _transcript_json(protocol: str, params: GroupParams, **elements: Element) -> dict:
    return {
        "protocol": protocol,
        "params": [params.p, params.m, params.n],
        "elements": {name: element_to_text(el) for name, el in elements.items()},
    }


def transcript_to_text(obj: Transcript1 | Transcript2 | dict) -> str:
    payload = obj if isinstance(obj, dict) else obj.to_json()
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _parse_transcript(payload: dict, protocol: str, names: tuple[str, ...]):
    if not isinstance(payload, dict) or payload.get("protocol") != protocol:
        raise BadJson(f"expected a {protocol!r} transcript")
    try:
        p, m, n = payload["params"]
        elements = {name: element_from_text(payload["elements"][name]) for name in names}
    except (KeyError, TypeError, ValueError) as exc:
        raise BadJson(f"malformed {protocol} transcript") from exc
    params = GroupParams(p, m, n)
    for el in elements.values():
        if el.params != params:
            raise BadJson("element params disagree with the transcript header")
    return params, elements


def transcript1_from_json(payload: dict) -> Transcript1:
    params, els = _parse_transcript(payload, "kex1", ("g", "msg_a", "msg_b"))
    return Transcript1(params, els["g"], els["msg_a"], els["msg_b"])


def transcript2_from_json(payload: dict) -> Transcript2:
    params, els = _parse_transcript(payload, "kex2", ("u1", "u2", "u3"))
    return Transcript2(params, els["u1"], els["u2"], els["u3"])


# Protocol I


def kex1_message(f: CentralAut, g: Element) -> Element:
    if is_central(g):
        raise CentralElement("refusing to run the exchange on a central element")
    return f.apply(g)


def kex1_key(f: CentralAut, peer_msg: Element) -> Element:
    return f.apply(peer_msg)


@dataclass(frozen=True)
class Kex1Run:
    transcript: Transcript1
    key: Element
    alice_secret: CentralAut
    bob_secret: CentralAut


def kex1_run(
    params: GroupParams,
    rng,
    family: Family = "central",
    g: Element | None = None,
    stride: int | None = None,
) -> Kex1Run:
    """One seeded Protocol I session; returns transcript, key, and secrets.

    The secrets are returned for oracle certification only; attacks must
    consume nothing beyond the transcript.
    """
    if g is None:
        g = random_noncentral(params, rng)
    f_a = sample_automorphism(params, rng, family, stride)
    f_b = sample_automorphism(params, rng, family, stride)
    t = Transcript1(params, g, kex1_message(f_a, g), kex1_message(f_b, g))
    key_a = kex1_key(f_a, t.msg_b)
    key_b = kex1_key(f_b, t.msg_a)
    assert key_a == key_b
    return Kex1Run(t, key_a, f_a, f_b)


# Protocol II


@dataclass(frozen=True)
class Kex2Run:
    transcript: Transcript2
    alice_key: Element
    bob_key: Element


def kex2_run(params: GroupParams, rng, family: Family = "central") -> Kex2Run:
    """One seeded Protocol II session; g itself never appears on the wire."""
    g = random_noncentral(params, rng)
    f_a = sample_automorphism(params, rng, family)
    f_b = sample_automorphism(params, rng, family)
    f_h = sample_automorphism(params, rng, family)
    u1 = f_a.apply(g)
    u2 = f_b.apply(u1)
    unwound = f_a.invert().apply(u2)  # Alice recovers phi_B(g)
    u3 = f_h.apply(unwound)
    alice_key = f_h.apply(g)
    bob_key = f_b.invert().apply(u3)
    return Kex2Run(Transcript2(params, u1, u2, u3), alice_key, bob_key)


# Conjugacy signature scheme


def signature_keygen(params: GroupParams, rng) -> tuple[Element, Element, Element]:
    """Public pair (alpha, beta = a^-1 alpha a) and the private a."""
    alpha = random_noncentral(params, rng)
    a = random_element(params, rng)
    beta = a.inverse() * alpha * a
    return alpha, beta, a


def sign(alpha: Element, a_secret: Element, x: Element, rng) -> Signature:
    """Sign x: pick a random k, set gamma = k alpha k^-1, transmit x * a * gamma."""
    if is_central(alpha):
        raise CentralElement("alpha must be non-central")
    k = random_element(alpha.params, rng)
    gamma = k * alpha * k.inverse()
    return Signature(x, x * a_secret * gamma)


def verify(alpha: Element, beta: Element, sig: Signature) -> bool:
    left = sig.x * alpha * sig.x.inverse()
    right = sig.s * beta * sig.s.inverse()
    return left == right


# Scalar fast path


@dataclass(frozen=True)
class ScalarSecret:
    """Scalar view of an A-map: the multiplier k2 and the coefficient sum."""

    params: GroupParams
    k2: int
    s: int

    def __post_init__(self) -> None:
        if not 1 <= self.k2 < self.params.p_m or self.k2 % self.params.p != 1:
            raise RangeViolation(f"k2={self.k2} is not of the form l*p + 1 in [1, p^m)")
        object.__setattr__(self, "s", self.s % self.params.p)


def sample_scalar_secret(params: GroupParams, rng) -> ScalarSecret:
    return ScalarSecret(params, 1 + params.p * rng.randrange(params.v_exponent), rng.randrange(params.p))


def scalar_view(aut: CentralAut | AutA, g: Element) -> ScalarSecret:
    """The scalar secret equivalent to an A-map acting on the element g."""
    a = aut.a_part if isinstance(aut, CentralAut) else aut
    s = sum(c * g.exps[i] for i, c in a.r)
    return ScalarSecret(a.params, a.k, s)


def _check_exponent(params: GroupParams, value: int, what: str) -> None:
    if not 0 <= value < params.p_m:
        raise RangeViolation(f"{what}={value} not in [0, p^m)")


def scalar_message(sec: ScalarSecret, beta2: int) -> int:
    _check_exponent(sec.params, beta2, "beta2")
    par = sec.params
    return (sec.k2 * beta2 + par.v_exponent * sec.s) % par.p_m


def scalar_key(sec: ScalarSecret, peer_msg: int, beta2: int) -> int:
    _check_exponent(sec.params, beta2, "beta2")
    _check_exponent(sec.params, peer_msg, "peer_msg")
    par = sec.params
    return (sec.k2 * peer_msg + par.v_exponent * sec.s) % par.p_m

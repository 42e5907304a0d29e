"""Eavesdropper-side key recovery, built strictly from public transcripts.

Two attack families break the exchanges here:

  * center-quotient: with B-only maps, each public image differs from its
    preimage by a derived-subgroup factor that every central automorphism
    fixes, so the factors can be read off and replayed;
  * knapsack: with A-only maps, the public a2 exponent E = k*b2 + P*S
    (P = p^(m-1), k = l*p + 1) leaks l*p*b2 mod p^(m-1); dividing out the
    unit part of b2 recovers l modulo p^(m-2-j) with j the p-adic valuation
    of b2, and the two recovered residues close the key formula
    E_A + E_B - b2 + l*l'*p^2*b2.

The closed-form key identity unifies the unit, non-unit, and restricted-l
regimes and is certified against the honest key in the tests rather than
trusted.  A brute-force conjugacy search forges signatures at enumerable
sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import Degenerate, NoWitness, NotApplicable, TooLarge
from .group import Element, GroupParams, random_element
from .oracle import CONJUGACY_ENUM_LIMIT, conjugacy_search
from .protocols import Signature, Transcript1, Transcript2, sign, verify
from .structure import in_derived

METHOD_CENTER_QUOTIENT = "CenterQuotient"
METHOD_KNAPSACK_A = "KnapsackA"
METHOD_SCALAR_KNAPSACK = "ScalarKnapsack"
METHOD_BRUTE_CONJUGACY = "BruteConjugacy"


@dataclass(frozen=True)
class AttackReport:
    """Outcome of one attack; ``succeeded`` is set by certification."""

    method: str
    recovered_key: Element | int
    succeeded: bool = False


def certify(report: AttackReport, true_key: Element | int) -> AttackReport:
    """Mark the report against the honest key (test-harness side)."""
    return replace(report, succeeded=report.recovered_key == true_key)


def report_to_json(report: AttackReport) -> dict:
    from .group import element_to_text  # local import keeps module load light

    key = report.recovered_key
    return {
        "method": report.method,
        "succeeded": report.succeeded,
        "recovered_key": element_to_text(key) if isinstance(key, Element) else key,
    }


# Center-quotient attacks (B-only transcripts)


def attack_kex1_b(t: Transcript1) -> AttackReport:
    """Read both derived-subgroup factors off the public images and replay."""
    z_a = t.g.inverse() * t.msg_a
    z_b = t.g.inverse() * t.msg_b
    if not (in_derived(z_a) and in_derived(z_b)):
        raise NotApplicable("messages leave the derived-subgroup coset of g")
    return AttackReport(METHOD_CENTER_QUOTIENT, t.g * z_a * z_b)


def attack_kex2_b(t: Transcript2) -> AttackReport:
    """u2 = u1 * z_B leaks Bob's factor; stripping it from u3 is the key."""
    z_b = t.u1.inverse() * t.u2
    if not in_derived(z_b):
        raise NotApplicable("second message leaves the derived-subgroup coset")
    return AttackReport(METHOD_CENTER_QUOTIENT, t.u3 * z_b.inverse())


# Knapsack attacks (A-only transcripts)


def _valuation(x: int, p: int) -> int | None:
    """p-adic valuation; None for x = 0."""
    if x == 0:
        return None
    j = 0
    while x % p == 0:
        x //= p
        j += 1
    return j


def solve_knapsack_l(M: int, beta2: int, params: GroupParams) -> int:
    """Recover l mod p^(m-2-j) from M = l*p*beta2 + p^(m-1)*S mod p^m.

    j is the p-adic valuation of beta2; for j > m-2 the multiplier acts
    trivially on beta2 and there is nothing to solve.
    """
    p, m = params.p, params.m
    j = _valuation(beta2, p)
    if j is None or j > m - 2:
        raise Degenerate("beta2 is annihilated mod p^(m-1); no l is needed")
    m_red = M % p ** (m - 1)
    if m_red % p ** (1 + j):
        raise NotApplicable("message exponent is not an A-family image of beta2")
    modulus = p ** (m - 2 - j)
    if modulus == 1:
        return 0
    unit = beta2 // p**j
    return m_red // p ** (1 + j) * pow(unit, -1, modulus) % modulus


def _knapsack_key_exponent(params: GroupParams, beta2: int, e_a: int, e_b: int) -> int:
    p, pm = params.p, params.p_m
    base = (e_a + e_b - beta2) % pm
    j = _valuation(beta2, p)
    if j is None or j > params.m - 2:
        return base
    l_a = solve_knapsack_l((e_a - beta2) % pm, beta2, params)
    l_b = solve_knapsack_l((e_b - beta2) % pm, beta2, params)
    return (base + l_a * l_b * p * p * beta2) % pm


def attack_kex1_a(t: Transcript1) -> AttackReport:
    """Recover the full key of an A-only run from the three public elements."""
    for msg in (t.msg_a, t.msg_b):
        if any(msg.exps[i] != t.g.exps[i] for i in range(len(t.g.exps)) if i != 2):
            raise NotApplicable("transcript moves more than the a2 exponent")
    beta2 = t.g.exps[2]
    key_exp = _knapsack_key_exponent(
        t.params, beta2, t.msg_a.exps[2], t.msg_b.exps[2]
    )
    exps = t.g.exps[:2] + (key_exp,) + t.g.exps[3:]
    return AttackReport(METHOD_KNAPSACK_A, Element(t.params, exps))


def attack_scalar(params: GroupParams, beta2: int, msg_a: int, msg_b: int) -> AttackReport:
    """Same recovery in pure mod-p^m arithmetic, for scalar-mode exchanges."""
    return AttackReport(
        METHOD_SCALAR_KNAPSACK, _knapsack_key_exponent(params, beta2, msg_a, msg_b)
    )


# Signature forgery


def attack_signature(
    alpha: Element, beta: Element, rng, message: Element | None = None
) -> AttackReport:
    """Find any witness conjugating alpha to beta and sign with it.

    ``succeeded`` means the forged signature passed verification, which is
    the full break: the verifier cannot tell the witness from the real key.
    """
    params = alpha.params
    if params.order > CONJUGACY_ENUM_LIMIT:
        raise TooLarge(f"|G| = {params.order} exceeds the conjugacy search bound")
    witness = conjugacy_search(alpha, beta)
    if witness is None:
        raise NoWitness("alpha and beta are not conjugate")
    if message is None:
        message = random_element(params, rng)
    forged: Signature = sign(alpha, witness, message, rng)
    return AttackReport(METHOD_BRUTE_CONJUGACY, witness, verify(alpha, beta, forged))

"""Exact arithmetic in a class-2 p-group family, its abelian central
automorphism group, the key exchange protocols built on it, and the attacks
that break them, with brute-force oracles certifying everything at small
parameters."""

from .errors import ToolkitError
from .group import (
    Element,
    GroupParams,
    commutator,
    element_from_text,
    element_to_text,
    generator,
    generators,
    identity,
    inverse,
    multiply,
    new_params,
    order,
    power,
)
from .structure import (
    GroupConstants,
    characteristic_series,
    constants,
    frattini_coordinates,
    height_mod_derived,
    in_K,
    in_R,
    in_derived,
    is_central,
    parity,
)
from .autos import (
    AutA,
    AutB,
    CentralAut,
    CenterHom,
    GeneratorMap,
    apply,
    compose,
    from_hom,
    general_from_k0,
    identity_central,
    invert,
    is_automorphism,
    sample_A,
    sample_B,
    sample_central,
    to_hom,
)
from .protocols import (
    ScalarSecret,
    Signature,
    Transcript1,
    Transcript2,
    kex1_key,
    kex1_message,
    kex1_run,
    kex2_run,
    scalar_key,
    scalar_message,
    sign,
    verify,
)
from .attacks import (
    AttackReport,
    attack_kex1_a,
    attack_kex1_b,
    attack_kex2_b,
    attack_signature,
    certify,
    solve_knapsack_l,
)
from .oracle import (
    Word,
    conjugacy_search,
    dh_oracle,
    enumerate_all_autos,
    enumerate_central_autos,
    enumerate_group,
    naive_normalize,
)

__version__ = "0.1.0"

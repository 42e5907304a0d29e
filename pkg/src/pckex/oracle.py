"""Independent ground truth for the fast arithmetic and the attacks.

Everything here is deliberately naive: products are computed by one-step
rewriting of free words, groups and automorphism groups are enumerated
exhaustively, and honest keys are recomputed from the private data.  The
fast paths elsewhere are trusted only because they agree with this module
at enumerable parameters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .autos import (
    CenterHom,
    CentralAut,
    GeneratorMap,
    from_hom,
    noncentral_witness,
    relations_hold,
)
from .errors import ParamMismatch, RangeViolation, TooLarge
from .group import Element, GroupParams, generators, identity, vec_inv, vec_mul, vec_pow
from .protocols import Transcript1
from .structure import is_central

GROUP_ENUM_LIMIT = 10**6
CONJUGACY_ENUM_LIMIT = 10**6
CENTRAL_SWEEP_LIMIT = 4 * 10**6
AUTO_SWEEP_LIMIT = 2 * 10**8


@dataclass(frozen=True)
class Word:
    """A free word in the generators: (index, +-1) letters."""

    letters: tuple[tuple[int, int], ...]

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def inverse(self) -> Word:
        return Word(tuple((i, -e) for i, e in reversed(self.letters)))


def word_of_element(g: Element) -> Word:
    letters = []
    for i, e in enumerate(g.exps):
        letters.extend([(i, 1)] * e)
    return Word(tuple(letters))


def _inverse_expansion(params: GroupParams, i: int) -> list[int]:
    # Positive-letter expansion of one inverse generator letter.
    if i == 0:
        # a0^-1 = a0^(p-1) * a_{n-1}^(-p), using a0^p = a_{n-1}^p
        tail_ord = params.moduli[params.n - 1]
        return [0] * (params.p - 1) + [params.n - 1] * (tail_ord - params.p)
    return [i] * (params.moduli[i] - 1)


def _inversion_measure(letters: list[int]) -> int:
    # Number of (non-a0, a0) pairs out of order; the quantity each swap consumes.
    nonzero = 0
    total = 0
    for i in letters:
        if i:
            nonzero += 1
        else:
            total += nonzero
    return total


def naive_normalize(word: Word, params: GroupParams) -> Element:
    """Collect a free word by single-step rewriting.

    Each step swaps one adjacent (ai, a0) pair via ai*a0 = a0*ai*[ai, a0]
    and appends the central commutator letters at the end of the word.  The
    swap count is capped by the initial inversion measure, which proves
    termination; exponents are reduced only after collection.
    """
    n, p = params.n, params.p
    letters: list[int] = []
    for i, e in word.letters:
        if not 0 <= i <= n:
            raise RangeViolation(f"letter index {i} out of range")
        if e == 1:
            letters.append(i)
        elif e == -1:
            letters.extend(_inverse_expansion(params, i))
        else:
            raise RangeViolation(f"letter exponent must be +-1, got {e}")

    budget = _inversion_measure(letters)
    swaps = 0
    pos = 1
    while pos < len(letters):
        if letters[pos] == 0 and letters[pos - 1] != 0:
            i = letters[pos - 1]
            letters[pos - 1], letters[pos] = 0, i
            if i == n:
                letters.append(1)
            elif 2 <= i <= n - 1:
                letters.extend([i + 1] * p)
            swaps += 1
            assert swaps <= budget, "collection failed to consume an inversion"
            pos = max(1, pos - 1)
        else:
            pos += 1
    assert _inversion_measure(letters) == 0

    counts = [0] * (n + 1)
    for i in letters:
        counts[i] += 1
    carry, counts[0] = divmod(counts[0], p)
    counts[n - 1] += p * carry  # a0^p = a_{n-1}^p
    return Element(params, tuple(counts))


def naive_multiply(g: Element, h: Element) -> Element:
    return naive_normalize(word_of_element(g) * word_of_element(h), g.params)


def enumerate_group(params: GroupParams, limit: int = GROUP_ENUM_LIMIT) -> list[Element]:
    """All collected words, in lexicographic exponent order."""
    if params.order > limit:
        raise TooLarge(f"|G| = {params.order} exceeds {limit}")
    ranges = [range(m) for m in params.moduli]
    return [Element(params, exps) for exps in itertools.product(*ranges)]


def subgroup_span(gens: list[Element], limit: int = GROUP_ENUM_LIMIT) -> set[Element]:
    """Closure of a generator list under multiplication (BFS)."""
    if not gens:
        return set()
    params = gens[0].params
    seen = {identity(params)}
    frontier = [identity(params)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if len(seen) > limit:
            raise TooLarge(f"span exceeded {limit} elements")
        frontier = nxt
    return seen


def enumerate_center(params: GroupParams) -> list[Element]:
    p = params.p
    e2s = range(0, params.p_m, p)
    tails = itertools.product(*(range(0, p * p, p) for _ in range(params.n - 2)))
    out = []
    for tail in tails:
        for e2 in e2s:
            for e1 in range(p):
                out.append(Element(params, (0, e1, e2) + tail))
    return out


def enumerate_center_homs(
    params: GroupParams, limit: int = CENTRAL_SWEEP_LIMIT
) -> list[CenterHom]:
    """All homomorphisms into the center, by exhaustive generator assignment."""
    center = enumerate_center(params)
    free = params.n  # images of a0, a2, ..., an; a1 is forced to 1
    if len(center) ** free > limit:
        raise TooLarge(f"{len(center)}^{free} candidate assignments exceed {limit}")
    ident = identity(params)
    base = generators(params)
    out = []
    for combo in itertools.product(center, repeat=free):
        images = (combo[0], ident) + combo[1:]
        sigma = GeneratorMap(params, tuple(b * im for b, im in zip(base, images)))
        if relations_hold(sigma):
            out.append(CenterHom(params, images))
    return out


def enumerate_central_autos(
    params: GroupParams, limit: int = CENTRAL_SWEEP_LIMIT
) -> list[CentralAut]:
    """Every central automorphism, in canonical (A-part, B-part) form."""
    return [from_hom(h) for h in enumerate_center_homs(params, limit)]


@dataclass(frozen=True)
class AutSweep:
    """Result of the full-automorphism search.

    ``count``/``maps`` are None when the sweep fell back to a non-central
    witness instead of exhausting the candidate space.
    """

    count: int | None
    abelian: bool
    central_count: int | None
    maps: tuple[GeneratorMap, ...] | None


def enumerate_all_autos(params: GroupParams, budget: int = AUTO_SWEEP_LIMIT) -> AutSweep:
    """Brute force over images of the minimal generating set a0, a2, ..., an.

    Above budget, a single validated non-central automorphism still settles
    non-commutativity; with no witness the sweep gives up.
    """
    candidates = params.order**params.n
    if candidates > budget:
        witness = noncentral_witness(params)
        if witness is not None:
            return AutSweep(None, False, None, None)
        raise TooLarge(f"{candidates} candidate maps exceed the {budget} budget")

    n, p = params.n, params.p
    elems = [e.exps for e in enumerate_group(params)]
    index = {exps: i for i, exps in enumerate(elems)}
    size = len(elems)
    mul = [[index[vec_mul(params, u, v)] for v in elems] for u in elems]
    inv = [index[vec_inv(params, u)] for u in elems]
    pow_p = [index[vec_pow(params, u, p)] for u in elems]
    pow_p2 = [index[vec_pow(params, u, p * p)] for u in elems]
    comm = [
        [mul[mul[inv[i]][inv[j]]][mul[i][j]] for j in range(size)] for i in range(size)
    ]
    fratt = [
        (u[0] % p,) + tuple(u[i] % p for i in range(2, n + 1)) for u in elems
    ]
    e_id = index[params.identity_vec()]
    central = {i for i, u in enumerate(elems) if is_central(Element(params, u))}

    accepted: list[tuple[int, ...]] = []  # image index vectors (a0, a1, a2, ..., an)
    for tail in itertools.product(range(size), repeat=n - 1):
        # tail[k] is the image of a_{k+2}
        if any(pow_p2[c] != e_id for c in tail[1:]):
            continue
        if any(
            comm[tail[i]][tail[j]] != e_id
            for i in range(len(tail))
            for j in range(i + 1, len(tail))
        ):
            continue
        c_nm1 = tail[n - 3]  # image of a_{n-1}
        for c0 in range(size):
            if pow_p[c_nm1] != pow_p[c0]:
                continue
            c1 = comm[tail[-1]][c0]  # forced image of a1 = [an, a0]
            if pow_p[c1] != e_id or comm[c1][c0] != e_id:
                continue
            if any(comm[c1][c] != e_id for c in tail):
                continue
            prev = tail[0]
            ok = True
            for k in range(1, len(tail)):  # [a_{i-1}, a0] = a_i^p, i = k + 2
                if comm[prev][c0] != pow_p[tail[k]]:
                    ok = False
                    break
                prev = tail[k]
            if not ok:
                continue
            cols = [fratt[c0]] + [fratt[c] for c in tail]
            rows = [[col[r] for col in cols] for r in range(n)]
            if not _invertible_rows(rows, p):
                continue
            accepted.append((c0, c1) + tail)

    tables = [_apply_table(params, elems, index, mul, images) for images in accepted]
    gen_ids = [
        index[tuple(1 if k == i else 0 for k in range(n + 1))]
        for i in (0, *range(2, n + 1))
    ]
    abelian = True
    for i in range(len(tables)):
        for j in range(i + 1, len(tables)):
            ti, tj = tables[i], tables[j]
            if any(ti[tj[g]] != tj[ti[g]] for g in gen_ids):
                abelian = False
                break
        if not abelian:
            break
    central_count = sum(
        1 for t in tables if all(mul[inv[g]][t[g]] in central for g in range(size))
    )
    maps = tuple(
        GeneratorMap(params, tuple(Element(params, elems[c]) for c in images))
        for images in accepted
    )
    return AutSweep(len(accepted), abelian, central_count, maps)


def _apply_table(params, elems, index, mul, images) -> list[int]:
    # Homomorphic extension of generator images to the whole group, as a table.
    n = params.n
    powers = []
    for i, c in enumerate(images):
        row = [index[params.identity_vec()]]
        for _ in range(1, params.moduli[i]):
            row.append(mul[row[-1]][c])
        powers.append(row)
    out = []
    for exps in elems:
        acc = index[params.identity_vec()]
        for i, e in enumerate(exps):
            if e:
                acc = mul[acc][powers[i][e]]
        out.append(acc)
    return out


def _invertible_rows(rows: list[list[int]], p: int) -> bool:
    n = len(rows)
    a = [row[:] for row in rows]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] % p), None)
        if pivot is None:
            return False
        a[col], a[pivot] = a[pivot], a[col]
        f = pow(a[col][col], -1, p)
        for r in range(col + 1, n):
            if a[r][col] % p:
                g = a[r][col] * f % p
                a[r] = [(x - g * y) % p for x, y in zip(a[r], a[col])]
    return True


def dh_oracle(f_a: CentralAut, f_b: CentralAut, t: Transcript1) -> Element:
    """The honest shared key, recomputed from the private automorphisms."""
    return f_a.apply(f_b.apply(t.g))


def conjugacy_search(
    alpha: Element, beta: Element, limit: int = CONJUGACY_ENUM_LIMIT
) -> Element | None:
    """First enumerated x with x^-1 alpha x = beta, or None."""
    if alpha.params != beta.params:
        raise ParamMismatch("alpha and beta live in different groups")
    for x in enumerate_group(alpha.params, limit):
        if x.inverse() * alpha * x == beta:
            return x
    return None

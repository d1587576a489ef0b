"""Finite approximations: tower permutation groups and locally
embeddable-into-finite witnesses.

At a deep enough level every element of a finite set F (and every product
of two of them) is a within-tower permutation times a boundary rotation;
dropping the rotation maps F² into the finite group H of per-tower level
permutations. The map is injective on F and multiplicative on F×F, which
is checked pair by pair and recorded in a witness. The odometer structure
report verifies the semidirect shape of the level-n compatible subgroup:
level permutations on top of a free-abelian kernel of induced maps.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .canon import PermutationForm, Refusal, factorize, is_n_permutation, order_exceeds
from .clopen import cylinder
from .errors import PreconditionError, VerificationError
from .group import (
    GroupElement,
    cocycle_values_on,
    commutator,
    compose,
    element_hash,
    embed_symmetric,
    equals,
    identity,
    is_identity,
    make_element,
)
from .systems import SystemSpec, base_point
from .towers import KRPartition, induced, kr_from_set, tower_sequence

_LEVEL_CAP = 24

HElement = tuple  # one one-line permutation per tower


@dataclass(frozen=True)
class FinitePermGroupDesc:
    """The group of within-tower level permutations of one partition."""

    xi: KRPartition
    heights: tuple

    def order(self) -> int:
        n = 1
        for h in self.heights:
            n *= math.factorial(h)
        return n

    def identity(self) -> HElement:
        return tuple(tuple(range(h)) for h in self.heights)

    def contains(self, a: HElement) -> bool:
        return len(a) == len(self.heights) and all(
            sorted(pv) == list(range(h)) for pv, h in zip(a, self.heights)
        )

    def compose(self, a: HElement, b: HElement) -> HElement:
        # matches element composition: b acts first
        return tuple(
            tuple(pa[pb[i]] for i in range(h))
            for pa, pb, h in zip(a, b, self.heights)
        )

    def invert(self, a: HElement) -> HElement:
        out = []
        for pv, h in zip(a, self.heights):
            inv = [0] * h
            for i, j in enumerate(pv):
                inv[j] = i
            out.append(tuple(inv))
        return tuple(out)

    def element_order(self, a: HElement) -> int:
        n = 1
        for pv in a:
            seen = set()
            for start in range(len(pv)):
                if start in seen:
                    continue
                length, j = 0, start
                while j not in seen:
                    seen.add(j)
                    j = pv[j]
                    length += 1
                n = n * length // math.gcd(n, length)
        return n

    def to_form(self, a: HElement) -> PermutationForm:
        return PermutationForm(self.xi, a)

    def from_form(self, form: PermutationForm) -> HElement:
        return form.perms


def perm_group(xi: KRPartition) -> FinitePermGroupDesc:
    return FinitePermGroupDesc(xi, tuple(xi.heights()))


@dataclass(frozen=True)
class LEFWitness:
    elements: tuple  # F, canonicalized, identity included
    squares: tuple  # F·F in a fixed order
    level: int
    group: FinitePermGroupDesc
    table: tuple  # (element, HElement) pairs covering squares
    injective: bool
    multiplicative: bool

    def image(self, s: GroupElement) -> HElement:
        for q, h in self.table:
            if q == s:
                return h
        raise PreconditionError("element outside the witnessed set")


def _signed(j: int, h: int) -> int:
    return j if 2 * j <= h else j - h


def _inverse_agreement(desc: FinitePermGroupDesc, a: HElement, d: int) -> bool:
    # every tower's inverse permutation must send each signed band
    # position near the boundary to one common signed position
    inv = desc.invert(a)
    for i in range(-d, d + 1):
        vals = {
            _signed(pv[i % h], h) for pv, h in zip(inv, desc.heights)
        }
        if len(vals) != 1:
            return False
    return True


def lef_map(f_elems, level: int | None = None) -> LEFWitness:
    """Witness that the permutation parts at one level embed F into H.

    The level search accepts the first level where every product of two
    F-members factorizes, their rotations fit in a common boundary band
    whose positions all inverse permutations respect, the towers are tall
    enough to keep signed positions unambiguous, and the resulting table
    is injective on F² and multiplicative on F×F.
    """
    f_list = list(f_elems)
    if not f_list:
        raise PreconditionError("F must be nonempty")
    spec = f_list[0].spec
    ident = identity(spec)
    f_set = []
    for s in [ident] + f_list:
        if not any(equals(s, t) for t in f_set):
            f_set.append(s)
    squares = []
    for s in f_set:
        for t in f_set:
            st = compose(s, t)
            if not any(equals(st, u) for u in squares):
                squares.append(st)
    levels = [level] if level is not None else range(1, _LEVEL_CAP + 1)
    for n in levels:
        w = _witness_at(spec, tuple(f_set), tuple(squares), n)
        if w is not None:
            return w
    if level is not None:
        raise PreconditionError(f"level {level} does not support a witness for F")
    raise VerificationError("witness level search exceeded the cap")


def _witness_at(spec, f_set, squares, n) -> LEFWitness | None:
    facs = []
    for s in squares:
        try:
            facs.append(factorize(s, level=n))
        except PreconditionError:
            return None
    xi = facs[0].xi
    desc = perm_group(xi)
    d = 0
    q = 0
    for fac in facs:
        su, sd = fac.rotation.supportive_sets()
        d = max([d] + [i + 1 for i in su] + [j + 1 for j in sd])
        q = max(q, fac.n0)
    if min(desc.heights) <= 2 * (d + q):
        return None
    table = tuple((s, fac.permutation.perms) for s, fac in zip(squares, facs))
    if not all(_inverse_agreement(desc, h, d) for _, h in table):
        return None
    images = [h for _, h in table]
    injective = len(set(images)) == len(images)
    multiplicative = True
    for s in f_set:
        for t in f_set:
            st = compose(s, t)
            target = next(h for u, h in table if equals(u, st))
            if desc.compose(_image_of(table, s), _image_of(table, t)) != target:
                multiplicative = False
    if not (injective and multiplicative):
        return None
    return LEFWitness(
        f_set, squares, n, desc, table, injective, multiplicative
    )


def _image_of(table, s: GroupElement) -> HElement:
    return next(h for u, h in table if equals(u, s))


@dataclass(frozen=True)
class LEFReport:
    ok: bool
    lines: tuple

    def text(self) -> str:
        return "\n".join(self.lines)


def verify_lef(w: LEFWitness) -> LEFReport:
    """Re-check injectivity on F and multiplicativity on F×F pair by pair."""
    lines = []
    ok = True
    desc = w.group
    for i, s in enumerate(w.squares):
        for t in w.squares[i + 1:]:
            distinct = w.image(s) != w.image(t)
            ok = ok and distinct
            lines.append(
                f"distinct {element_hash(s)} {element_hash(t)}: "
                f"{'ok' if distinct else 'FAIL'}"
            )
    for s in w.elements:
        for t in w.elements:
            st = compose(s, t)
            match = next((u for u, _ in w.table if equals(u, st)), None)
            good = match is not None and desc.compose(
                w.image(s), w.image(t)
            ) == w.image(match)
            ok = ok and good
            lines.append(
                f"product {element_hash(s)}*{element_hash(t)}: "
                f"{'ok' if good else 'FAIL'}"
            )
    return LEFReport(ok, tuple(lines))


@dataclass(frozen=True)
class StructureReport:
    n: int
    height: int
    transpositions: int
    kernel_commutes: bool
    kernel_order_bound: int
    tuples_checked: int
    tuples_distinct: bool
    tuples_add: bool
    samples: int
    unique_factorization: bool
    ok: bool
    lines: tuple

    def text(self) -> str:
        return "\n".join(self.lines)


def _kernel_element(spec, xi: KRPartition, exps) -> GroupElement:
    m = xi.heights()[0]
    pieces = [(xi.atom(0, i), e * m) for i, e in enumerate(exps) if e != 0]
    rest = [xi.atom(0, i) for i, e in enumerate(exps) if e == 0]
    for a in rest:
        pieces.append((a, 0))
    return make_element(spec, pieces)


def structure_partition(spec: SystemSpec, n: int) -> KRPartition:
    """Single tower over the depth-n cylinder of the primary point."""
    x, _ = base_point(spec, "primary")
    return kr_from_set(spec, cylinder(spec, x.window(0, n - 1)), index=n)


def structure_decompose(s: GroupElement, xi: KRPartition):
    """Unique split of a level-compatible element into a level permutation
    and a kernel exponent tuple (applied kernel first)."""
    m = xi.heights()[0]
    perm = []
    exps = []
    for i in range(m):
        vals = cocycle_values_on(s, xi.atom(0, i))
        if len(vals) != 1:
            raise PreconditionError("element is not compatible with the partition")
        (f,) = vals
        target = (i + f) % m
        perm.append(target)
        exps.append((i + f - target) // m)
    if sorted(perm) != list(range(m)):
        raise PreconditionError("element is not compatible with the partition")
    return tuple(perm), tuple(exps)


def odometer_structure(
    spec: SystemSpec,
    n: int,
    seed: int = 0,
    samples: int = 50,
    radius: int = 5,
    order_bound: int = 64,
) -> StructureReport:
    """Desk-scale verification of the level-n semidirect structure of an
    odometer: realized transpositions on top of a free-abelian kernel of
    induced maps, with unique permutation-kernel factorization."""
    if spec.kind != "odometer":
        raise PreconditionError("structure report is for odometers")
    if n < 1:
        raise PreconditionError("levels are numbered from 1")
    xi = structure_partition(spec, n)
    m = xi.heights()[0]
    x, _ = base_point(spec, "primary")
    lines = [f"level n={n} tower height={m}"]

    realized = 0
    for i in range(m - 1):
        s = embed_symmetric(spec, 2, (1, 0), xi.atom(0, i))
        form = is_n_permutation(s, xi)
        want = tuple(
            i + 1 if j == i else i if j == i + 1 else j for j in range(m)
        )
        if isinstance(form, Refusal) or form.perms[0] != want:
            raise VerificationError(f"transposition ({i} {i + 1}) not realized")
        realized += 1
    lines.append(f"transpositions realized: {realized} of {m - 1}")

    gens = [induced(spec, xi.atom(0, i)) for i in range(m)]
    commutes = all(
        is_identity(commutator(gens[i], gens[j]))
        for i in range(m)
        for j in range(i + 1, m)
    )
    lines.append(f"kernel generators commute: {'ok' if commutes else 'FAIL'}")
    escapes = all(
        order_exceeds(gens[i], order_bound, x.shifted(i)) for i in range(m)
    )
    lines.append(
        f"kernel generator order exceeds {order_bound}: {'ok' if escapes else 'FAIL'}"
    )

    rng = random.Random(seed)
    tuples = {tuple(0 for _ in range(m)), (1,) + (0,) * (m - 1), (0, 1) + (0,) * (m - 2)}
    want = min(samples, (2 * radius + 1) ** m)
    while len(tuples) < want:
        tuples.add(tuple(rng.randint(-radius, radius) for _ in range(m)))
    tuples = sorted(tuples)
    built = {t: _kernel_element(spec, xi, t) for t in tuples}
    distinct = True
    for i, t1 in enumerate(tuples):
        for t2 in tuples[i + 1:]:
            if equals(built[t1], built[t2]):
                distinct = False
    nonzero_ok = all(
        is_identity(built[t]) == all(e == 0 for e in t) for t in tuples
    )
    distinct = distinct and nonzero_ok
    adds = all(
        equals(
            compose(built[t1], built[t2]),
            _kernel_element(spec, xi, tuple(a + b for a, b in zip(t1, t2))),
        )
        for t1, t2 in zip(tuples, reversed(tuples))
    )
    lines.append(f"exponent tuples checked: {len(tuples)}")
    lines.append(f"tuples pairwise distinct: {'ok' if distinct else 'FAIL'}")
    lines.append(f"tuples add under composition: {'ok' if adds else 'FAIL'}")

    unique = True
    for _ in range(samples):
        perm = list(range(m))
        rng.shuffle(perm)
        exps = tuple(rng.randint(-2, 2) for _ in range(m))
        p_elem = PermutationForm(xi, (tuple(perm),)).to_element()
        s = compose(p_elem, built.get(exps) or _kernel_element(spec, xi, exps))
        got_perm, got_exps = structure_decompose(s, xi)
        if got_perm != tuple(perm) or got_exps != exps:
            unique = False
    lines.append(
        f"unique permutation-kernel factorization on {samples} samples: "
        f"{'ok' if unique else 'FAIL'}"
    )

    ok = commutes and escapes and distinct and adds and unique and realized == m - 1
    lines.append(f"structure: {'ok' if ok else 'FAIL'}")
    return StructureReport(
        n,
        m,
        realized,
        commutes,
        order_bound,
        len(tuples),
        distinct,
        adds,
        samples,
        unique,
        ok,
        tuple(lines),
    )

"""Permutation and rotation canonical forms over tower partitions.

Every group element splits, at a deep enough tower level, into a
within-tower permutation P and a boundary rotation R with Q = P∘R. The
rotation is a product of induced maps on the bands near the tower tops
and bottoms with exponents +-1; its supportive sets equal the orbit
crossing counts past the anchor, which is how the index homomorphism is
cross-checked. Index-0 elements split further into two forward-orbit
stabilizer members, and every nonempty clopen set supports an order-3
commutator witness moving a designated point.
"""

from __future__ import annotations

from dataclasses import dataclass

from .clopen import ClopenSet, cylinder, union_all
from .errors import PreconditionError, VerificationError
from .group import (
    GroupElement,
    _build,
    cocycle_at,
    cocycle_bound,
    cocycle_values_on,
    commutator,
    compose,
    equals,
    identity,
    invert,
    is_identity,
    make_element,
    shift,
    support,
)
from .systems import PointRep, SystemSpec, base_point
from .towers import KRPartition, first_return, tower_sequence

_LEVEL_CAP = 24
_DEPTH_CAP = 64


@dataclass(frozen=True)
class Refusal:
    """Negative recognizer answer carrying the first violation found."""

    reason: str
    atom: ClopenSet | None = None

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class PermutationForm:
    """Within-tower level permutations, one per tower of the partition."""

    xi: KRPartition
    perms: tuple  # per tower v, a one-line permutation of range(h_v)

    def to_element(self) -> GroupElement:
        raw = []
        for v, (b, h) in enumerate(self.xi.towers):
            pv = self.perms[v]
            for i in range(h):
                raw.append((pv[i] - i, self.xi.atom(v, i)))
        return _build(self.xi.spec, raw, validate=False)

    def is_trivial(self) -> bool:
        return all(pv[i] == i for pv in self.perms for i in range(len(pv)))


@dataclass(frozen=True)
class RotationForm:
    """Product of induced maps on boundary bands with integer exponents."""

    xi: KRPartition
    u_levels: tuple  # sorted (band index, exponent), exponents nonzero
    d_levels: tuple

    def rotation_number(self) -> int:
        exps = [abs(e) for _, e in self.u_levels] + [abs(e) for _, e in self.d_levels]
        return max(exps, default=0)

    def supportive_sets(self) -> tuple[frozenset, frozenset]:
        return (
            frozenset(i for i, _ in self.u_levels),
            frozenset(j for j, _ in self.d_levels),
        )

    def to_element(self) -> GroupElement:
        out = identity(self.xi.spec)
        for i, e in self.u_levels:
            out = compose(out, _power(t_u(self.xi, i), e))
        for j, e in self.d_levels:
            out = compose(out, _power(t_d(self.xi, j), e))
        return out

    def is_trivial(self) -> bool:
        return not self.u_levels and not self.d_levels


@dataclass(frozen=True)
class Factorization:
    element: GroupElement
    level: int
    n0: int
    permutation: PermutationForm
    rotation: RotationForm

    @property
    def xi(self) -> KRPartition:
        return self.permutation.xi


def _power(s: GroupElement, e: int) -> GroupElement:
    if e < 0:
        return _power(invert(s), -e)
    out = identity(s.spec)
    for _ in range(e):
        out = compose(out, s)
    return out


def t_u(xi: KRPartition, i: int) -> GroupElement:
    """Induced map on the band at distance i below the tower tops.

    Closed form: on the tower-v part it is T^{h_w}, where w is the tower
    whose base receives the point i+1 steps up.
    """
    if not 0 <= 2 * i < min(xi.heights()):
        raise PreconditionError(f"band {i} too wide for the shortest tower")
    raw = [(0, xi.u_set(i).complement())]
    for v, (bv, hv) in enumerate(xi.towers):
        src = xi.atom(v, hv - 1 - i)
        for bw, hw in xi.towers:
            piece = src.intersect(bw.translate(-(i + 1)))
            if not piece.is_empty():
                raw.append((hw, piece))
    return _build(xi.spec, raw, validate=False)


def t_d(xi: KRPartition, j: int) -> GroupElement:
    """Induced map on the band at distance j above the tower bases.

    The return time from level j of tower v is h_v outright.
    """
    if not 0 <= 2 * j < min(xi.heights()):
        raise PreconditionError(f"band {j} too wide for the shortest tower")
    raw = [(0, xi.d_set(j).complement())]
    for v, (bv, hv) in enumerate(xi.towers):
        raw.append((hv, xi.atom(v, j)))
    return _build(xi.spec, raw, validate=False)


def is_n_permutation(s: GroupElement, xi: KRPartition):
    """PermutationForm when s permutes atoms within each tower, else Refusal."""
    perms = []
    for v, (b, h) in enumerate(xi.towers):
        targets = []
        for i in range(h):
            a = xi.atom(v, i)
            vals = cocycle_values_on(s, a)
            if len(vals) != 1:
                return Refusal("cocycle not constant on an atom", a)
            (f,) = vals
            if not 0 <= i + f < h:
                return Refusal("an atom leaves its tower", a)
            targets.append(i + f)
        if sorted(targets) != list(range(h)):
            return Refusal("levels collide inside a tower", b)
        perms.append(tuple(targets))
    return PermutationForm(xi, tuple(perms))


def is_n_rotation(s: GroupElement, xi: KRPartition, r_max: int | None = None):
    """RotationForm when s is a product of band-induced-map powers, else Refusal."""
    min_h = min(xi.heights())
    half = min_h // 2
    if r_max is None:
        r_max = cocycle_bound(s) // min_h + 1
    supp = support(s)
    u_levels = []
    d_levels = []
    for make, band_of, levels in (
        (t_u, xi.u_set, u_levels),
        (t_d, xi.d_set, d_levels),
    ):
        for i in range(half):
            band = band_of(i)
            if supp.disjoint(band):
                continue
            gen = make(xi, i)
            for e in range(-r_max, r_max + 1):
                if e != 0 and _agree_on_set(s, _power(gen, e), band):
                    levels.append((i, e))
                    break
            else:
                return Refusal("no band exponent matches", band)
    form = RotationForm(xi, tuple(u_levels), tuple(d_levels))
    if not equals(form.to_element(), s):
        return Refusal("support extends past the boundary bands")
    return form


def _agree_on_set(s1: GroupElement, s2: GroupElement, a: ClopenSet) -> bool:
    return support(compose(invert(s2), s1)).disjoint(a)


def _level_data(q_elem: GroupElement, xi: KRPartition, q: int):
    """Cocycle tables for one level, or None when the level is invalid.

    Valid means: bandwidth covers the cocycle bound, the cocycle is
    constant on every atom and on every band T^i(base) for i in
    [-m-1, m], and the induced level maps are within-tower bijections
    after reduction mod height.
    """
    m = xi.band
    if q > m:
        return None
    f_atoms = []
    for v, (b, h) in enumerate(xi.towers):
        row = []
        for i in range(h):
            vals = cocycle_values_on(q_elem, xi.atom(v, i))
            if len(vals) != 1:
                return None
            row.append(next(iter(vals)))
        f_atoms.append(row)
    f_bands = {}
    for i in range(-m - 1, m + 1):
        vals = set()
        for v, (b, h) in enumerate(xi.towers):
            vals.add(f_atoms[v][i if i >= 0 else h + i])
        if len(vals) != 1:
            return None
        f_bands[i] = vals.pop()
    perms = []
    for v, (b, h) in enumerate(xi.towers):
        targets = [(i + f_atoms[v][i]) % h for i in range(h)]
        if sorted(targets) != list(range(h)):
            return None
        perms.append(tuple(targets))
    return f_atoms, f_bands, perms


_FACT_CACHE: dict = {}


def factorize(
    q_elem: GroupElement,
    level: int | None = None,
    anchor: PointRep | None = None,
) -> Factorization:
    """Split Q = P∘R over the anchored tower sequence.

    Auto mode returns the smallest valid level; a fixed level below the
    threshold is a precondition error. The composed factors are compared
    with Q exactly before returning.
    """
    key = (q_elem, level, anchor)
    hit = _FACT_CACHE.get(key)
    if hit is not None:
        return hit
    spec = q_elem.spec
    seq = tower_sequence(spec, anchor)
    q = cocycle_bound(q_elem)
    if level is not None:
        xi = seq.level(level)
        data = _level_data(q_elem, xi, q)
        if data is None:
            raise PreconditionError(f"level {level} is below the valid threshold")
        n = level
    else:
        n = 0
        data = None
        while data is None:
            n += 1
            if n > _LEVEL_CAP:
                raise VerificationError("factorization level search exceeded the cap")
            xi = seq.level(n)
            data = _level_data(q_elem, xi, q)
    f_atoms, f_bands, perms = data
    n0 = max(q, n)
    s_u = tuple((a, 1) for a in range(q) if f_bands[-(a + 1)] >= a + 1)
    s_d = tuple((b, -1) for b in range(q) if f_bands[b] <= -(b + 1))
    p_form = PermutationForm(xi, tuple(perms))
    r_form = RotationForm(xi, s_u, s_d)
    fac = Factorization(q_elem, n, n0, p_form, r_form)
    _check_factorization(fac, f_bands)
    _FACT_CACHE[key] = fac
    return fac


def _check_factorization(fac: Factorization, f_bands: dict) -> None:
    xi = fac.xi
    m = xi.band
    if not equals(compose(fac.permutation.to_element(), fac.rotation.to_element()), fac.element):
        raise VerificationError("P∘R does not reproduce Q")
    if fac.rotation.rotation_number() > 1:
        raise VerificationError("rotation number exceeds 1")
    for ss in fac.rotation.supportive_sets():
        if any(i >= fac.n0 for i in ss):
            raise VerificationError("supportive set outside [0, n0)")
    for v, (b, h) in enumerate(xi.towers):
        pv = fac.permutation.perms[v]
        for i in range(-m, m + 1):
            lvl = i if i >= 0 else h + i
            if (pv[lvl] - (i + f_bands[i])) % h != 0:
                raise VerificationError("band permutation disagrees across towers")
        for i in range(h):
            d = abs(pv[i] - i)
            if min(d, h - d) > fac.n0:
                raise VerificationError("displacement exceeds n0")


def order_exceeds(s: GroupElement, bound: int, z: PointRep) -> bool:
    """True when the displacements of z under s, s², ..., s^bound are all
    nonzero, refuting every order up to the bound. False is inconclusive."""
    n = 0
    for _ in range(bound):
        n += cocycle_at(s, z.shifted(n))
        if n == 0:
            return False
    return True


def rotation_escapes(fac: Factorization, bound: int, x: PointRep | None = None) -> bool:
    """Refute order <= bound for a nontrivial rotation part.

    Each supportive band carries an anchor orbit point, and the band's
    induced map moves it strictly in one direction, so the pointwise
    check always concludes.
    """
    if fac.rotation.is_trivial():
        raise PreconditionError("the rotation part is trivial")
    if x is None:
        x, _ = base_point(fac.element.spec, "primary")
    if fac.rotation.u_levels:
        a, _ = fac.rotation.u_levels[0]
        z = x.shifted(-(a + 1))
    else:
        b, _ = fac.rotation.d_levels[0]
        z = x.shifted(b)
    return order_exceeds(fac.rotation.to_element(), bound, z)


def orbit_counts(q_elem: GroupElement, x: PointRep) -> tuple[int, int]:
    """Orbit crossing counts (a, b) of Q past the point x."""
    q = cocycle_bound(q_elem)
    a = sum(
        1
        for n in range(-q, 0)
        if n + cocycle_at(q_elem, x.shifted(n)) >= 0
    )
    b = sum(
        1
        for n in range(0, q)
        if n + cocycle_at(q_elem, x.shifted(n)) < 0
    )
    return a, b


def index(q_elem: GroupElement, x: PointRep | None = None) -> int:
    """Index homomorphism value a(Q) - b(Q), cross-checked two ways."""
    spec = q_elem.spec
    if x is None:
        x, _ = base_point(spec, "primary")
        fac = factorize(q_elem)
    else:
        fac = factorize(q_elem, anchor=x)
    a, b = orbit_counts(q_elem, x)
    s_u, s_d = fac.rotation.supportive_sets()
    if (a, b) != (len(s_u), len(s_d)):
        raise VerificationError("orbit counts disagree with the rotation levels")
    return a - b


def in_stabilizer(q_elem: GroupElement, x: PointRep | None = None) -> bool:
    """True iff Q preserves the forward orbit of x.

    Equivalent to the rotation part of the x-anchored factorization being
    trivial: the bands at a valid level carry the orbit points T^n(x) for
    |n| <= cocycle bound, so the supportive sets have exactly the crossing
    counts as sizes. The crossing counts are what is computed.
    """
    if x is None:
        x, _ = base_point(q_elem.spec, "primary")
    return orbit_counts(q_elem, x) == (0, 0)


def _central_cyl(spec: SystemSpec, x: PointRep, depth: int) -> ClopenSet:
    if spec.kind == "odometer":
        return cylinder(spec, x.window(0, depth - 1))
    return cylinder(spec, x.window(-depth, depth), -depth)


def _distinct_orbits(spec, x, y) -> bool:
    # certified when one anchor provably lies in the primary orbit
    # (eventually constant digits) and the other provably does not
    if spec.kind != "odometer":
        return False
    x_in = x.eventually_zero() or x.eventually_top()
    y_in = y.eventually_zero() or y.eventually_top()
    return (x_in and y.orbit_certificate()) or (y_in and x.orbit_certificate())


def kernel_decompose(
    q_elem: GroupElement,
    x: PointRep | None = None,
    y: PointRep | None = None,
    assume_distinct: bool = False,
    depth_budget: int = _DEPTH_CAP,
) -> tuple[GroupElement, GroupElement]:
    """Split an index-0 element as Q = P1∘P2 with P1, P2 in the stabilizers
    of the forward orbits of x and y.

    P2 is an involution: matched swap pairs carry the orbit points that Q
    moves across the anchor, duplicated over Y = C ∪ T^p(C) so that P2 is
    a product of two isomorphic involutions (hence a commutator with T^p).
    """
    spec = q_elem.spec
    if x is None:
        x, _ = base_point(spec, "primary")
    if y is None:
        y, _ = base_point(spec, "alternate")
    certified = _distinct_orbits(spec, x, y)
    if not certified and not assume_distinct:
        raise PreconditionError(
            "cannot certify the two anchor orbits are distinct; pass assume_distinct"
        )
    a, b = orbit_counts(q_elem, x)
    if a != b:
        raise PreconditionError(f"index is {a - b}, decomposition needs 0")
    q = cocycle_bound(q_elem)
    i_minus = [n for n in range(-q, 0) if n + cocycle_at(q_elem, x.shifted(n)) >= 0]
    i_plus = [n for n in range(0, q) if n + cocycle_at(q_elem, x.shifted(n)) < 0]
    if not i_minus:
        # no crossings: Q already stabilizes the forward orbit of x
        return q_elem, identity(spec)
    pairs = list(zip(i_minus, i_plus))
    p_floor = -min(i_minus)
    c, p = _find_swap_site(spec, x, y, q, p_floor, depth_budget)
    raw = []
    for n_minus, n_plus in pairs:
        d = n_plus - n_minus
        for off in (0, p):
            raw.append((d, c.translate(n_minus + off)))
            raw.append((-d, c.translate(n_plus + off)))
    covered = union_all(spec, (piece for _, piece in raw))
    raw.append((0, covered.complement()))
    p2 = make_element(spec, [(piece, d) for d, piece in raw])
    p1 = compose(q_elem, invert(p2))
    if not in_stabilizer(p1, x):
        raise VerificationError("P1 failed the x-stabilizer check")
    if not in_stabilizer(p2, y):
        raise VerificationError("P2 failed the y-stabilizer check")
    return p1, p2


def _find_swap_site(spec, x, y, q: int, p_floor: int, depth_budget: int):
    """Smallest central cylinder C at x and shift p making all swap blocks
    pairwise disjoint and keeping y clear of them."""
    for depth in range(1, depth_budget + 1):
        c = _central_cyl(spec, x, depth)
        for p in range(max(p_floor, 1), 4 * q + 1):
            yset = c.union(c.translate(p))
            if c.word_count() + c.translate(p).word_count() != yset.word_count():
                continue
            if any(not yset.disjoint(yset.translate(l)) for l in range(1, 2 * q + 1)):
                continue
            if any(
                yset.contains_point(y.shifted(-j)) for j in range(-q, q + 1)
            ):
                continue
            return c, p
    raise PreconditionError("swap-site search exhausted the depth budget; raise it")


def separation_parts(
    spec: SystemSpec, o: ClopenSet, x: PointRep
) -> tuple[GroupElement, GroupElement]:
    """Two block transpositions along the induced map of O whose commutator
    is an order-3 element supported in O and moving x."""
    if o.is_empty():
        raise PreconditionError("witness region must be nonempty")
    if not o.contains_point(x):
        raise PreconditionError("the point must lie inside the witness region")
    rf = first_return(spec, o)
    for depth in range(1, _DEPTH_CAP + 1):
        u = _central_cyl(spec, x, depth).intersect(o)
        if not u.contains_point(x):
            continue
        k = _cell_time(rf, u)
        if k is None:
            continue
        j = _cell_time(rf, u.translate(k))
        if j is None:
            continue
        blocks = [u, u.translate(k), u.translate(k + j)]
        if any(
            not blocks[r].disjoint(blocks[s])
            for r in range(3)
            for s in range(r + 1, 3)
        ):
            continue
        sigma = make_element(
            spec,
            [(u, k), (u.translate(k), -k), (u.union(u.translate(k)).complement(), 0)],
        )
        tau = make_element(
            spec,
            [
                (u.translate(k), j),
                (u.translate(k + j), -j),
                (u.translate(k).union(u.translate(k + j)).complement(), 0),
            ],
        )
        return sigma, tau
    raise PreconditionError("no block system found within the depth budget")


def _cell_time(rf, u: ClopenSet) -> int | None:
    for k, cell in rf.cells.items():
        if u.subset(cell):
            return k
    return None


def separation_witness(spec: SystemSpec, o: ClopenSet, x: PointRep) -> GroupElement:
    """Commutator of the two block transpositions: order 3, supported in O,
    moving x."""
    sigma, tau = separation_parts(spec, o, x)
    g = commutator(tau, sigma)
    if not support(g).subset(o):
        raise VerificationError("witness support leaks outside O")
    if cocycle_at(g, x) == 0:
        raise VerificationError("witness fixes the designated point")
    return g

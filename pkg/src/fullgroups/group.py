"""Group elements: homeomorphisms acting as powers of T on a clopen partition.

An element S is stored as its orbit cocycle f_S, a finite partition of the
space into clopen pieces with an integer power per piece: S = T^n on piece
C_n. Canonical form merges pieces by power, so two elements are equal iff
their canonical forms coincide. Composition follows
f_{S1 S2}(x) = f_{S2}(x) + f_{S1}(S2 x).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .clopen import (
    ClopenSet,
    _expand_words,
    _ladder_size,
    _ladder_window,
    check_partition,
    cylinder,
    empty,
    full,
    union_all,
)
from .errors import NotPartitionError, PreconditionError
from .systems import SystemSpec, PointRep, base_point, language


@dataclass(frozen=True)
class GroupElement:
    """Element of the topological full group over its system."""

    spec: SystemSpec
    pieces: tuple[tuple[int, ClopenSet], ...]  # sorted by power, merged, disjoint, covering

    def power_on(self, piece_index: int) -> int:
        return self.pieces[piece_index][0]

    def cocycle_values(self) -> list[int]:
        return [n for n, _ in self.pieces]

    def __repr__(self):
        return f"GroupElement({len(self.pieces)} pieces, powers {self.cocycle_values()})"


def _build(spec: SystemSpec, raw_pieces, validate: bool = False) -> GroupElement:
    by_power: dict[int, ClopenSet] = {}
    for n, c in raw_pieces:
        if c.is_empty():
            continue
        by_power[n] = by_power[n].union(c) if n in by_power else c
    if not by_power:
        raise NotPartitionError("element has no pieces")
    pieces = tuple(sorted(by_power.items()))
    elem = GroupElement(spec, pieces)
    if validate:
        _validate(elem)
    return elem


def _validate(elem: GroupElement) -> None:
    cells = [c for _, c in elem.pieces]
    try:
        check_partition(elem.spec, cells)
    except NotPartitionError as e:
        raise NotPartitionError(f"domain pieces: {e}") from e
    try:
        check_partition(elem.spec, [c.translate(n) for n, c in elem.pieces])
    except NotPartitionError as e:
        raise NotPartitionError(f"image pieces: {e}") from e


def make_element(spec: SystemSpec, pieces) -> GroupElement:
    """Build an element from (clopen, power) pieces, validating bijectivity.

    The pieces must partition the space and so must their T^power images.
    """
    return _build(spec, [(int(n), c) for c, n in pieces], validate=True)


def identity(spec: SystemSpec) -> GroupElement:
    return _build(spec, [(0, full(spec))])


def shift(spec: SystemSpec, n: int = 1) -> GroupElement:
    """T^n as a group element (constant cocycle)."""
    return _build(spec, [(n, full(spec))])


def compose(s1: GroupElement, s2: GroupElement) -> GroupElement:
    """s1 after s2."""
    if s1.spec != s2.spec:
        raise PreconditionError("elements live over different systems")
    raw = []
    for n2, c2 in s2.pieces:
        for n1, c1 in s1.pieces:
            cell = c2.intersect(c1.translate(-n2))
            if not cell.is_empty():
                raw.append((n1 + n2, cell))
    return _build(s1.spec, raw)


def invert(s: GroupElement) -> GroupElement:
    return _build(s.spec, [(-n, c.translate(n)) for n, c in s.pieces])


def equals(s1: GroupElement, s2: GroupElement) -> bool:
    return s1.spec == s2.spec and s1.pieces == s2.pieces


def is_identity(s: GroupElement) -> bool:
    return s.cocycle_values() == [0]


def commutator(s1: GroupElement, s2: GroupElement) -> GroupElement:
    return compose(compose(s1, s2), compose(invert(s1), invert(s2)))


def conjugate(s: GroupElement, by: GroupElement) -> GroupElement:
    return compose(compose(by, s), invert(by))


def apply(s: GroupElement, p: PointRep) -> PointRep:
    """Image of a point; exact via the piece containing it."""
    for n, c in s.pieces:
        if c.contains_point(p):
            return p.shifted(n)
    raise PreconditionError("point escaped the piece partition (invalid element?)")


def cocycle_at(s: GroupElement, p: PointRep) -> int:
    for n, c in s.pieces:
        if c.contains_point(p):
            return n
    raise PreconditionError("point escaped the piece partition (invalid element?)")


def image(s: GroupElement, a: ClopenSet) -> ClopenSet:
    """Forward image S(A), exact."""
    return union_all(s.spec, (a.intersect(c).translate(n) for n, c in s.pieces))


def support(s: GroupElement) -> ClopenSet:
    """Closure-free exact support: union of pieces with nonzero power.

    In an aperiodic system T^n moves every point for n != 0, so the moved
    set is already clopen.
    """
    return union_all(s.spec, (c for n, c in s.pieces if n != 0))


def order(s: GroupElement, bound: int) -> int | None:
    """Order of s if it is <= bound, else None."""
    if bound < 1:
        raise PreconditionError("bound must be >= 1")
    acc = s
    for k in range(1, bound + 1):
        if is_identity(acc):
            return k
        acc = compose(acc, s)
    return None


def cocycle_bound(s: GroupElement) -> int:
    return max(abs(n) for n, _ in s.pieces)


def embed_symmetric(spec: SystemSpec, m: int, perm, u: ClopenSet) -> GroupElement:
    """Permutation of the disjoint blocks U, TU, ..., T^(m-1)U, identity outside.

    perm is the image tuple (one-line notation) of a permutation of range(m).
    """
    perm = tuple(perm)
    if sorted(perm) != list(range(m)) or m < 1:
        raise PreconditionError(f"{perm!r} is not a permutation of range({m})")
    if u.is_empty():
        raise PreconditionError("block must be nonempty")
    blocks = [u.translate(i) for i in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if not blocks[i].disjoint(blocks[j]):
                raise PreconditionError(f"blocks T^{i}U and T^{j}U overlap")
    raw = [(perm[i] - i, blocks[i]) for i in range(m)]
    rest = full(spec).difference(union_all(spec, blocks))
    raw.append((0, rest))
    return _build(spec, raw, validate=True)


def element_hash(s: GroupElement) -> str:
    """Stable 16-hex-digit digest of the canonical piece data."""
    blob = repr(
        (s.spec, tuple((p, c.lo, c.hi, tuple(sorted(c.words))) for p, c in s.pieces))
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def disjoint_cylinder_block(spec: SystemSpec, m: int) -> ClopenSet:
    """Smallest central cylinder U around the primary point with
    U, TU, ..., T^(m-1)U pairwise disjoint. Deterministic."""
    point, _ = base_point(spec, "primary")
    size = 1
    while True:
        if spec.kind == "odometer":
            u = cylinder(spec, point.window(0, size - 1))
        else:
            u = cylinder(spec, point.window(-size, size), -size)
        blocks = [u.translate(i) for i in range(m)]
        if all(blocks[i].disjoint(blocks[j]) for i in range(m) for j in range(i + 1, m)):
            return u
        size += 1
        if size > 64:
            raise PreconditionError("no disjoint block found at sane depth")


def _carve_next_cylinder(spec: SystemSpec, used: ClopenSet) -> ClopenSet:
    """Lexicographically least proper cylinder inside the complement of `used`.

    Proper: a sibling word is left behind at the same window, so later calls
    always find room. Deterministic."""
    rest = used.complement()
    if rest.is_empty():
        raise PreconditionError("nothing left to carve")
    size = 1 if spec.kind == "odometer" else 0
    while True:
        lo, hi = (0, size - 1) if spec.kind == "odometer" else (-size, size)
        if hi >= lo:
            words = sorted(
                w for w in language(spec, hi - lo + 1) if cylinder(spec, w, lo).subset(rest)
            )
            if len(words) >= 2:
                return cylinder(spec, words[0], lo)
        size += 1
        if size > 64:
            raise PreconditionError("carving failed at sane depth")


_DIRECTSUM_STATE: dict = {}


def directsum_generator(spec: SystemSpec, k: int) -> GroupElement:
    """k-th generator Q_k = T_{B'} T_{B''}^-1 of an infinite direct sum of Z.

    The generators have disjoint supports A_k = B'_k | B''_k with
    B'' = T^q(B'), so they commute pairwise, and each has index 0.
    Deterministic: the A_k are carved from a fixed sequence of pairwise
    disjoint cylinders.
    """
    from .towers import first_return, induced

    if k < 1:
        raise PreconditionError("generators are numbered from 1")
    state = _DIRECTSUM_STATE.setdefault(spec, {"used": empty(spec), "gens": []})
    while len(state["gens"]) < k:
        used = state["used"]
        cyl = _carve_next_cylinder(spec, used)
        # inside cyl, find a return cell and a sub-cylinder moved off itself
        rf = first_return(spec, cyl)
        t = min(rf.cells)
        cell = rf.cells[t]
        depth = 1 if spec.kind == "odometer" else 0
        b_prime = None
        while b_prime is None:
            lo, hi = (0, depth - 1) if spec.kind == "odometer" else (-depth, depth)
            if hi >= lo:
                for w in sorted(language(spec, hi - lo + 1)):
                    cand = cylinder(spec, w, lo).intersect(cell)
                    if cand.is_empty():
                        continue
                    if cand.translate(t).disjoint(cand):
                        b_prime = cand
                        break
            depth += 1
            if depth > 64:
                raise PreconditionError("no separated sub-cylinder at sane depth")
        b_second = b_prime.translate(t)
        q1 = induced(spec, b_prime)
        q2 = induced(spec, b_second)
        gen = compose(q1, invert(q2))
        state["gens"].append(gen)
        state["used"] = used.union(b_prime).union(b_second)
    return state["gens"][k - 1]


# -- cocycle evaluation helpers used by the canonical-form machinery --------


def cocycle_table(s: GroupElement) -> tuple[tuple[int, int], dict]:
    """(window, word -> power) over the hull ladder window of all pieces."""
    spec = s.spec
    size = max(_ladder_size(spec, c.lo, c.hi) for _, c in s.pieces)
    size = max(size, 1 if spec.kind == "odometer" else 0)
    win = _ladder_window(spec, size)
    table: dict = {}
    for n, c in s.pieces:
        for w in _expand_words(spec, c.words, (c.lo, c.hi), size):
            table[w] = n
    return win, table


def cocycle_values_on(s: GroupElement, a: ClopenSet) -> set[int]:
    """Set of cocycle values f_S takes on the clopen set A."""
    if a.is_empty():
        return set()
    spec = s.spec
    win, table = cocycle_table(s)
    size_s = _ladder_size(spec, *win)
    size_a = _ladder_size(spec, a.lo, a.hi)
    if size_a >= size_s:
        lo, hi = _ladder_window(spec, size_a)
        a0, b0 = win[0] - lo, win[1] - lo + 1
        return {table[w[a0:b0]] for w in a.words}
    words = _expand_words(spec, a.words, (a.lo, a.hi), size_s)
    return {table[w] for w in words}


def agree_on(s1: GroupElement, s2: GroupElement, a: ClopenSet) -> bool:
    """True iff the two elements act identically on every point of A."""
    if a.is_empty():
        return True
    diff = compose(invert(s2), s1)
    return support(diff).disjoint(a)

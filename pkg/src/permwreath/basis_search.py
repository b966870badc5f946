"""Basis enumeration for wreath products and the infinite antichain families.

A permutation sits in the basis of a wreath product when it is not a
member but every one-point deletion is.  At desk scale the basis up to a
length bound falls out of a straight scan of the symmetric groups; the
scan leans on two facts: membership is closed downward (a non-member
deletion settles the matter), and every deletion of a length-n
permutation was already classified during the length-(n-1) pass.

The antichain families are parameterised generators of arbitrarily long
basis elements for specific products, each pairing an outer class with
the inner classes it defeats.
"""

from __future__ import annotations

import itertools
import multiprocessing
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Iterable, Sequence

from .avoidance import PermClass, named
from .perm_core import (
    CapExceeded,
    Permutation,
    _trusted,
    delete_point,
    involves,
)
from .profile import wreath_member

#: Default bound on exhaustive basis enumeration.
BASIS_CAP = 11


@dataclass(frozen=True)
class BasisRecord:
    """A discovered minimal non-member of a wreath product."""

    perm: Permutation
    x_basis: tuple[Permutation, ...]
    y_basis: tuple[Permutation, ...]
    length: int
    discovered_at: str


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _record(pi: Permutation, outer: PermClass, inner: PermClass) -> BasisRecord:
    return BasisRecord(pi, outer.basis, inner.basis, len(pi), _now())


def _deletions(vals: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
    n = len(vals)
    for k in range(n):
        removed = vals[k]
        yield tuple(
            v - 1 if v > removed else v for i, v in enumerate(vals) if i != k
        )


def basis_elements_of_length(
    outer: PermClass,
    inner: PermClass,
    n: int,
    prev_members: dict | None = None,
) -> tuple[list[Permutation], dict]:
    """One length-n pass of the basis scan.

    ``prev_members`` maps every length-(n-1) permutation to its
    membership verdict; pass None to fall back on direct membership
    tests (used when resuming mid-run).  Returns the basis elements of
    length n in lexicographic order plus the full length-n verdict map
    for the next pass.
    """
    members: dict = {}
    found: list[Permutation] = []
    for vals in itertools.permutations(range(1, n + 1)):
        minimal = True
        for d in _deletions(vals):
            if prev_members is not None:
                ok = prev_members[d]
            else:
                ok = wreath_member(_trusted(d), outer, inner) if d else True
            if not ok:
                minimal = False
                break
        if minimal:
            pi = _trusted(vals)
            is_member = wreath_member(pi, outer, inner)
            members[vals] = is_member
            if not is_member:
                found.append(pi)
        else:
            # Some deletion already left the product, so this one is out
            # too (membership is closed downward), and it is not minimal.
            members[vals] = False
    return found, members


def _scan_partition(args):
    outer, inner, n, first = args
    found = []
    rest = [v for v in range(1, n + 1) if v != first]
    for tail in itertools.permutations(rest):
        vals = (first, *tail)
        if all(
            wreath_member(_trusted(d), outer, inner) for d in _deletions(vals)
        ):
            pi = _trusted(vals)
            if not wreath_member(pi, outer, inner):
                found.append(pi)
    return found


def wreath_basis(
    outer: PermClass,
    inner: PermClass,
    max_len: int,
    *,
    cap: int = BASIS_CAP,
    jobs: int = 1,
) -> list[BasisRecord]:
    """All basis elements of the wreath product up to ``max_len``.

    Ascending by (length, lexicographic order).  With ``jobs`` > 1 the
    length-n pass is partitioned by first entry across worker processes;
    the result is identical either way.

    >>> from .avoidance import av
    >>> [r.perm for r in wreath_basis(av(21), av(21), 5)]
    [Permutation([2, 1])]
    """
    if max_len > cap:
        raise CapExceeded(f"max_len {max_len} exceeds the cap {cap}")
    records: list[BasisRecord] = []
    if jobs > 1:
        for n in range(1, max_len + 1):
            if n <= 2:
                found, _ = basis_elements_of_length(outer, inner, n)
            else:
                tasks = [(outer, inner, n, first) for first in range(1, n + 1)]
                with multiprocessing.Pool(jobs) as pool:
                    parts = pool.map(_scan_partition, tasks)
                found = sorted(p for part in parts for p in part)
            records.extend(_record(p, outer, inner) for p in found)
        return records
    members: dict | None = None
    for n in range(1, max_len + 1):
        found, members = basis_elements_of_length(outer, inner, n, members)
        records.extend(_record(p, outer, inner) for p in found)
    return records


@dataclass(frozen=True)
class VerifyResult:
    """Verdict on a claimed basis element, with the failure witness."""

    ok: bool
    reason: str
    deleted_position: int | None = None
    witness: Permutation | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_basis_element(
    pi: Sequence[int], outer: PermClass, inner: PermClass
) -> VerifyResult:
    """Check that ``pi`` is minimally outside the wreath product.

    True requires pi itself to be a non-member while every one-point
    deletion is a member; a failed check names the offending deletion
    or reports that pi is a member.
    """
    pi = pi if isinstance(pi, Permutation) else Permutation(pi)
    if wreath_member(pi, outer, inner):
        return VerifyResult(False, "the permutation is a member of the product")
    if len(pi) > 1:
        for pos in range(1, len(pi) + 1):
            d = delete_point(pi, pos)
            if not wreath_member(d, outer, inner):
                return VerifyResult(
                    False,
                    f"deleting position {pos} leaves a non-member",
                    deleted_position=pos,
                    witness=d,
                )
    return VerifyResult(True, "minimal non-member")


# --- antichain families -----------------------------------------------

def _interleave(highs: list[int], lows: list[int]) -> list[int]:
    out = []
    for h, l in zip(highs, lows):
        out.extend((h, l))
    return out


def _thm6(k: int) -> list[int]:
    if k == 1:
        return [2, 5, 1, 3, 7, 6, 4]
    mid = _interleave(
        [2 * j + 3 for j in range(3, k + 1)], [2 * j for j in range(3, k + 1)]
    )
    return [2, 5, 1, 3, 7, 4, *mid, 2 * k + 5, 2 * k + 4, 2 * k + 2]


def _tail4(k: int) -> list[int]:
    return [2 * k + 6, 2 * k + 5, 2 * k + 4, 2 * k + 2]


def _ex2ii(k: int) -> list[int]:
    if k == 1:
        return [2, 5, 1, 3, 8, 7, 6, 4]
    mid = _interleave(
        [2 * j + 3 for j in range(3, k + 1)], [2 * j for j in range(3, k + 1)]
    )
    return [2, 5, 1, 3, 7, 4, *mid, *_tail4(k)]


def _swap_last_two(vals: list[int]) -> list[int]:
    return vals[:-2] + [vals[-1], vals[-2]]


def _ex2iii(k: int) -> list[int]:
    return _swap_last_two(_ex2ii(k))


def _ex3_4321(k: int) -> list[int]:
    if k == 1:
        return [2, 5, 1, 4, 8, 7, 6, 3]
    mid = _interleave(
        [2 * j + 3 for j in range(3, k + 1)], [2 * j for j in range(3, k + 1)]
    )
    return [2, 5, 1, 4, 7, 3, *mid, *_tail4(k)]


def _ex3_4312(k: int) -> list[int]:
    return _swap_last_two(_ex3_4321(k))


def _wid_2413(k: int) -> list[int]:
    descent = _interleave(
        list(range(4 * k + 4, 2 * k + 5, -2)),
        [1] + list(range(4, 2 * k + 1, 2)),
    )
    middle = [2 * k + 4, 2 * k + 2, 2 * k + 7, 2 * k + 5, 2 * k + 3]
    ascent = _interleave(
        list(range(2 * k + 9, 4 * k + 6, 2)),
        list(range(2 * k + 1, 4, -2)),
    )
    return [*descent, *middle, *ascent, 2, 3]


def _wid_2143(k: int) -> list[int]:
    descent = _interleave(
        list(range(4 * k + 6, 2 * k + 7, -2)),
        [1] + list(range(4, 2 * k + 1, 2)),
    )
    middle = [
        2 * k + 6,
        2 * k + 2,
        2 * k + 4,
        2 * k + 7,
        2 * k + 9,
        2 * k + 5,
        2 * k + 3,
    ]
    ascent = _interleave(
        list(range(2 * k + 11, 4 * k + 8, 2)),
        list(range(2 * k + 1, 4, -2)),
    )
    return [*descent, *middle, *ascent, 2, 3]


@dataclass(frozen=True)
class AntichainFamily:
    """A generator of arbitrarily long basis elements for X wr Y.

    ``outer`` is the class supplying the anchor pattern; ``inners`` are
    the block classes the family defeats (the first is canonical).
    """

    name: str
    generate: Callable[[int], list[int]]
    outer: PermClass
    inners: tuple[PermClass, ...]

    @property
    def inner(self) -> PermClass:
        return self.inners[0]


def _family(name, gen, outer_name, inner_names) -> AntichainFamily:
    return AntichainFamily(
        name, gen, named(outer_name), tuple(named(s) for s in inner_names)
    )


FAMILIES: dict[str, AntichainFamily] = {
    f.name: f
    for f in (
        _family("thm6", _thm6, "av25134", ("av321", "av321-2341", "av321-3412")),
        _family(
            "ex2ii",
            _ex2ii,
            "av25134",
            (
                "av4321-4312",
                "av4321-4231",
                "av4321-4213",
                "av4321-3412",
                "av4321-3214",
            ),
        ),
        _family(
            "ex2iii",
            _ex2iii,
            "av25134",
            ("av4312-4231", "av4312-4213", "av4312-3421"),
        ),
        _family("ex3-4321-4123", _ex3_4321, "av25143", ("av4321-4123",)),
        _family("ex3-4312-4123", _ex3_4312, "av25143", ("av4312-4123",)),
        _family("widdershins-2413", _wid_2413, "av31542", ("av3412-2413",)),
        _family("widdershins-2143", _wid_2143, "av412563", ("av3412-2143",)),
    )
}


def antichain_member(family: str | AntichainFamily, k: int) -> Permutation:
    """The k-th member of an antichain family (k from 1).

    >>> str(antichain_member("thm6", 1))
    '2 5 1 3 7 6 4'
    """
    if isinstance(family, str):
        try:
            family = FAMILIES[family]
        except KeyError:
            known = ", ".join(sorted(FAMILIES))
            raise ValueError(
                f"unknown family {family!r}; known: {known}"
            ) from None
    if k < 1:
        raise ValueError("family members are indexed from 1")
    return Permutation(family.generate(k))


def check_antichain(perms: Iterable[Sequence[int]]) -> bool:
    """True iff the permutations are pairwise incomparable under involvement."""
    ps = [p if isinstance(p, Permutation) else Permutation(p) for p in perms]
    for a, b in itertools.combinations(ps, 2):
        if involves(a, b) or involves(b, a):
            return False
    return True

"""Finitely based pattern classes: membership, enumeration, named classes.

A class is represented by its basis, the finite set of forbidden
patterns; a permutation belongs to the class exactly when it involves
none of them.  Bases are normalised to antichains on construction --
any element involving another is redundant and silently dropped (with a
warning so sloppy command-line input stays visible).
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Sequence

from .perm_core import (
    ONE,
    CapExceeded,
    Permutation,
    _trusted,
    format_perm,
    involves,
    parse_perm,
)

#: Default bound for exhaustive enumeration of class members by length.
ENUM_CAP = 10

#: Entries kept by the membership memo (it is consulted heavily by the
#: deflation scans, which re-test many overlapping segments).
MEMBER_CACHE_SIZE = 1 << 20


class BasisNormalizationWarning(UserWarning):
    """A supplied basis was not an antichain and has been trimmed."""


@dataclass(frozen=True)
class PermClass:
    """A pattern-avoidance class given by its basis.

    Equality and hashing look only at the (normalised) basis, so two
    differently named handles on the same class compare equal and share
    membership cache entries.
    """

    basis: tuple[Permutation, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        elems = sorted(
            {b if isinstance(b, Permutation) else Permutation(b) for b in self.basis},
            key=lambda p: (len(p), p),
        )
        keep = tuple(
            b
            for b in elems
            if not any(o != b and involves(o, b) for o in elems)
        )
        if len(keep) != len(elems):
            dropped = [format_perm(b) for b in elems if b not in keep]
            warnings.warn(
                f"basis was not an antichain; dropped {', '.join(dropped)}",
                BasisNormalizationWarning,
                stacklevel=3,
            )
        object.__setattr__(self, "basis", keep)

    def __str__(self) -> str:
        return self.name if self.name else class_literal(self)


def av(*patterns, name: str | None = None) -> PermClass:
    """Build the class avoiding the given patterns.

    Patterns may be Permutations, iterables of ranks, or anything
    :func:`parse_perm` understands (ints included, so ``av(321)`` works).

    >>> av(321).basis
    (Permutation([3, 2, 1]),)
    """
    basis = []
    for p in patterns:
        if isinstance(p, Permutation):
            basis.append(p)
        elif isinstance(p, (str, int)):
            basis.append(parse_perm(str(p)))
        else:
            basis.append(Permutation(p))
    return PermClass(tuple(basis), name=name)


@lru_cache(maxsize=MEMBER_CACHE_SIZE)
def _member(pi: Permutation, cls: PermClass) -> bool:
    return not any(
        involves(b, pi) for b in cls.basis if len(b) <= len(pi)
    )


def member(pi: Sequence[int], cls: PermClass) -> bool:
    """True iff ``pi`` avoids every basis element of ``cls``.

    Memoised (bounded LRU); the cache is safe under concurrent readers
    and writers, and worker processes simply grow their own.

    >>> member(Permutation((2, 5, 1, 3, 7, 6, 4)), av(321))
    False
    """
    if not isinstance(pi, Permutation):
        pi = Permutation(pi)
    return _member(pi, cls)


def enumerate_members(
    cls: PermClass, n: int, *, cap: int = ENUM_CAP
) -> list[Permutation]:
    """All members of ``cls`` of length ``n``, in lexicographic order.

    Members are grown by inserting the new maximum into shorter members
    (deleting the maximum of a member always lands back in the class),
    so only candidates with a fighting chance get the full test.
    """
    if n < 1:
        raise ValueError("length must be positive")
    if n > cap:
        raise CapExceeded(f"enumeration length {n} exceeds the cap {cap}")
    layer = [ONE] if member(ONE, cls) else []
    for m in range(2, n + 1):
        grown = []
        for mu in layer:
            base = list(mu)
            for p in range(m):
                cand = _trusted(base[:p] + [m] + base[p:])
                if member(cand, cls):
                    grown.append(cand)
        layer = grown
    return sorted(layer)


# --- registry ---------------------------------------------------------

def _pairs(*bases: tuple[int, int]) -> list[PermClass]:
    return [av(a, b, name=f"av{a}-{b}") for a, b in bases]


def _build_registry() -> dict[str, PermClass]:
    classes = [
        av(21, name="av21"),
        av(123, name="av123"),
        av(321, name="av321"),
        av(25134, name="av25134"),
        av(25143, name="av25143"),
        av(31542, name="av31542"),
        av(412563, name="av412563"),
        av(321654, name="av321654"),
        *_pairs((321, 2341), (321, 3412)),
        *_pairs((4321, 4312), (4321, 4231), (4321, 4213), (4321, 3412), (4321, 3214)),
        *_pairs((4312, 4231), (4312, 4213), (4312, 3421)),
        *_pairs((4321, 4123), (4312, 4123)),
        *_pairs((3412, 2413), (3412, 2143)),
        av(321, 2341, 3412, 4123, name="inc-osc"),
    ]
    reg = {}
    for c in classes:
        if c.name in reg:
            raise ValueError(f"duplicate registry name {c.name}")
        reg[c.name] = c
    reg["widdershins-y"] = reg["av3412-2413"]
    return reg


REGISTRY = MappingProxyType(_build_registry())


def named(name: str) -> PermClass:
    """Look up a registered class by name.

    >>> named("av321").basis
    (Permutation([3, 2, 1]),)
    """
    try:
        return REGISTRY[name.lower()]
    except KeyError:
        known = ", ".join(sorted(REGISTRY))
        raise ValueError(f"unknown class name {name!r}; known: {known}") from None


_LITERAL = re.compile(r"^av\((?P<body>.*)\)$", re.IGNORECASE)


def parse_class(text: str) -> PermClass:
    """Parse a class from a registry name or an ``av(p1,p2,...)`` literal.

    >>> parse_class("av(3412, 2413)") == named("widdershins-y")
    True
    """
    s = text.strip()
    if s.lower() in REGISTRY:
        return REGISTRY[s.lower()]
    m = _LITERAL.match(s)
    if not m:
        raise ValueError(
            f"cannot parse class {text!r}: expected a registry name or av(...)"
        )
    body = m.group("body").strip()
    if not body:
        return PermClass(())
    return av(*[tok.strip() for tok in body.split(",")])


def class_literal(cls: PermClass) -> str:
    """Canonical ``av(...)`` literal for ``cls``; re-parses to an equal class."""
    return "av(" + ",".join(format_perm(b) for b in cls.basis) + ")"

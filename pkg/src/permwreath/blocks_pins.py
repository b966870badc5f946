"""Minimal blocks, pin sequences, pin words, and the bounded pin probe.

Viewing a permutation as its plot, the *minimal block* on two positions
is the shortest interval containing both.  A *pin sequence* walks the
plot: each pin after the second lies outside the bounding rectangle of
its predecessors and slices that rectangle horizontally or vertically.
A *proper* pin additionally separates the previous pin from the earlier
rectangle and is taken maximally in its direction among the pins that
could do so.

Pin words give proper pin sequences a free-standing form: an origin pair
(rising or falling) plus letters over L, R, U, D with consecutive
letters perpendicular.  Realising a word on a fractional grid and
reducing yields a permutation, and every proper pin sequence of a given
shape realises the same pattern, so searching over words covers all of
them.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .avoidance import PermClass, member
from .perm_core import Permutation, _trusted, points, reduce

LEFT = "left"
RIGHT = "right"
UP = "up"
DOWN = "down"

_LETTER_TO_DIRECTION = {"L": LEFT, "R": RIGHT, "U": UP, "D": DOWN}
_HORIZONTAL = frozenset("LR")  # position lies outside, value slices


class PinConditionError(ValueError):
    """A claimed pin sequence breaks one of the pin conditions."""

    def __init__(self, index: int, condition: str):
        self.index = index
        self.condition = condition
        super().__init__(f"pin {index}: {condition}")


# --- minimal blocks ---------------------------------------------------

@dataclass(frozen=True)
class MinimalBlock:
    """The shortest interval of ``host`` containing two given positions."""

    host: Permutation
    pos_range: tuple[int, int]
    val_range: tuple[int, int]
    pattern: Permutation

    @property
    def values(self) -> tuple[int, ...]:
        s, e = self.pos_range
        return tuple(self.host[s - 1 : e])


def _minimal_span(
    pi: Sequence[int], i: int, j: int, schedule: str = "batch"
) -> tuple[int, int]:
    # Closure expansion: widen the position range to cover the value
    # range and vice versa until stable.  The closure point is unique,
    # so the expansion schedule cannot matter; "single" widens one value
    # at a time and exists so tests can confirm exactly that.
    pos_of = {v: p for p, v in enumerate(pi, start=1)}
    lo, hi = i, j
    while True:
        seg = pi[lo - 1 : hi]
        vlo, vhi = min(seg), max(seg)
        missing = [v for v in range(vlo, vhi + 1) if not lo <= pos_of[v] <= hi]
        if not missing:
            return lo, hi
        if schedule == "single":
            missing = [max(missing)]
        for v in missing:
            p = pos_of[v]
            if p < lo:
                lo = p
            elif p > hi:
                hi = p


def minimal_block(pi: Sequence[int], i: int, j: int) -> MinimalBlock:
    """The unique smallest interval of ``pi`` containing positions i and j.

    >>> mb = minimal_block(Permutation((2, 3, 6, 7, 4, 5, 9, 8, 1)), 2, 3)
    >>> mb.pos_range, mb.values
    ((2, 6), (3, 6, 7, 4, 5))
    """
    pi = pi if isinstance(pi, Permutation) else Permutation(pi)
    n = len(pi)
    if not 1 <= i < j <= n:
        raise ValueError(f"need positions 1 <= i < j <= {n}, got i={i}, j={j}")
    s, e = _minimal_span(pi, i, j)
    seg = pi[s - 1 : e]
    return MinimalBlock(pi, (s, e), (min(seg), max(seg)), reduce(seg))


# --- rectangles and pin conditions ------------------------------------

Point = tuple  # (position, value); integral for hosts, Fractions while realising


def _bbox(pts: Sequence[Point]) -> tuple:
    xs = [p for p, _ in pts]
    ys = [v for _, v in pts]
    return min(xs), max(xs), min(ys), max(ys)


def _inside(q: Point, rect) -> bool:
    pmin, pmax, vmin, vmax = rect
    return pmin <= q[0] <= pmax and vmin <= q[1] <= vmax


def _slice_direction(q: Point, rect):
    # The direction in which q slices rect, or None if it does not.
    pos, val = q
    pmin, pmax, vmin, vmax = rect
    if vmin < val < vmax:
        if pos > pmax:
            return RIGHT
        if pos < pmin:
            return LEFT
        return None
    if pmin < pos < pmax:
        if val > vmax:
            return UP
        if val < vmin:
            return DOWN
    return None


def _valid_pin(q: Point, rect) -> bool:
    return not _inside(q, rect) and _slice_direction(q, rect) is not None


def _separates(q: Point, prev: Point, rect2) -> bool:
    # Does q lie between prev and rect2, by position or by value?
    pos, val = q
    ppos, pval = prev
    pmin, pmax, vmin, vmax = rect2
    if ppos > pmax and pmax < pos < ppos:
        return True
    if ppos < pmin and ppos < pos < pmin:
        return True
    if pval > vmax and vmax < val < pval:
        return True
    if pval < vmin and pval < val < vmin:
        return True
    return False


def _further(a: Point, b: Point, direction: str) -> bool:
    if direction == RIGHT:
        return a[0] > b[0]
    if direction == LEFT:
        return a[0] < b[0]
    if direction == UP:
        return a[1] > b[1]
    return a[1] < b[1]


@dataclass(frozen=True)
class PinSequence:
    """A validated pin sequence of a host permutation.

    ``directions`` and ``proper_flags`` align with ``pins``; the first
    two entries are None since the conditions start at the third pin.
    A pin is proper when it separates the previous pin from the earlier
    rectangle and is maximal in its direction among the separating
    candidates.
    """

    host: Permutation
    pins: tuple[tuple[int, int], ...]
    directions: tuple
    proper_flags: tuple


def classify_pins(host: Sequence[int], pin_points: Iterable) -> PinSequence:
    """Validate a pin sequence and classify each pin.

    ``pin_points`` are (position, value) points of ``host``.  Raises
    :class:`PinConditionError` naming the first offending pin when the
    points are not a pin sequence at all; properness shortfalls are
    reported through the flags, not as errors.
    """
    host = host if isinstance(host, Permutation) else Permutation(host)
    pts = tuple((int(p), int(v)) for p, v in pin_points)
    if len(pts) < 2:
        raise ValueError("a pin sequence needs at least two points")
    n = len(host)
    for idx, (p, v) in enumerate(pts, start=1):
        if not (1 <= p <= n and host[p - 1] == v):
            raise PinConditionError(idx, f"({p}, {v}) is not a point of the host")
    if len(set(pts)) != len(pts):
        raise ValueError("pin points must be distinct")

    host_points = points(host)
    directions: list = [None, None]
    proper: list = [None, None]
    for idx in range(2, len(pts)):
        p = pts[idx]
        rect = _bbox(pts[:idx])
        if _inside(p, rect):
            raise PinConditionError(
                idx + 1, "lies inside the rectangle of the earlier pins"
            )
        d = _slice_direction(p, rect)
        if d is None:
            raise PinConditionError(
                idx + 1, "does not slice the rectangle of the earlier pins"
            )
        directions.append(d)
        rect2 = _bbox(pts[: idx - 1])
        prev = pts[idx - 1]
        if not _separates(p, prev, rect2):
            proper.append(False)
            continue
        best = p
        for q in host_points:
            if (
                not _inside(q, rect)
                and _slice_direction(q, rect) == d
                and _separates(q, prev, rect2)
                and _further(q, best, d)
            ):
                best = q
        proper.append(best == p)
    return PinSequence(host, pts, tuple(directions), tuple(proper))


# --- pin words --------------------------------------------------------

@dataclass(frozen=True)
class PinWord:
    """An origin pair plus a string of pin directions.

    ``origin`` is "12" or "21" (the pattern of the first two points);
    letters run over L, R, U, D with consecutive letters perpendicular.
    """

    origin: str
    letters: str = ""

    def __post_init__(self):
        if self.origin not in ("12", "21"):
            raise ValueError(f"origin must be '12' or '21', got {self.origin!r}")
        for ch in self.letters:
            if ch not in _LETTER_TO_DIRECTION:
                raise ValueError(f"bad pin letter {ch!r}; expected L, R, U or D")
        for a, b in zip(self.letters, self.letters[1:]):
            if (a in _HORIZONTAL) == (b in _HORIZONTAL):
                raise ValueError(
                    f"consecutive pins must be perpendicular: {a!r} then {b!r}"
                )

    def __str__(self) -> str:
        return f"{self.origin}:{self.letters}"


def parse_pin_word(text: str) -> PinWord:
    """Parse "12:URUR" (or bare "12" for the two starting points alone)."""
    s = text.strip()
    origin, _, letters = s.partition(":")
    return PinWord(origin.strip(), letters.strip().upper())


def _realize(word: PinWord) -> list[tuple[Fraction, Fraction]]:
    # Place the pins on a fractional grid: each new pin goes one step
    # beyond the extreme in its direction and at the dyadic midpoint of
    # the channel separating the previous pin from the earlier
    # rectangle.  Every proper pin sequence with this word realises the
    # same pattern, so the construction is canonical as well as valid.
    zero, one = Fraction(0), Fraction(1)
    if word.origin == "12":
        pts = [(zero, zero), (one, one)]
    else:
        pts = [(zero, one), (one, zero)]
    for ch in word.letters:
        prev = pts[-1]
        pmin, pmax, vmin, vmax = _bbox(pts[:-1])
        if ch in _HORIZONTAL:
            pval = prev[1]
            if pval > vmax:
                val = (pval + vmax) / 2
            elif pval < vmin:
                val = (pval + vmin) / 2
            else:
                raise ValueError(f"letter {ch!r} has no separating channel")
            pos = (
                max(p for p, _ in pts) + 1
                if ch == "R"
                else min(p for p, _ in pts) - 1
            )
        else:
            ppos = prev[0]
            if ppos > pmax:
                pos = (ppos + pmax) / 2
            elif ppos < pmin:
                pos = (ppos + pmin) / 2
            else:
                raise ValueError(f"letter {ch!r} has no separating channel")
            val = (
                max(v for _, v in pts) + 1
                if ch == "U"
                else min(v for _, v in pts) - 1
            )
        pts.append((pos, val))
    return pts


def pin_word_to_perm(word: PinWord) -> Permutation:
    """The permutation realised by a pin word.

    >>> pin_word_to_perm(PinWord("12", "UR"))
    Permutation([1, 4, 2, 3])
    """
    pts = _realize(word)
    pts.sort()
    return reduce([v for _, v in pts])


def pin_word_points(word: PinWord) -> tuple[Permutation, tuple[tuple[int, int], ...]]:
    """Realise a word and return (host permutation, pins as host points)."""
    pts = _realize(word)
    pos_rank = {p: r for r, p in enumerate(sorted(p for p, _ in pts), start=1)}
    val_rank = {v: r for r, v in enumerate(sorted(v for _, v in pts), start=1)}
    host = _trusted(
        val_rank[v] for _, v in sorted(pts)
    )
    return host, tuple((pos_rank[p], val_rank[v]) for p, v in pts)


# --- reaching sequences -----------------------------------------------

def _saturated_pins(block_pts: list, p1, p2) -> list:
    # Grow a (not necessarily proper) pin sequence until its rectangle
    # encloses the whole block, taking each pin maximal in its
    # direction, directions preferred in the order R, U, L, D.
    pins = [p1, p2]
    while True:
        rect = _bbox(pins)
        remaining = [q for q in block_pts if not _inside(q, rect)]
        if not remaining:
            return pins
        by_dir: dict = {}
        for q in remaining:
            d = _slice_direction(q, rect)
            if d is None:
                continue
            cur = by_dir.get(d)
            if cur is None or _further(q, cur, d):
                by_dir[d] = q
        for d in (RIGHT, UP, LEFT, DOWN):
            if d in by_dir:
                pins.append(by_dir[d])
                break
        else:
            raise AssertionError(
                "stuck before saturation; the block is not minimal"
            )


def _extract_reaching(pins: list, target_idx: int):
    # Walk backwards from the target pin, repeatedly taking the shortest
    # prefix after which the current pin is still a valid pin; the
    # visited pins, reversed, follow the first two as a candidate proper
    # sequence.  Returns None when the walk gets stuck.
    if target_idx <= 1:
        return [pins[0], pins[1]]
    chain = [target_idx]
    cur = target_idx
    while True:
        found = None
        for t in range(1, cur):
            if _valid_pin(pins[cur], _bbox(pins[: t + 1])):
                found = t
                break
        if found is None:
            return None
        if found == 1:
            break
        chain.append(found)
        cur = found
    return [pins[0], pins[1], *(pins[i] for i in reversed(chain))]


def _proper_candidates(block_pts: list, pins: list) -> list:
    rect = _bbox(pins)
    rect2 = _bbox(pins[:-1])
    prev = pins[-1]
    by_dir: dict = {}
    for q in block_pts:
        if _inside(q, rect):
            continue
        d = _slice_direction(q, rect)
        if d is None or not _separates(q, prev, rect2):
            continue
        cur = by_dir.get(d)
        if cur is None or _further(q, cur, d):
            by_dir[d] = q
    return [by_dir[d] for d in (RIGHT, UP, LEFT, DOWN) if d in by_dir]


def _dfs_reaching(block_pts: list, p1, p2, target):
    stack = [[p1, p2]]
    while stack:
        pins = stack.pop()
        if pins[-1] == target:
            return pins
        for cand in reversed(_proper_candidates(block_pts, pins)):
            stack.append(pins + [cand])
    return None


def _reaching(pi: Permutation, i: int, j: int, side: str) -> PinSequence:
    mb = minimal_block(pi, i, j)
    s, e = mb.pos_range
    block_pts = [(p, pi[p - 1]) for p in range(s, e + 1)]
    p1 = (i, pi[i - 1])
    p2 = (j, pi[j - 1])
    target = (e, pi[e - 1]) if side == "right" else (s, pi[s - 1])
    if target in (p1, p2):
        return classify_pins(pi, (p1, p2))

    saturated = _saturated_pins(block_pts, p1, p2)
    if target in saturated:
        candidate = _extract_reaching(saturated, saturated.index(target))
        if candidate is not None:
            try:
                seq = classify_pins(pi, candidate)
            except PinConditionError:
                seq = None
            if (
                seq is not None
                and all(seq.proper_flags[2:])
                and seq.pins[-1] == target
            ):
                return seq

    # The backward extraction occasionally produces a sequence that
    # fails properness wholesale; the guarantee is only existence, so
    # fall back to an exhaustive search over proper pins.
    found = _dfs_reaching(block_pts, p1, p2, target)
    if found is None:
        raise RuntimeError(
            f"no proper {side}-reaching pin sequence from ({i}, {j}); "
            "this should be impossible"
        )
    return classify_pins(pi, found)


def right_reaching(pi: Sequence[int], i: int, j: int) -> PinSequence:
    """A proper pin sequence from positions (i, j) ending at the
    rightmost point of their minimal block."""
    pi = pi if isinstance(pi, Permutation) else Permutation(pi)
    if not 1 <= i < j <= len(pi):
        raise ValueError(f"need 1 <= i < j <= {len(pi)}, got i={i}, j={j}")
    return _reaching(pi, i, j, "right")


def left_reaching(pi: Sequence[int], i: int, j: int) -> PinSequence:
    """Mirror of :func:`right_reaching`: ends at the leftmost point."""
    pi = pi if isinstance(pi, Permutation) else Permutation(pi)
    if not 1 <= i < j <= len(pi):
        raise ValueError(f"need 1 <= i < j <= {len(pi)}, got i={i}, j={j}")
    return _reaching(pi, i, j, "left")


# --- the bounded pin probe --------------------------------------------

@dataclass(frozen=True)
class PinProbeResult:
    """Outcome of the bounded probe.

    ``threshold`` is the smallest number of letters at which every
    realised permutation leaves the class (None when the cap was hit);
    ``witnesses`` are the cap-length words still alive on exceeding.
    """

    threshold: int | None
    exceeded: bool
    witnesses: tuple[PinWord, ...]


def _next_letters(letters: str) -> str:
    if not letters:
        return "LRUD"
    return "UD" if letters[-1] in _HORIZONTAL else "LR"


def _expand_alive(word: PinWord, inner: PermClass) -> list[PinWord]:
    out = []
    for ch in _next_letters(word.letters):
        child = PinWord(word.origin, word.letters + ch)
        if member(pin_word_to_perm(child), inner):
            out.append(child)
    return out


def _probe_task(args):
    word, inner = args
    return _expand_alive(word, inner)


def pin_probe(inner: PermClass, cap: int, *, jobs: int = 1) -> PinProbeResult:
    """Search for the point where every proper pin sequence leaves ``inner``.

    Level k holds the permutations realised by proper pin sequences of
    k + 2 points, probed from both origins.  A branch dies as soon as
    its realised permutation leaves the class (the class is closed
    downward, so dead branches stay dead).  Returns the first empty
    level, or the surviving cap-level words when the cap is reached.

    >>> from .avoidance import av
    >>> pin_probe(av(21), 10).threshold
    1
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    frontier = [
        w
        for w in (PinWord("12"), PinWord("21"))
        if member(pin_word_to_perm(w), inner)
    ]
    if not frontier:
        return PinProbeResult(0, False, ())
    for level in range(1, cap + 1):
        if jobs > 1 and len(frontier) > 1:
            with multiprocessing.Pool(jobs) as pool:
                chunks = pool.map(_probe_task, [(w, inner) for w in frontier])
            nxt = [w for chunk in chunks for w in chunk]
        else:
            nxt = [w for word in frontier for w in _expand_alive(word, inner)]
        if not nxt:
            return PinProbeResult(level, False, ())
        frontier = nxt
    return PinProbeResult(None, True, tuple(frontier))

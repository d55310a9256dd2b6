"""Braid words, their closures, and the Markov moves.

Conventions
-----------
A braid word on ``m`` strands is a sequence of letters ``(k, sign)`` with
``1 <= k <= m-1``.  The letter ``(k, +1)`` is the generator ``s_k``, a
positive half-twist of strands ``k`` and ``k+1``; ``(k, -1)`` is its
inverse.  As a plane diagram with all strands oriented downward, ``s_k``
carries a *negative* crossing, so the writhe of a word is minus the sum
of its letter signs (the closure of ``s_1^3`` in Br_2 has writhe -3 and
is the left-handed trefoil).

Words are stored un-reduced; :func:`free_reduce` is an explicit
normalization pass so that Markov-move test sequences have reproducible
intermediate states.

Text format: ``"m: k1 k2 ..."`` where integer ``k`` means ``s_k`` and
``-k`` means ``s_k^{-1}``; the strand-count header is optional, in which
case ``m = 1 + max|k|``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class BraidParseError(ValueError):
    """Raised for malformed braid text; the message names the bad token."""


class MarkovMoveError(ValueError):
    """Raised when a Markov move's precondition fails."""


@dataclass(frozen=True)
class BraidWord:
    """A word in the braid group Br_m.

    ``letters`` is a tuple of ``(index, sign)`` pairs with
    ``1 <= index <= strands - 1`` and ``sign in {+1, -1}``.
    """

    strands: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError("strand count must be >= 1")
        letters = tuple((int(k), int(s)) for k, s in self.letters)
        object.__setattr__(self, "letters", letters)
        for k, s in letters:
            if s not in (1, -1):
                raise ValueError(f"letter sign must be +-1, got {s}")
            if not 1 <= k <= self.strands - 1:
                raise ValueError(
                    f"letter index {k} out of range for {self.strands} strands"
                )

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        body = " ".join(str(k * s) for k, s in self.letters)
        return f"{self.strands}: {body}".rstrip()

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple((k, -s) for k, s in reversed(self.letters)))

    def reversed_word(self) -> "BraidWord":
        """The antiautomorphism inverting the order of the letters.

        The closure of the reversed word is the original link with the
        orientation of every component reversed.
        """
        return BraidWord(self.strands, tuple(reversed(self.letters)))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.strands != other.strands:
            raise ValueError("cannot concatenate words on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)


@dataclass(frozen=True)
class ClosurePermutation:
    """Underlying permutation of a braid, as the map start position -> end
    position, with its cycle count (= components of the closure)."""

    mapping: tuple[int, ...]  # mapping[p-1] = end position of strand starting at p
    components: int


def parse_braid(text: str) -> BraidWord:
    """Parse ``"m: k1 k2 ..."`` (header optional) into a :class:`BraidWord`."""
    text = text.split("#", 1)[0].strip()
    header = None
    body = text
    if ":" in text:
        head, body = text.split(":", 1)
        head = head.strip()
        try:
            header = int(head)
        except ValueError:
            raise BraidParseError(f"bad strand-count header {head!r}") from None
        if header < 1:
            raise BraidParseError(f"strand count must be >= 1, got {header}")
    entries = []
    for tok in body.split():
        try:
            v = int(tok)
        except ValueError:
            raise BraidParseError(f"bad braid letter {tok!r}") from None
        if v == 0:
            raise BraidParseError("braid letter 0 is not a generator")
        entries.append(v)
    strands = header if header is not None else (1 + max((abs(v) for v in entries), default=0))
    for v in entries:
        if abs(v) > strands - 1:
            raise BraidParseError(
                f"letter {v} needs at least {abs(v) + 1} strands, word declares {strands}"
            )
    return BraidWord(strands, tuple((abs(v), 1 if v > 0 else -1) for v in entries))


def writhe(b: BraidWord) -> int:
    """Writhe of the braid-closure diagram: each ``s_k`` is a negative
    crossing, so the writhe is minus the sum of letter signs."""
    return -sum(s for _, s in b.letters)


def closure_permutation(b: BraidWord) -> ClosurePermutation:
    m = b.strands
    pos = list(range(m))  # pos[i] = current position of strand i (0-based)
    cur = list(range(m))  # cur[p] = strand at position p
    for k, _ in b.letters:
        a, bb = cur[k - 1], cur[k]
        cur[k - 1], cur[k] = bb, a
        pos[a], pos[bb] = k, k - 1
    mapping = tuple(pos[i] + 1 for i in range(m))
    seen = [False] * m
    cycles = 0
    for i in range(m):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = mapping[j] - 1
    return ClosurePermutation(mapping, cycles)


def free_reduce(b: BraidWord) -> BraidWord:
    """Cancel adjacent ``s_k s_k^{-1}`` pairs until none remain."""
    out: list[tuple[int, int]] = []
    for letter in b.letters:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return BraidWord(b.strands, tuple(out))


def conjugate(b: BraidWord, k: int, sign: int) -> BraidWord:
    """Markov I: replace ``b`` by ``s_k^{-sign} b s_k^{sign}``."""
    if not 1 <= k <= b.strands - 1:
        raise MarkovMoveError(f"conjugation index {k} out of range")
    if sign not in (1, -1):
        raise MarkovMoveError(f"conjugation sign must be +-1, got {sign}")
    return BraidWord(b.strands, ((k, -sign),) + b.letters + ((k, sign),))


def stabilize(b: BraidWord, sign: int) -> BraidWord:
    """Markov II+-: add a strand and append ``s_m^{+-1}``."""
    if sign not in (1, -1):
        raise MarkovMoveError(f"stabilization sign must be +-1, got {sign}")
    m = b.strands
    return BraidWord(m + 1, b.letters + ((m, sign),))


def destabilize(b: BraidWord) -> BraidWord:
    """Inverse of :func:`stabilize`.

    Requires (after free reduction) the word to end in a single
    ``s_{m-1}^{+-1}`` which is the only occurrence of index ``m-1``.
    """
    r = free_reduce(b)
    m = r.strands
    if m < 2 or not r.letters:
        raise MarkovMoveError("destabilization needs a final top-index letter")
    top = m - 1
    if r.letters[-1][0] != top:
        raise MarkovMoveError(
            f"word does not end in s_{top}^(+-1) after free reduction"
        )
    if any(k == top for k, _ in r.letters[:-1]):
        raise MarkovMoveError(
            f"index {top} occurs more than once; syntactic destabilization refused"
        )
    return BraidWord(m - 1, r.letters[:-1])


def markov_move(b: BraidWord, move: tuple) -> BraidWord:
    """Apply a Markov move given as a tagged tuple.

    ``("conjugate", k, sign)`` | ``("stabilize", sign)`` | ``("destabilize",)``
    """
    tag = move[0]
    if tag == "conjugate":
        return conjugate(b, move[1], move[2])
    if tag == "stabilize":
        return stabilize(b, move[1])
    if tag == "destabilize":
        return destabilize(b)
    raise MarkovMoveError(f"unknown Markov move {move!r}")


def double(b: BraidWord) -> BraidWord:
    """Embed Br_m into Br_2m by adding m trivial strands (b x 1^m)."""
    return BraidWord(2 * b.strands, b.letters)


def random_braid(rng, max_strands: int = 4, max_letters: int = 8) -> BraidWord:
    """Seeded random braid word with 2..max_strands strands."""
    m = rng.randint(2, max_strands)
    n = rng.randint(1, max_letters)
    letters = tuple(
        (rng.randint(1, m - 1), rng.choice((1, -1))) for _ in range(n)
    )
    return BraidWord(m, letters)


def random_markov_sequence(
    b: BraidWord,
    rng,
    moves: int,
    max_crossings: int | None = None,
    max_strands: int = 8,
) -> tuple[BraidWord, list[tuple]]:
    """Apply ``moves`` random Markov moves, returning the word and the trace.

    Moves are sampled among conjugations, stabilizations of both signs and
    (when legal) destabilizations.  When ``max_crossings`` is given, moves
    that would push the word past that many letters are resampled, keeping
    the homology recomputation affordable; the sequence is deterministic
    for a fixed ``rng`` state.
    """
    trace: list[tuple] = []
    cur = b
    for _ in range(moves):
        for _attempt in range(64):
            roll = rng.random()
            if roll < 0.5 and cur.strands >= 2:
                move = ("conjugate", rng.randint(1, cur.strands - 1), rng.choice((1, -1)))
                grown = len(cur) + 2
                grown_strands = cur.strands
            elif roll < 0.8:
                move = ("stabilize", rng.choice((1, -1)))
                grown = len(cur) + 1
                grown_strands = cur.strands + 1
            else:
                move = ("destabilize",)
                try:
                    nxt = destabilize(cur)
                except MarkovMoveError:
                    continue
                trace.append(move)
                cur = nxt
                break
            if max_crossings is not None and grown > max_crossings:
                continue
            if grown_strands > max_strands:
                continue
            trace.append(move)
            cur = markov_move(cur, move)
            break
        else:
            # caps blocked everything samplable; conjugation is always legal,
            # so overshoot and let the caller's cost budget re-roll if needed
            move = ("conjugate", rng.randint(1, max(cur.strands - 1, 1)), rng.choice((1, -1)))
            trace.append(move)
            cur = markov_move(cur, move)
    return cur, trace

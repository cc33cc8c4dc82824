"""Two-letter substitutions and their factor languages.

The package ships three named substitutions on ``{0, 1}``:

* ``TAU``:   0 -> 001, 1 -> 1
* ``ALPHA``: 0 -> 0010011, 1 -> 1   (the square of ``TAU``)
* ``BETA``:  0 -> 1001001, 1 -> 1

``ALPHA`` and ``BETA`` commute and generate the same factor language; the
iterates of ``BETA`` on ``0`` are exactly the level-1 time rows of the base
covering family (loop steps read as ``1``, circuit steps as ``0``), which is
what :func:`substitution_bridge` checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .covering import expansion_cap
from .errors import ExpansionTooLarge, UsageError

_MAX_STABILIZE_ITER = 64


@dataclass(frozen=True)
class Substitution:
    """A letter-to-word morphism; every image must be nonempty."""

    rules: dict

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(sorted(self.rules))

    def problems(self) -> list[str]:
        out = []
        for k, v in self.rules.items():
            if not isinstance(k, str) or len(k) != 1:
                out.append(f"letters must be single characters, got {k!r}")
            if not isinstance(v, str) or not v:
                out.append(f"image of {k!r} must be a nonempty word, got {v!r}")
            elif any(ch not in self.rules for ch in v):
                out.append(f"image of {k!r} uses letters outside the alphabet: {v!r}")
        return out


TAU = Substitution({"0": "001", "1": "1"})
ALPHA = Substitution({"0": "0010011", "1": "1"})
BETA = Substitution({"0": "1001001", "1": "1"})


def apply_word(sub: Substitution, word: str) -> str:
    try:
        return "".join(sub.rules[ch] for ch in word)
    except KeyError as exc:
        raise UsageError(f"letter {exc.args[0]!r} outside the alphabet {sub.alphabet}") from exc


def compose(outer: Substitution, inner: Substitution) -> Substitution:
    """The substitution ``x -> outer(inner(x))``."""
    if set(outer.rules) != set(inner.rules):
        raise UsageError("can only compose substitutions on the same alphabet")
    return Substitution({x: apply_word(outer, w) for x, w in inner.rules.items()})


def iterate(sub: Substitution, letter: str, k: int, cap: int | None = None) -> str:
    """The word ``sub^k(letter)`` (``k >= 0``), capped in length."""
    if k < 0:
        raise UsageError(f"k must be >= 0, got {k}")
    limit = expansion_cap(cap)
    word = letter
    if any(ch not in sub.rules for ch in word):
        raise UsageError(f"seed {letter!r} outside the alphabet {sub.alphabet}")
    for _ in range(k):
        grown = sum(len(sub.rules[ch]) for ch in word)
        if grown > limit:
            raise ExpansionTooLarge(grown, limit, what="substitution iterate")
        word = apply_word(sub, word)
    return word


def _factors(word: str, length: int) -> set[str]:
    if len(word) < length:
        return set()
    return {word[i: i + length] for i in range(len(word) - length + 1)}


@dataclass(frozen=True)
class FactorLanguage:
    factors: frozenset
    length: int
    stabilized: bool
    stabilized_at: int | None
    iterations: int

    def sorted_words(self) -> list[str]:
        return sorted(self.factors)


def factor_language(
    sub: Substitution, seed: str, length: int, cap: int | None = None
) -> FactorLanguage:
    """Stabilized union of the length-``length`` factors of ``sub^k(seed)``.

    Iterates until two consecutive cumulative unions agree; the certificate
    ``stabilized_at`` is the first ``k`` whose union was already complete.
    Hitting the cap first returns the partial set flagged unstabilized.
    """
    if length < 1:
        raise UsageError(f"factor length must be >= 1, got {length}")
    if length > 65536:
        raise UsageError(f"factor length {length} is too large for the window engine")
    limit = expansion_cap(cap)
    erasing = any(not image for image in sub.rules.values())
    grow_target = max(4 * length, 256)
    word = seed
    seen: set[str] = set()
    prev_size: int | None = None
    agree = 0
    k = 0
    while True:
        seen |= _factors(word, length)
        # Agreement only counts once the iterate is long enough to contribute
        # (image lengths are monotone, so "long enough" persists).
        if len(word) >= length:
            if prev_size is not None and len(seen) == prev_size:
                agree += 1
                if agree >= 2:
                    return FactorLanguage(
                        factors=frozenset(seen),
                        length=length,
                        stabilized=True,
                        stabilized_at=k - 2,
                        iterations=k,
                    )
            else:
                agree = 0
            prev_size = len(seen)
        if not erasing and len(word) >= grow_target:
            break
        grown_len = sum(len(sub.rules[ch]) for ch in word)
        if grown_len > min(limit, 1 << 22):
            return FactorLanguage(
                factors=frozenset(seen),
                length=length,
                stabilized=False,
                stabilized_at=None,
                iterations=k,
            )
        grown = apply_word(sub, word)
        if grown == word:
            # Fixed word: the union is final even below the factor length.
            return FactorLanguage(
                factors=frozenset(seen),
                length=length,
                stabilized=True,
                stabilized_at=k,
                iterations=k,
            )
        word = grown
        k += 1
        if k >= _MAX_STABILIZE_ITER:
            return FactorLanguage(
                factors=frozenset(seen),
                length=length,
                stabilized=False,
                stabilized_at=None,
                iterations=k,
            )
    # The iterate is long, so switch to tracking fixed-width windows instead
    # of whole words.  A width-w window of the image lies inside the image of
    # a width-(w+2) window of the source (images are nonempty, so a window
    # spans at most w+2 letters), which makes the window sets of successive
    # iterates computable from each other with the width shrinking by 2 per
    # step.  Start wide enough to fund the remaining budget.
    budget = max(12, length + 4)
    width = length + 2 * budget
    windows = _factors(word, width)
    for _ in range(budget):
        width -= 2
        grown_windows: set[str] = set()
        for piece in windows:
            grown_windows |= _factors(apply_word(sub, piece), width)
        windows = grown_windows
        k += 1
        for piece in windows:
            seen |= _factors(piece, length)
        if prev_size is not None and len(seen) == prev_size:
            agree += 1
            if agree >= 2:
                return FactorLanguage(
                    factors=frozenset(seen),
                    length=length,
                    stabilized=True,
                    stabilized_at=k - 2,
                    iterations=k,
                )
        else:
            agree = 0
        prev_size = len(seen)
    return FactorLanguage(
        factors=frozenset(seen),
        length=length,
        stabilized=False,
        stabilized_at=None,
        iterations=k,
    )


@dataclass(frozen=True)
class LanguageComparison:
    equal: bool
    length: int
    left_stabilized_at: int | None
    right_stabilized_at: int | None
    only_left: tuple[str, ...]
    only_right: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "equal": self.equal,
            "length": self.length,
            "left_stabilized_at": self.left_stabilized_at,
            "right_stabilized_at": self.right_stabilized_at,
            "only_left": list(self.only_left),
            "only_right": list(self.only_right),
        }


def languages_equal(
    left: Substitution,
    left_seed: str,
    right: Substitution,
    right_seed: str,
    length: int,
    cap: int | None = None,
) -> LanguageComparison:
    """Compare stabilized factor sets of two seeded substitutions."""
    a = factor_language(left, left_seed, length, cap=cap)
    b = factor_language(right, right_seed, length, cap=cap)
    only_a = tuple(sorted(a.factors - b.factors)[:8])
    only_b = tuple(sorted(b.factors - a.factors)[:8])
    return LanguageComparison(
        equal=a.stabilized and b.stabilized and a.factors == b.factors,
        length=length,
        left_stabilized_at=a.stabilized_at,
        right_stabilized_at=b.stabilized_at,
        only_left=only_a,
        only_right=only_b,
    )


def commute_check(left: Substitution, right: Substitution) -> bool:
    """Whether ``left . right == right . left`` letterwise."""
    return compose(left, right).rules == compose(right, left).rules


def conjugation_identity(k: int, ell: int, cap: int | None = None) -> bool:
    """Check ``ALPHA^k(1^ell 0) == BETA^k(1^(ell-k) 0 1^k)`` (needs ``ell > k >= 1``)."""
    if not 1 <= k < ell:
        raise UsageError(f"need ell > k >= 1, got k={k}, ell={ell}")
    left_seed = "1" * ell + "0"
    right_seed = "1" * (ell - k) + "0" + "1" * k
    left = left_seed
    right = right_seed
    for _ in range(k):
        left = apply_word(ALPHA, left)
        right = apply_word(BETA, right)
        limit = expansion_cap(cap)
        if len(left) > limit or len(right) > limit:
            raise ExpansionTooLarge(max(len(left), len(right)), limit, what="conjugation check")
    return left == right


@dataclass(frozen=True)
class BridgeReport:
    equal: bool
    length: int
    covering_level_used: int | None
    substitution_stabilized_at: int | None
    covering_size: int
    substitution_size: int
    only_covering: tuple[str, ...]
    only_substitution: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "equal": self.equal,
            "length": self.length,
            "covering_level_used": self.covering_level_used,
            "substitution_stabilized_at": self.substitution_stabilized_at,
            "covering_size": self.covering_size,
            "substitution_size": self.substitution_size,
            "only_covering": list(self.only_covering),
            "only_substitution": list(self.only_substitution),
        }


def substitution_bridge(length: int, cap: int | None = None) -> BridgeReport:
    """Compare the base family's level-1 row language with ``BETA``'s language.

    The covering's level-1 time rows, read with loop steps as ``1`` and
    circuit steps as ``0``, should produce exactly the stabilized factor set
    of ``BETA`` seeded at ``0`` (one circuit traversal contributes ``00``).
    """
    from .dynamics import language as covering_language
    from .families import gen_substitution_family

    spec = gen_substitution_family(depth=12)
    cov = covering_language(spec, 1, length, cap=cap)
    cov_words = {w.replace("E", "1").replace("C", "0") for w in cov.words}
    sub = factor_language(BETA, "0", length, cap=cap)
    only_cov = tuple(sorted(cov_words - sub.factors)[:8])
    only_sub = tuple(sorted(sub.factors - cov_words)[:8])
    return BridgeReport(
        equal=cov.stabilized and sub.stabilized and cov_words == sub.factors,
        length=length,
        covering_level_used=cov.stabilized_at,
        substitution_stabilized_at=sub.stabilized_at,
        covering_size=len(cov_words),
        substitution_size=len(sub.factors),
        only_covering=only_cov,
        only_substitution=only_sub,
    )

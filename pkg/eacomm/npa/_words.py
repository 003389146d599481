from __future__ import annotations

from itertools import groupby

from eacomm._errors import EnumerationLimitError
from eacomm.npa._scenario import ALICE
from eacomm.npa._scenario import BellScenario
from eacomm.npa._scenario import BOB
from eacomm.npa._scenario import Letter
from eacomm.npa._scenario import Word


INDEX_LIMIT = 2000
LEVELS = (1, "1+AB", 2, 3)


class WordAlgebra:
    """Normal forms of projector words in a :class:`BellScenario`.

    A word is reduced by moving Alice's letters in front of Bob's, sorting every maximal run of
    mutually commuting letters, dropping repeated letters and mapping products of different
    outcomes of one setting to zero (``None``). Results are memoized.
    """

    def __init__(self, scenario: BellScenario) -> None:
        self.scenario = scenario
        self._memo: dict[Word, Word | None] = {}

    def _reduce_party(self, letters: list[Letter]) -> list[Letter] | None:
        reduced: list[Letter] = []
        for _, run in groupby(letters, key=self.scenario.group):
            by_setting: dict[int, Letter] = {}
            for letter in run:
                previous = by_setting.setdefault(letter[1], letter)
                if previous != letter:
                    return None
            reduced.extend(sorted(by_setting.values()))
        return reduced

    def canonical(self, word: Word) -> Word | None:
        if word in self._memo:
            return self._memo[word]
        alice = self._reduce_party([letter for letter in word if letter[0] == ALICE])
        bob = self._reduce_party([letter for letter in word if letter[0] == BOB])
        result = None if alice is None or bob is None else tuple(alice + bob)
        self._memo[word] = result
        return result

    def class_key(self, word: Word) -> Word | None:
        """Shared key of a word and its adjoint; ``None`` for zero."""
        forward = self.canonical(word)
        if forward is None:
            return None
        backward = self.canonical(tuple(reversed(forward)))
        assert backward is not None, f"Adjoint of {forward} reduced to zero."
        return min(forward, backward)

    def product(self, left: Word, right: Word) -> Word | None:
        """Normal form of left† · right."""
        return self.canonical(tuple(reversed(left)) + right)

    def index(self, level: int | str) -> list[Word]:
        """Monomials labelling the rows of the moment matrix at ``level``.

        Raises:
            ValueError: ``level`` is neither a positive integer nor ``"1+AB"``.
            EnumerationLimitError: More than ``INDEX_LIMIT`` monomials.
        """
        letters = self.scenario.letters()
        words: list[Word] = [()] + [(letter,) for letter in letters]
        if level == "1+AB":
            for a in self.scenario.letters(ALICE):
                for b in self.scenario.letters(BOB):
                    word = self.canonical((a, b))
                    assert word is not None
                    words.append(word)
        elif isinstance(level, int) and not isinstance(level, bool) and level >= 1:
            seen = set(words)
            frontier = words[1:]
            for length in range(2, level + 1):
                extended: list[Word] = []
                for word in frontier:
                    for letter in letters:
                        candidate = self.canonical(word + (letter,))
                        if candidate is None or len(candidate) != length or candidate in seen:
                            continue
                        seen.add(candidate)
                        extended.append(candidate)
                        if len(seen) > INDEX_LIMIT:
                            raise EnumerationLimitError(
                                f"Level {level} needs more than {INDEX_LIMIT} monomials."
                            )
                words.extend(extended)
                frontier = extended
        else:
            raise ValueError(f"level must be a positive integer or '1+AB', got {level!r}.")
        if len(words) > INDEX_LIMIT:
            raise EnumerationLimitError(f"Level {level} needs {len(words)} monomials.")
        return words

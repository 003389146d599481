from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field

from eacomm.tasks import LinearFunctional


ALICE = 0
BOB = 1

# (party, setting, outcome); the last outcome of every setting is never a letter.
Letter = tuple[int, int, int]
Word = tuple[Letter, ...]

EA_SCENARIOS = {"ea-bit": 2, "ea-trit": 3}


@dataclass(frozen=True)
class BellScenario:
    """Two parties measuring projectors, Alice's commuting with Bob's.

    Args:
        alice_outcomes:
            Outcome count of each of Alice's settings.
        bob_outcomes:
            Outcome count of each of Bob's settings.
        bob_groups:
            Partition of Bob's settings into sets whose projectors commute with each other.
            Defaults to one group per setting.
    """

    alice_outcomes: tuple[int, ...]
    bob_outcomes: tuple[int, ...]
    bob_groups: tuple[tuple[int, ...], ...] | None = None
    _group_of: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        alice = tuple(int(c) for c in self.alice_outcomes)
        bob = tuple(int(c) for c in self.bob_outcomes)
        if any(c < 1 for c in alice + bob):
            raise ValueError("Every setting needs at least one outcome.")
        groups = self.bob_groups
        if groups is None:
            groups = tuple((s,) for s in range(len(bob)))
        groups = tuple(tuple(int(s) for s in group) for group in groups)
        if sorted(s for group in groups for s in group) != list(range(len(bob))):
            raise ValueError(f"bob_groups {groups} is not a partition of Bob's settings.")
        object.__setattr__(self, "alice_outcomes", alice)
        object.__setattr__(self, "bob_outcomes", bob)
        object.__setattr__(self, "bob_groups", groups)
        object.__setattr__(
            self, "_group_of", {s: g for g, group in enumerate(groups) for s in group}
        )

    def outcomes(self, party: int) -> tuple[int, ...]:
        return self.alice_outcomes if party == ALICE else self.bob_outcomes

    def group(self, letter: Letter) -> int:
        party, setting, _ = letter
        return setting if party == ALICE else self._group_of[setting]

    def is_eliminated(self, letter: Letter) -> bool:
        party, setting, outcome = letter
        return outcome == self.outcomes(party)[setting] - 1

    def letters(self, party: int | None = None) -> list[Letter]:
        """Non-eliminated letters, Alice's before Bob's, by setting then outcome."""
        parties = (ALICE, BOB) if party is None else (party,)
        return [
            (p, s, a)
            for p in parties
            for s, count in enumerate(self.outcomes(p))
            for a in range(count - 1)
        ]


@dataclass(frozen=True)
class EAScenario:
    """Entanglement-assisted classical communication as a Bell scenario.

    Alice measures ``A_{m|x}`` and sends m; Bob measures ``B_{b|y,m}``. Bob's setting (y, m)
    is numbered ``y * message_size + m``.
    """

    num_inputs: int
    outcome_counts: tuple[int, ...]
    message_size: int

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.outcome_counts)
        if self.num_inputs < 1 or not counts or self.message_size < 1:
            raise ValueError("An EA scenario needs inputs, settings and a message alphabet.")
        object.__setattr__(self, "outcome_counts", counts)

    @classmethod
    def for_functional(cls, f: LinearFunctional, message_size: int) -> EAScenario:
        return cls(f.dims[0], f.outcome_counts, message_size)

    @property
    def num_settings(self) -> int:
        return len(self.outcome_counts)

    def bob_setting(self, y: int, m: int) -> int:
        return y * self.message_size + m

    def bell(self, nonadaptive: bool = False) -> BellScenario:
        """The letter algebra; ``nonadaptive`` makes all (y, ·) projectors commute."""
        d = self.message_size
        groups = None
        if nonadaptive:
            groups = tuple(
                tuple(self.bob_setting(y, m) for m in range(d)) for y in range(self.num_settings)
            )
        return BellScenario(
            (d,) * self.num_inputs,
            tuple(count for count in self.outcome_counts for _ in range(d)),
            groups,
        )

    def relabel(self, sigma: tuple[int, ...], letter: Letter) -> Letter:
        """Image of a letter under the message permutation ``sigma``."""
        party, setting, outcome = letter
        if party == ALICE:
            return (party, setting, sigma[outcome])
        y, m = divmod(setting, self.message_size)
        return (party, self.bob_setting(y, sigma[m]), outcome)

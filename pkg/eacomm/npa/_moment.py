from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
from itertools import permutations

import numpy as np
import optuna
from scipy import sparse
from scipy.sparse import csgraph

from eacomm.npa._scenario import BellScenario
from eacomm.npa._scenario import EAScenario
from eacomm.npa._scenario import Word
from eacomm.npa._words import WordAlgebra


_logger = optuna.logging.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class MomentMatrix:
    """Symbolic moment matrix of a level of the NPA hierarchy.

    Entry (i, j) stands for the moment of ``index[i]† index[j]``. Words equal up to the
    reduction rules or adjunction share a class; ``classes[c]`` is the representative of
    class c and class 0 is the identity. ``entry_class`` is -1 where the word is zero.

    ``variables[c]`` is the SDP variable carrying class c, -1 for the identity, which is
    pinned to 1. Without symmetrization every other class is its own variable.
    """

    scenario: BellScenario | EAScenario
    level: int | str
    nonadaptive: bool
    symmetrize: bool
    index: list[Word]
    classes: list[Word]
    entry_class: np.ndarray
    variables: np.ndarray
    algebra: WordAlgebra = field(repr=False)
    _lookup: dict[Word, int] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.index)

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    @property
    def num_variables(self) -> int:
        return int(self.variables.max()) + 1

    def class_of(self, word: Word) -> int | None:
        """Class of the moment of ``word``; ``None`` when it does not occur in the matrix."""
        key = self.algebra.class_key(word)
        if key is None:
            return None
        return self._lookup.get(key)


def _orbit_variables(
    ea: EAScenario, algebra: WordAlgebra, classes: list[Word], lookup: dict[Word, int]
) -> np.ndarray:
    """Variable per class after merging classes related by a message relabeling.

    A relabeling that sends one of Alice's letters to her eliminated last outcome has no
    single-class image and is not followed, so an orbit may split into several variables.
    The bound is the same either way; only fewer variables are saved.
    """
    rows = []
    cols = []
    sigmas = list(permutations(range(ea.message_size)))[1:]
    for c, word in enumerate(classes[1:], start=1):
        for sigma in sigmas:
            image = tuple(ea.relabel(sigma, letter) for letter in word)
            if any(algebra.scenario.is_eliminated(letter) for letter in image):
                continue
            key = algebra.class_key(image)
            target = lookup.get(key) if key is not None else None
            if target is not None and target != c:
                rows.append(c)
                cols.append(target)
    graph = sparse.coo_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(len(classes), len(classes))
    )
    _, labels = csgraph.connected_components(graph, directed=False)
    # Number orbits by their first class so that variables follow class order.
    renumber: dict[int, int] = {}
    variables = np.empty(len(classes), dtype=int)
    variables[0] = -1
    for c in range(1, len(classes)):
        variables[c] = renumber.setdefault(int(labels[c]), len(renumber))
    return variables


def build_moment_matrix(
    scenario: BellScenario | EAScenario,
    level: int | str = 2,
    nonadaptive: bool = False,
    symmetrize: bool = False,
) -> MomentMatrix:
    """Moment matrix of ``scenario`` at ``level`` (a positive integer or ``"1+AB"``).

    ``nonadaptive`` adds the commutation of Bob's projectors that share y; ``symmetrize``
    merges classes related by a relabeling of the messages. Both apply to EA scenarios only.

    Raises:
        ValueError: Invalid level, or a flag that needs an EA scenario.
        EnumerationLimitError: The index set exceeds its guard.
    """
    if isinstance(scenario, EAScenario):
        ea: EAScenario | None = scenario
        bell = scenario.bell(nonadaptive)
    else:
        if nonadaptive or symmetrize:
            raise ValueError("nonadaptive and symmetrize need an EAScenario.")
        ea = None
        bell = scenario
    algebra = WordAlgebra(bell)
    index = algebra.index(level)
    n = len(index)

    classes: list[Word] = [()]
    lookup: dict[Word, int] = {(): 0}
    entry_class = np.full((n, n), -1, dtype=int)
    for i in range(n):
        for j in range(i, n):
            key = algebra.class_key(tuple(reversed(index[i])) + index[j])
            if key is None:
                continue
            c = lookup.setdefault(key, len(classes))
            if c == len(classes):
                classes.append(key)
            entry_class[i, j] = entry_class[j, i] = c

    if symmetrize and ea is not None:
        variables = _orbit_variables(ea, algebra, classes, lookup)
    else:
        variables = np.arange(-1, len(classes) - 1)
    _logger.info(
        f"Moment matrix at level {level}: {n} monomials, {len(classes)} classes, "
        f"{int(variables.max()) + 1} variables."
    )
    return MomentMatrix(
        scenario=scenario,
        level=level,
        nonadaptive=nonadaptive,
        symmetrize=symmetrize,
        index=index,
        classes=classes,
        entry_class=entry_class,
        variables=variables,
        algebra=algebra,
        _lookup=lookup,
    )

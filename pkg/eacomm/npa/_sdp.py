from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
import itertools
from pathlib import Path
import re

import numpy as np
from scipy import sparse

from eacomm._errors import SchemaError
from eacomm.npa._moment import MomentMatrix
from eacomm.npa._scenario import ALICE
from eacomm.npa._scenario import BellScenario
from eacomm.npa._scenario import BOB
from eacomm.npa._scenario import EAScenario
from eacomm.npa._scenario import Word
from eacomm.tasks import LinearFunctional


Polynomial = dict[Word, float]

_OFFSET = re.compile(r"objective_offset\s*=\s*(\S+)")


@dataclass(frozen=True, eq=False)
class SdpProblem:
    """maximize ``offset + objective·y`` subject to ``constant + Σ_k y_k A_k ⪰ 0``.

    Args:
        objective:
            Vector b of length m.
        constant:
            Symmetric n×n matrix; the pinned identity moment lives here.
        coefficients:
            Sparse m×n² matrix whose row k is the row-major vectorization of A_k.
        offset:
            Constant added to the objective.
    """

    objective: np.ndarray
    constant: np.ndarray
    coefficients: sparse.csr_matrix = field(repr=False)
    offset: float = 0.0

    def __post_init__(self) -> None:
        m = self.objective.shape[0]
        n = self.constant.shape[0]
        if self.constant.shape != (n, n) or self.coefficients.shape != (m, n * n):
            raise ValueError(
                f"Inconsistent SDP data: b {self.objective.shape}, C {self.constant.shape}, "
                f"A {self.coefficients.shape}."
            )

    @property
    def size(self) -> int:
        return int(self.constant.shape[0])

    @property
    def num_variables(self) -> int:
        return int(self.objective.shape[0])

    def matrix(self, y: np.ndarray) -> np.ndarray:
        """``constant + Σ_k y_k A_k``."""
        return self.constant + (self.coefficients.T @ y).reshape(self.size, self.size)


@dataclass(frozen=True)
class BellFunctional:
    """Σ terms[w] ⟨w⟩ + offset for words of a plain Bell scenario."""

    scenario: BellScenario
    terms: Polynomial
    offset: float = 0.0


def chsh_functional() -> BellFunctional:
    """Σ_xy (−1)^(xy) ⟨A_x B_y⟩ with ±1 observables built from two-outcome projectors."""
    terms: Polynomial = {}
    for x, y, a, b in itertools.product(range(2), repeat=4):
        word = ((ALICE, x, a), (BOB, y, b))
        terms[word] = (-1.0) ** (x * y + a + b)
    return BellFunctional(BellScenario((2, 2), (2, 2)), terms)


def functional_polynomial(f: LinearFunctional, scenario: EAScenario) -> Polynomial:
    """p(b|x,y) = Σ_m ⟨A_{m|x} B_{b|y,m}⟩ for every nonzero coefficient of ``f``.

    Words may contain eliminated outcomes; they are expanded when the objective is built.
    """
    poly: Polynomial = {}
    for x, y, b in zip(*np.nonzero(f.coeffs)):
        for m in range(scenario.message_size):
            word = ((ALICE, int(x), m), (BOB, scenario.bob_setting(int(y), m), int(b)))
            poly[word] = poly.get(word, 0.0) + float(f.coeffs[x, y, b])
    return poly


def _expand(poly: Polynomial, scenario: BellScenario) -> Polynomial:
    expanded: Polynomial = {}
    for word, coeff in poly.items():
        options = []
        for letter in word:
            if scenario.is_eliminated(letter):
                party, setting, outcome = letter
                others = [(-1.0, ((party, setting, a),)) for a in range(outcome)]
                options.append([(1.0, ())] + others)
            else:
                options.append([(1.0, (letter,))])
        for choice in itertools.product(*options):
            term = tuple(letter for _, part in choice for letter in part)
            weight = coeff * float(np.prod([sign for sign, _ in choice]))
            expanded[term] = expanded.get(term, 0.0) + weight
    return expanded


def objective_from_functional(
    f: LinearFunctional | BellFunctional, moments: MomentMatrix
) -> SdpProblem:
    """The SDP whose optimum bounds ``f`` over the scenario of ``moments``.

    Raises:
        ValueError: ``f`` does not live in the scenario of ``moments``, or it needs a moment
            that the matrix does not contain.
    """
    bell = moments.algebra.scenario
    if isinstance(f, BellFunctional):
        if f.scenario != bell:
            raise ValueError("The Bell functional does not match the moment matrix scenario.")
        poly = f.terms
    else:
        ea = moments.scenario
        if not isinstance(ea, EAScenario) or ea != EAScenario.for_functional(
            f, ea.message_size
        ):
            raise ValueError(
                f"Functional with dims {f.dims} and outcome counts {f.outcome_counts} does not "
                f"match the moment matrix scenario {moments.scenario}."
            )
        poly = functional_polynomial(f, ea)

    m = moments.num_variables
    objective = np.zeros(m)
    offset = f.offset
    for word, coeff in _expand(poly, bell).items():
        if coeff == 0.0 or moments.algebra.canonical(word) is None:
            continue
        c = moments.class_of(word)
        if c is None:
            raise ValueError(f"The moment of {word} is not in the level {moments.level} matrix.")
        variable = int(moments.variables[c])
        if variable < 0:
            offset += coeff
        else:
            objective[variable] += coeff

    n = moments.size
    flat = moments.entry_class.ravel()
    mask = flat >= 1
    cols = np.flatnonzero(mask)
    rows = moments.variables[flat[mask]]
    coefficients = sparse.csr_matrix((np.ones(cols.size), (rows, cols)), shape=(m, n * n))
    constant = (moments.entry_class == 0).astype(float)
    return SdpProblem(objective, constant, coefficients, float(offset))


def _number(value: float) -> str:
    return format(float(value) + 0.0, ".17g")


def export_sdpa(problem: SdpProblem, path: str | Path) -> None:
    """Write ``problem`` in the SDPA sparse format.

    SDPA minimizes ``c·x`` subject to ``Σ F_k x_k − F_0 ⪰ 0``, so ``c = −b``, ``F_k = A_k`` and
    ``F_0 = −constant``. The offset is kept in a leading comment line.
    """
    n = problem.size
    lines = [
        f"* objective_offset = {_number(problem.offset)}",
        str(problem.num_variables),
        "1",
        str(n),
        " ".join(_number(-value) for value in problem.objective),
    ]
    rows, cols = np.nonzero(np.triu(problem.constant))
    for i, j in zip(rows, cols):
        lines.append(f"0 1 {i + 1} {j + 1} {_number(-problem.constant[i, j])}")
    matrix = problem.coefficients.tocsr()
    matrix.sort_indices()
    for k in range(problem.num_variables):
        start, stop = matrix.indptr[k], matrix.indptr[k + 1]
        for col, value in zip(matrix.indices[start:stop], matrix.data[start:stop]):
            i, j = divmod(int(col), n)
            if i <= j:
                lines.append(f"{k + 1} 1 {i + 1} {j + 1} {_number(value)}")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def read_sdpa(path: str | Path) -> SdpProblem:
    """Read a single-block SDPA sparse file, e.g. one written by :func:`export_sdpa`.

    Raises:
        SchemaError: The file is not a single-block SDPA sparse problem.
    """
    offset = 0.0
    tokens: list[str] = []
    with open(path) as f:
        for raw in f:
            line = raw.strip()
            if line.startswith(("*", '"')):
                match = _OFFSET.search(line)
                if match is not None:
                    offset = float(match.group(1))
                continue
            tokens.extend(re.sub(r"[{}(),]", " ", line).split())
    try:
        m = int(tokens[0])
        if int(tokens[1]) != 1:
            raise SchemaError(f"Only single-block problems are supported, got {tokens[1]}.")
        n = abs(int(tokens[2]))
        c = np.array([float(t) for t in tokens[3 : 3 + m]])
        entries = tokens[3 + m :]
        if c.size != m or len(entries) % 5 != 0:
            raise SchemaError("Truncated SDPA data.")
        constant = np.zeros((n, n))
        rows: list[int] = []
        cols: list[int] = []
        values: list[float] = []
        for start in range(0, len(entries), 5):
            k, block, i, j = (int(t) for t in entries[start : start + 4])
            value = float(entries[start + 4])
            if block != 1:
                raise SchemaError(f"Entry refers to block {block}.")
            i, j = i - 1, j - 1
            pairs = {(i, j), (j, i)}
            if k == 0:
                for p, q in pairs:
                    constant[p, q] = -value
            else:
                for p, q in pairs:
                    rows.append(k - 1)
                    cols.append(p * n + q)
                    values.append(value)
    except SchemaError:
        raise
    except (IndexError, ValueError) as e:
        raise SchemaError(f"Malformed SDPA file {path}: {e}") from e
    coefficients = sparse.csr_matrix((values, (rows, cols)), shape=(m, n * n))
    return SdpProblem(0.0 - c, constant, coefficients, offset)

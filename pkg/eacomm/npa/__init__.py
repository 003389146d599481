from ._bound import upper_bound
from ._moment import build_moment_matrix
from ._moment import MomentMatrix
from ._scenario import ALICE
from ._scenario import BellScenario
from ._scenario import BOB
from ._scenario import EA_SCENARIOS
from ._scenario import EAScenario
from ._scenario import Letter
from ._scenario import Word
from ._sdp import BellFunctional
from ._sdp import chsh_functional
from ._sdp import export_sdpa
from ._sdp import functional_polynomial
from ._sdp import objective_from_functional
from ._sdp import read_sdpa
from ._sdp import SdpProblem
from ._solver import INACCURATE_TOL
from ._solver import MAX_SIZE
from ._solver import MAX_VARIABLES
from ._solver import SdpResult
from ._solver import solve_sdp
from ._words import INDEX_LIMIT
from ._words import LEVELS
from ._words import WordAlgebra


__all__ = [
    "ALICE",
    "BellFunctional",
    "BellScenario",
    "BOB",
    "build_moment_matrix",
    "chsh_functional",
    "EA_SCENARIOS",
    "EAScenario",
    "export_sdpa",
    "functional_polynomial",
    "INACCURATE_TOL",
    "INDEX_LIMIT",
    "LEVELS",
    "Letter",
    "MAX_SIZE",
    "MAX_VARIABLES",
    "MomentMatrix",
    "objective_from_functional",
    "read_sdpa",
    "SdpProblem",
    "SdpResult",
    "solve_sdp",
    "upper_bound",
    "Word",
    "WordAlgebra",
]

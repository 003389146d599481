from ._classical import classical_bound
from ._classical import ClassicalBound
from ._classical import deterministic_behavior
from ._classical import ENUMERATION_LIMIT
from ._classical import facet_certificate
from ._classical import FacetCertificate
from ._classical import tight_deterministic_behaviors
from ._functional import dense_coding_mesd
from ._functional import evaluate
from ._functional import facet_functional
from ._functional import FUNCTIONAL_SCHEMA
from ._functional import LinearFunctional
from ._functional import mesd_functional
from ._functional import mesd_rate
from ._functional import rac_functional
from ._functional import separable_mesd_bound


__all__ = [
    "classical_bound",
    "ClassicalBound",
    "dense_coding_mesd",
    "deterministic_behavior",
    "ENUMERATION_LIMIT",
    "evaluate",
    "facet_certificate",
    "facet_functional",
    "FacetCertificate",
    "FUNCTIONAL_SCHEMA",
    "LinearFunctional",
    "mesd_functional",
    "mesd_rate",
    "rac_functional",
    "separable_mesd_bound",
    "tight_deterministic_behaviors",
]

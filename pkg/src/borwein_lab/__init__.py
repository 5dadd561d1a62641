"""Exact expansion and sign-pattern analysis of truncated theta-type products,
with multisum representations verified exactly and modulo large primes."""

__version__ = "0.1.0"

from .poly import LaurentPoly, NotDivisible, NonInvertiblePoint, eval_mod, exact_div, mul_truncated, substitute_power
from .qseries import (
    BadParameters, BinomialFactor, PGradedSeries, ProductSpec, conj1_spec, conj2_spec, conj3_spec, expand,
    iks_spec, qpochhammer_spec, remark_spec,
)
from .analysis import (
    Dissection, SignPattern, ThresholdResult, Violation, check_borwein, check_iks_even, check_iks_odd,
    check_pattern, dissect, find_threshold, reproduce_counterexamples, threshold_table, tridissect_borwein,
)
from .multisum import (
    MultisumParams, NotPolynomial, PartitionSeq, RationalTerm, andrews_ABC, enumerate_partitions,
    general_multisum, kaneko_product_lhs, kaneko_sum_rhs, q_binomial, theorem_components, theorem_multisum,
    theorem_term,
)
from .identity import DegenerateSampling, verify_identity_modular

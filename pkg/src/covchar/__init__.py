"""Covariant functions of subgroup characters, made computable.

Finite groups are handled exactly (Cayley tables, exact root-of-unity
characters, counting-measure Haar data); the ax+b group is handled
numerically by quadrature.  The verify module turns the structural
identities of the theory into an executable check suite.
"""

from .axb import (
    AxbFunction,
    AxbPoint,
    QuadratureGrid,
    run_axb_suite,
    sigma_check_axb,
    t_xi_axb,
    weil_check_axb,
)
from .characters import Character, conjugate_character, enumerate_characters, evaluate
from .covariant import (
    CovariantFunction,
    GroupFunction,
    SubspaceBasis,
    annihilator_basis,
    kernel_basis,
    kernel_descent_min,
    l1_norm,
    linfty_xi_basis,
    minimal_lift,
    norm_one,
    pairing,
    quotient_norm,
    span_translates_basis,
    t_n,
    t_xi,
    translate,
)
from .groups import (
    CosetDecomposition,
    FiniteGroup,
    Subgroup,
    builtin_group,
    conjugate,
    coset_decomposition,
    direct_product,
    enumerate_normal_subgroups,
    group_from_name,
    load_group,
    zoo,
    ZOO_NAMES,
)
from .haar import HaarData, counting_weights, haar_modulus, probability_weights, sigma_n, weil_normalize
from .verify import (
    THEOREM_IDS,
    TheoremReport,
    report_document,
    run_case,
    run_suite,
    verify_theorem,
)

__version__ = "0.1.0"

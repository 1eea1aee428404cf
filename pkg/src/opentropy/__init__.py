"""Operation entropies of quantum channels and their complementary channels."""

__version__ = "0.1.0"

from .channel import (
    EntropyPoint,
    KrausChannel,
    apply,
    choi,
    coherent_information_at_mixed,
    complementary,
    entropy_point,
    linear_entropy,
    map_entropy,
    map_entropy_via_complement_image,
    pad,
    tensor,
    validate,
    von_neumann_entropy,
)
from .errors import *  # noqa: F401,F403
from .families import (
    AMatrix,
    BoundaryCurve,
    LMatrix,
    boundary_curve,
    complementary_L,
    entropies_from_L,
    interpolate,
    kraus_from_L,
    lower_boundary,
    named_channel,
    product_saturating_channel,
    qubit_extremal_channel,
    saturating_L_example,
    violation_depth,
)
from .linalg import RngStream, gue_hamiltonian, haar_unitary, hermitian_exp_i
from .sampling import (
    SamplerConfig,
    boundary_probe,
    evolve_channel,
    haar_block_channel,
    stratified_channel,
    survey,
)

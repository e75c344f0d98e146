"""Complex Hadamard matrices, Butson classes, and quantum-permutation invariants."""

from .cyclotomic import (
    ApproxCycle,
    ApproxCycleDecomposition,
    Cycle,
    CycleDecomposition,
    CyclotomicInt,
    ExponentMultiset,
    cycle_decompose,
    cycle_decompose_approx,
    cyclotomic_polynomial,
    lam_leung_member,
    sum_roots,
)
from .errors import (
    ClassificationError,
    ConsistencyError,
    InvalidOrderError,
    MatrixParseError,
    NotMixedRegularError,
    NotVanishingSumError,
    QpermError,
    ResourceCapExceeded,
    SearchBudgetExceeded,
    ShapeError,
    UnstableRankError,
)
from .hadamard import (
    ButsonMatrix,
    ComplexHadamard,
    EquivalenceWitness,
    HadamardCheck,
    HadamardMatrix,
    RegularityReport,
    dephase,
    dita_deform,
    dita_product,
    equivalent,
    fourier,
    is_hadamard,
    is_regular,
    level,
    matrices_equal,
    random_witness,
    tensor,
    to_complex,
)
from .matio import read_matrix, write_matrix
from .named import named
from .groups import (
    LatinSquare,
    MagicPartition,
    PermGroup,
    abelian_invariant_factors,
    latin_conjugate,
    latin_group,
    partition_group,
    random_latin_square,
)
from .magic import (
    BaseGram,
    GramGraph,
    GramTensor,
    MagicBasis,
    components,
    detect_latin,
    fourier_tensor_decompose,
    gram,
    gram_graph,
    higher_gram,
    latin_basis,
    magic_from_hadamard,
    tensor_basis,
    verify_magic,
)
from .homdim import hom_dim
from .obstructions import ObstructionVerdict, decide, table
from .classify6 import (
    EnumerationResult,
    FamilyTag,
    ProductType,
    RowGraph,
    check_mixed_constraints,
    classify_regular6,
    enumerate_butson,
    product_type,
    row_graph,
    template_matrix,
)

__version__ = "0.1.0"

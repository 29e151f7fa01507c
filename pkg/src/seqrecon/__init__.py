"""Deletion-ball combinatorics, exhaustive intersection search and list reconstruction."""
from .bitseq import (
    BitWord,
    SequenceSet,
    alternating,
    complement,
    concat,
    deletion_ball,
    deletion_distance,
    earliest_embedding_end,
    insertion_ball,
    intersect_all,
    is_subsequence,
    prefix_filter,
    prepend,
    reverse,
)
from .combinatorics import (
    CountMemo,
    ball_size_D,
    ball_size_D_recursive,
    binom,
    intersection_bound_N,
    intersection_bound_N_recursive,
)
from .errors import BudgetExceeded, DomainError, ReadFileError
from .extremal import (
    ExtremalFamily,
    SearchReport,
    brute_force_max,
    extremal_family,
    intersection_size,
    verify_theorem,
)
from .reconstruct import (
    ReadSet,
    ReconstructionReport,
    candidates,
    check_guarantee,
    sample_reads,
    worst_case_reads,
)

__version__ = "0.1.0"

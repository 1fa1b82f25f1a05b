"""Template-guided progressive multiple sequence alignment.

Sequences carry typed, weighted segment annotations (for example predicted
secondary structure). High-weight segments are aligned exactly at the
segment level; everything else is stitched in by fast residue alignment.
"""

from .evaluation import ReferenceAlignment, column_correlation, evaluate, sp_score
from .guide_tree import TreeNode, neighbor_joining
from .matrices import SubstitutionMatrix, blosum62, parse_ncbi_matrix
from .neighborhoods import DEFAULT_CURVE, ThresholdCurve
from .pairwise import SmithWaterman, bits, global_align_residues, local_align
from .pipeline import AlignmentResult, Config, align, build_segment_model
from .progressive import Msa
from .scoring import GapScheme, PairScheme, ScoringScheme
from .sequences import (
    AnnotatedSequence,
    InputError,
    Segment,
    classify_informative,
    parse_fasta,
    parse_segment_annotations,
)

__all__ = [
    "AlignmentResult",
    "AnnotatedSequence",
    "Config",
    "DEFAULT_CURVE",
    "GapScheme",
    "InputError",
    "Msa",
    "PairScheme",
    "ReferenceAlignment",
    "ScoringScheme",
    "Segment",
    "SmithWaterman",
    "SubstitutionMatrix",
    "ThresholdCurve",
    "TreeNode",
    "align",
    "bits",
    "blosum62",
    "build_segment_model",
    "classify_informative",
    "column_correlation",
    "evaluate",
    "global_align_residues",
    "local_align",
    "neighbor_joining",
    "parse_fasta",
    "parse_ncbi_matrix",
    "parse_segment_annotations",
    "sp_score",
]

__version__ = "0.1.0"

"""Constructive extraction of boxes monochromatic in every direction from
colourings of products of complete graphs, and of monotone subarrays from
multidimensional arrays, with exact oracles and certificate verifiers."""

from .consistency import (ConsistencyParams, find_consistent_array, find_consistent_box,
                          is_consistent, verify_consistency_witness)
from .errors import BudgetExhausted, InvalidInput, PreconditionError, SizeError
from .extraction import ExtractionParams, ExtractionTrace, extract_in_dense, extract_monotone_in_dense
from .generators import (gen_constant_colouring, gen_direction_colouring, gen_lex_array,
                         gen_random_array, gen_random_colouring, perturb_to_injective)
from .model import (BoxColouring, ConsistencyWitness, DirectionColourCertificate,
                    LexMonotoneCertificate, MonotoneCertificate, NumericArray, canonical_pattern,
                    verify_lex_monotone, verify_mono_box, verify_monotone)
from .monotone1d import RunCertificate, longest_monotone, monotone_of_length
from .oracle import (NumberQuery, NumberResult, compute_number, decide_L_instance,
                     decide_M_instance, decide_R_instance)
from .params import ArrayPlan, RamseyPlan, f_consistency, g_array, g_colouring
from .pipelines import (PipelineParams, find_lex_monotone, find_mono_box, find_mono_box_2d,
                        find_monotone_subarray)
from .ramsey1d import CliqueCertificate, classical_ramsey_exact, find_mono_clique

__version__ = "0.1.0"

"""Finite-structure diagnostics for arrays, mutual algebraicity, defining schemes and decompositions."""

from .arrays import (ArrayCertificate, Chain, Exhaustive, SeededRandom, count_supporting, lex_least_array,
                     max_disjoint_packing, packing_at_least, reduct_pigeonhole, supports_m_array, uba_scan)
from .basis import build_basis, extract_core
from .decomposition import check_determination, finite_part, ma_subsequences, max_ma_decomposition
from .errors import *  # noqa: F401,F403
from .formula import eval_formula, evaluate, parse_formula, solutions, to_text
from .ma import count_qma_types, family_scan, ma_bound
from .qftypes import TypeClasses, TypeFingerprint, enumerate_types, isolating_formula, qf_type
from .scheme import build_scheme, check_basedef, compute_m, free_product, make_scheme, scheme_agreement
from .structure import (Signature, Structure, gen_cycle, gen_halfgraph, gen_matching, gen_random, generate,
                        parse_structure, reduct, serialize_structure)

__version__ = "0.1.0"

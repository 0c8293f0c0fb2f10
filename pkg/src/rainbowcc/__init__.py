"""Coded caching and coded MapReduce schemes from rainbow colorings.

Build a universe of users and packets, color the combined elements so every
designated structure is rainbow, and the package turns that into a complete
caching scheme: placement, XOR groups, an MDS-compressed broadcast, and a
bytewise-verified decoder. The same colorings drive MapReduce shuffle plans
with exact communication-load accounting.
"""

from .errors import SchemeError
from .gf import GF2, GF256, Matrix, banded_mds, combine, mds_matrix, \
    solve_submatrix, verify_mds
from .kernels import backend
from .mapreduce import build_instance, cdc_bound, run_reduce, synthesize_shuffle
from .rainbow3ap import RainbowAPSet, build_psi, build_rainbow_ap, \
    build_rainbow_scheme
from .schemes import CachingScheme, PDA, build_scheme, cutset_bound, cyclic_universe, \
    decode, deliver, parse_pda, pda_to_scheme, scheme_cyclic, scheme_from_doc, \
    scheme_linear_block, scheme_man, scheme_to_doc, scheme_to_pda, \
    scheme_union_subsets, validate_pda
from .simulator import compare_bounds, make_library, sweep
from .universe import Coloring, SigmaStructure, Universe, build_universe, \
    enumerate_sigma, exact_min_colors, greedy_color, universe_from_doc, \
    universe_to_doc, validate_rainbow

__version__ = "0.1.0"

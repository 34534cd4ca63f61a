"""Triangle counting over simulated processing-in-memory cores."""
from .estimator import Estimate, aggregate, correct_core, reservoir_factor
from .graph_io import EdgeList, ParseError, parse_coo, preprocess, read_coo, split_chunks, write_coo
from .harness import RunConfig, RunReport, run_dynamic, run_static, sweep
from .kernels import BACKEND
from .oracle import exact_count, exact_frequencies
from .partitioner import (ColoringParams, MisraGriesSummary, RemapTable, build_batches, color_of,
                          compatible_cores, enumerate_triplets, expected_core_load, mg_merge, mg_update,
                          select_top)
from .pim_core import (PimCore, ReservoirSample, apply_remap, build_region_index, count_triangles,
                       reservoir_offer, run_core, sort_sample)

__version__ = "0.1.0"

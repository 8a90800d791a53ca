"""Look-and-say-the-biggest dynamics on run-length compressed digit words."""

__version__ = "0.1.0"

from .census import CensusReport, CycleClass, find_sigma, merge_reports, probe_conjecture, run_census
from .dynamics import Orbit, canonical_cycle, detect_orbit, detect_orbit_brent, iterate_n, trajectory
from .errors import (
    LSBError,
    OverlappingSpaceError,
    PreconditionError,
    RunCountOverflowError,
    SeedParseError,
    StepBudgetExceeded,
    WordTooLongError,
)
from .laws import LawReport, reproduce_figure1, reproduce_fossils, run_suite
from .maxmap import WordType, classify, last_digit, ls_step, lsa_step, lsb_step, max_run, z_piece
from .runword import (
    Run,
    RunWord,
    normalize,
    parse_compressed,
    parse_digits,
    parse_seed,
    render_compressed,
    render_digits,
    total_length,
    word_compare,
)
from .seeds import SeedSpace, enumerate_seeds

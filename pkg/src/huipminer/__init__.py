"""Mining high utility patterns from interval-based event sequences."""
from .cer import from_c_sequence, phi, to_c_database, to_c_sequence, unique_time_points
from .miner import (
    CandidateStats,
    ConfigError,
    MineResult,
    MinerConfig,
    RoundStats,
    ccandidate,
    coincident_phase,
    mine,
    mine_c_database,
    scandidate,
    serial_phase,
)
from .model import (
    CEventset,
    CSequence,
    CSequenceDatabase,
    ESequence,
    ESequenceDatabase,
    EventInterval,
    LSequence,
    PatternResult,
    TimePoints,
    UtilityTable,
    canonical_text,
    coincidence,
    lsequence_size,
)
from .utility import (
    csequence_utility,
    database_utility,
    event_utility,
    eventset_utility,
    lwu,
    max_k_utility,
    max_match_utility,
    pattern_max_utility,
    pattern_utility_set,
    sdcp_bound,
)

__version__ = "0.1.0"

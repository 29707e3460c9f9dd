# src/constants.py

from pathlib import Path

# Application Constants
APP_NAME = "PerfectCodes"
APP_VERSION = "1.0.0"

# Paths
USER_HOME = str(Path.home())
DEFAULT_CONFIG_PATH = str(Path(USER_HOME) / ".perfectcodes" / "config.json")

# Enumeration Settings
DEFAULT_ENUMERATION_CAP = 2 ** 30  # vertex-visits
DEFAULT_MATERIALIZE_CAP = 2 ** 20  # codewords held as an explicit array
SYMBOL_DTYPE = "int16"
RANK_DTYPE = "int64"
QUOTIENT_CHUNK_SIZE = 1 << 14  # vertices per worker task

# Feasibility Settings
DEFAULT_EXACT_VALUE_LIMIT = 10 ** 6
DEFAULT_TRIAL_DIVISION_BOUND = 10 ** 7
DEFAULT_FULL_BITS_CAP = 1 << 16

# Search Settings
DEFAULT_POOL_CAP = 10 ** 4
DEFAULT_SEARCH_SPACE_BITS = 64  # log2 of C(pool, words still needed)
SEARCH_MIN_DISTANCE = 4

# Output Settings
OUTPUT_FORMATS = ["pretty", "json", "tsv"]
DEFAULT_OUTPUT_FORMAT = "pretty"
CODE_FILE_EXTENSION = "code"

# Verification routes
VERIFY_MODES = ["perfect", "extended-perfect", "puncture", "fast", "all"]

# Exit codes
EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

# Logging Settings
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
LOG_LEVELS = {
    "DEBUG": 10,
    "INFO": 20,
    "WARNING": 30,
    "ERROR": 40,
    "CRITICAL": 50
}

# Error Messages
ERROR_MESSAGES = {
    "cap_exceeded": "Enumeration of {cost} vertex-visits exceeds the cap of {cap}.",
    "empty_code": "The code has no codewords.",
    "not_prime_power": "q={q} is not a prime power.",
    "not_materialized": "The code is only held as a parity-check matrix; route '{route}' needs explicit codewords.",
    "duplicate_word": "Duplicate codeword on line {line}: {word}",
    "pool_too_large": "Candidate pool of {pool} words exceeds the search cap of {cap}.",
    "search_too_large": "Choosing {need} of {pool} candidates spans about 2^{bits} subsets, over the cap of 2^{cap}.",
}

# Default Configuration
DEFAULT_CONFIG = {
    "enumeration": {
        "cap": DEFAULT_ENUMERATION_CAP
    },
    "codes": {
        "materialize_cap": DEFAULT_MATERIALIZE_CAP
    },
    "feasibility": {
        "exact_value_limit": DEFAULT_EXACT_VALUE_LIMIT,
        "trial_division_bound": DEFAULT_TRIAL_DIVISION_BOUND,
        "full_bits_cap": DEFAULT_FULL_BITS_CAP
    },
    "search": {
        "pool_cap": DEFAULT_POOL_CAP,
        "space_bits_cap": DEFAULT_SEARCH_SPACE_BITS
    },
    "runtime": {
        "threads": 0,
        "output_format": DEFAULT_OUTPUT_FORMAT
    },
    "logging": {
        "level": "WARNING"
    }
}

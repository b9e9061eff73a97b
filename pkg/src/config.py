import os
from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


class Config:
    # Search bounds
    CONDUCTOR_BOUND = _int_env('TAME_CONDUCTOR_BOUND', 2000)
    PRIME_SCAN_BOUND = _int_env('TAME_PRIME_SCAN', 500)
    SUPPORT_BOUND = _int_env('TAME_SUPPORT_BOUND', 4)
    WITNESS_SUPPORT = _int_env('TAME_WITNESS_SUPPORT', 3)

    # Grade groups live in Q^r with r at most this
    MAX_AMBIENT_RANK = _int_env('TAME_MAX_RANK', 3)

    # Height verdicts on the 2-part are cross-checked by cyclic cover search for k <= HEIGHT_CROSSCHECK
    HEIGHT_CROSSCHECK = _int_env('TAME_HEIGHT_CROSSCHECK', 3)

    # General (noncyclic) cover searches above this relative degree are skipped
    SEARCH_DEGREE_LIMIT = _int_env('TAME_SEARCH_DEGREE_LIMIT', 8)

    LOG_DIR = os.getenv('TAME_LOG_DIR', 'logs')
    LOG_LEVEL = os.getenv('TAME_LOG_LEVEL', 'WARNING').upper()

import os

from dotenv import load_dotenv

load_dotenv()


class Config:
    """
    Configuration settings for the periodicity analysis toolkit.
    """

    # Logging configuration
    LOG_LEVEL = os.getenv("PERIOD_SCOPE_LOG_LEVEL", "INFO")
    LOG_FILE_PATH = os.getenv("PERIOD_SCOPE_LOG_FILE") or None

    OUTPUT_DIR = os.getenv("PERIOD_SCOPE_OUTPUT_DIR", ".")

    # Seeds are flag-only, never taken from the environment
    DEFAULT_SEED = 20190101

    # Monte Carlo period finder defaults
    MC_COLUMNS = 16
    MC_ROWS = 16
    MC_RESENDS = 5

    # SVD baseline
    SVD_CAP_VALUE = 1e15
    SVD_ZERO_THRESHOLD = 1e-12

    # Mean column variance below this fraction of the signal power counts as vanished
    VANISHING_VARIANCE = 1e-12

    # Ramanujan projection
    PROJECTION_TOLERANCE = 1e-8
    DOMINANT_STRENGTH = 0.02

    # Reports
    SCHEMA_VERSION = 1
    CSV_SIGNIFICANT_DIGITS = 17

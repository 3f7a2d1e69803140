import os

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

LIBRARY_VERSION = "0.3.0"


class RuntimeConfig:
    """Runtime configuration management."""

    @staticmethod
    def is_testing() -> bool:
        return os.getenv("TESTING") == "true"

    @staticmethod
    def get_threads() -> int:
        """Default worker count for experiment runs."""
        threads = int(os.getenv("HBF_THREADS", "1"))
        if threads < 1:
            raise ValueError("HBF_THREADS must be a positive integer")
        return threads

    @staticmethod
    def get_log_level() -> str:
        return os.getenv("HBF_LOG_LEVEL", "INFO").upper()

    @staticmethod
    def get_exact_budget() -> int:
        """Largest number of analog assignments the exhaustive solver may enumerate."""
        return int(float(os.getenv("HBF_EXACT_BUDGET", "1000000")))

    @staticmethod
    def get_api_max_trials() -> int:
        return int(os.getenv("HBF_API_MAX_TRIALS", "200"))

"""
Toolkit configuration and settings.

Loads environment variables with sensible defaults.
"""
import os
from dotenv import load_dotenv

# Load .env file
load_dotenv()


class Settings:
    # Environment
    ENV = os.getenv('ENV', 'production')  # production | testing

    # Logging
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FORMAT = os.getenv('LOG_FORMAT', 'json')  # json | text

    # Randomized harnesses
    SEED = int(os.getenv('KHOW_SEED', '0'))
    HARNESS_TRIALS = int(os.getenv('KHOW_HARNESS_TRIALS', '10000'))
    HARNESS_MAX_STATES = 6

    # Bisimulation: distinct valuations per model before profiles get too large
    MAX_VALUATIONS = int(os.getenv('KHOW_MAX_VALUATIONS', '12'))

    # Single-agent translations name their agent with this id
    DEFAULT_AGENT = os.getenv('KHOW_DEFAULT_AGENT', '1')

    # API
    API_TITLE = 'Knowing-How Toolkit API'
    API_DESCRIPTION = 'Model checking, equivalence, translations, filtration and satisfiability for knowing-how logic'
    API_VERSION = '1.0.0'
    API_PREFIX = ''
    DOCS_URL = '/docs'
    REDOC_URL = '/redoc'
    OPENAPI_URL = '/openapi.json'

    @classmethod
    def validate(cls):
        """Validate settings that would otherwise fail deep inside an operation."""
        if cls.LOG_FORMAT not in ('json', 'text'):
            raise ValueError(f"LOG_FORMAT must be 'json' or 'text', got {cls.LOG_FORMAT!r}")
        if cls.MAX_VALUATIONS < 1:
            raise ValueError('KHOW_MAX_VALUATIONS must be positive')
        if cls.HARNESS_TRIALS < 1:
            raise ValueError('KHOW_HARNESS_TRIALS must be positive')
        if not cls.DEFAULT_AGENT:
            raise ValueError('KHOW_DEFAULT_AGENT cannot be empty')


# Load settings and validate
settings = Settings()
settings.validate()

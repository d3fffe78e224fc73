"""
Centralized configuration for the amplituhedron toolkit
Reads limits, sampling sizes and logging settings from AMPLI_* environment variables
"""
import os


class Config:
    """Toolkit configuration"""

    # Input limits
    MAX_N = int(os.getenv('AMPLI_MAX_N', '14'))

    # Ray casting
    RAY_RETRIES = int(os.getenv('AMPLI_RAY_RETRIES', '64'))
    RAY_COEFFICIENT_BOUND = int(os.getenv('AMPLI_RAY_COEFFICIENT_BOUND', '9'))

    # Sampling
    JITTER_DENOMINATOR = int(os.getenv('AMPLI_JITTER_DENOMINATOR', '7'))
    TNN_ZERO_PROBABILITY_DENOMINATOR = int(os.getenv('AMPLI_TNN_ZERO_ONE_IN', '3'))

    # Verification harness
    DEFAULT_SEEDS = int(os.getenv('AMPLI_DEFAULT_SEEDS', '25'))
    IDENTITY_MAX_N = int(os.getenv('AMPLI_IDENTITY_MAX_N', '7'))
    UNCONSTRAINED_SAMPLES = int(os.getenv('AMPLI_UNCONSTRAINED_SAMPLES', '200'))
    BOUNDARY_SAMPLES = int(os.getenv('AMPLI_BOUNDARY_SAMPLES', '100'))
    MIN_ZERO_CASES = int(os.getenv('AMPLI_MIN_ZERO_CASES', '20'))
    MEMBERSHIP_CASES = int(os.getenv('AMPLI_MEMBERSHIP_CASES', '25'))
    WORKERS = int(os.getenv('AMPLI_WORKERS', '1'))

    # Logging
    LOG_LEVEL = os.getenv('AMPLI_LOG_LEVEL', 'INFO')

    @classmethod
    def summary(cls) -> dict:
        """Return the active settings, used in reports and --show-config"""
        return {
            name: getattr(cls, name)
            for name in dir(cls)
            if name.isupper()
        }


class DevelopmentConfig(Config):
    """Development configuration"""
    LOG_LEVEL = os.getenv('AMPLI_LOG_LEVEL', 'DEBUG')


class ProductionConfig(Config):
    """Production configuration"""
    LOG_LEVEL = os.getenv('AMPLI_LOG_LEVEL', 'WARNING')


class TestingConfig(Config):
    """Small sample sizes for the test suite"""
    DEFAULT_SEEDS = 3
    UNCONSTRAINED_SAMPLES = 20
    BOUNDARY_SAMPLES = 30
    MIN_ZERO_CASES = 3
    MEMBERSHIP_CASES = 4
    WORKERS = 1


config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': ProductionConfig
}


def get_config(name: str = None) -> type:
    """Select a configuration class by name or AMPLI_ENV"""
    return config.get(name or os.getenv('AMPLI_ENV', 'default'), config['default'])

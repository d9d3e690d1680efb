"""Application configuration."""
import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Base configuration."""
    APP_NAME = os.getenv("APP_NAME", "streampart")
    LOG_LEVEL = os.getenv("STREAMPART_LOG_LEVEL", "WARNING")

    # Solver settings
    SEARCH_LIMIT = int(os.getenv("STREAMPART_SEARCH_LIMIT", str(10**7)))
    WORKERS = int(os.getenv("STREAMPART_WORKERS", "1"))
    BINDING_TOLERANCE = float(os.getenv("STREAMPART_BINDING_TOLERANCE", "1e-9"))

    # Simulator settings
    BUFFER_TOKENS = int(os.getenv("STREAMPART_BUFFER_TOKENS", "64"))
    COMPARE_THRESHOLD = float(os.getenv("STREAMPART_COMPARE_THRESHOLD", "0.10"))


class DevelopmentConfig(Config):
    """Development configuration."""
    DEBUG = True


class TestingConfig(Config):
    """Testing configuration."""
    TESTING = True
    LOG_LEVEL = "DEBUG"
    SEARCH_LIMIT = 10**6


class ProductionConfig(Config):
    """Production configuration."""
    DEBUG = False


config = {
    "development": DevelopmentConfig,
    "testing": TestingConfig,
    "production": ProductionConfig,
    "default": DevelopmentConfig
}

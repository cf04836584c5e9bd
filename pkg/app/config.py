from pydantic_settings import BaseSettings

class Settings(BaseSettings):

    # Worker processes for per-block rank computations. 1 runs everything inline.
    KH_WORKERS: int = 1

    # Complexes (and stable stages) above this crossing count are refused.
    KH_MAX_CROSSINGS: int = 24
    KH_JONES_MAX_CROSSINGS: int = 24

    # Largest torus stage q that stable_table will try before giving up.
    KH_STABLE_MAX_STAGE: int = 12

    # Verify d∘d = 0 per materialised slice and chain-map commutation on construction.
    KH_DEBUG_CHECKS: bool = False

    KH_LOG_LEVEL: str = "INFO"

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        extra = "ignore"

settings = Settings()

"""Configurações da aplicação."""

import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Centraliza todas as configurações do sistema."""

    # Limites de profundidade e de enumeração
    MAX_DEPTH = int(os.getenv("MAX_DEPTH", "5"))
    ENUMERATION_MAX_DEPTH = int(os.getenv("ENUMERATION_MAX_DEPTH", "3"))
    EXHAUSTIVE_MAX_DEPTH = int(os.getenv("EXHAUSTIVE_MAX_DEPTH", "3"))

    # Fecho de subgrupos
    CLOSURE_LIMIT = int(os.getenv("CLOSURE_LIMIT", str(2**20)))
    MIN_GENERATORS_SEARCH_LIMIT = int(os.getenv("MIN_GENERATORS_SEARCH_LIMIT", "64"))

    # Varreduras
    DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", "20190101"))
    DEFAULT_SAMPLES = int(os.getenv("DEFAULT_SAMPLES", "1000"))
    DEFAULT_JOBS = int(os.getenv("DEFAULT_JOBS", "1"))

    # Relatórios
    REPORTS_DIR = os.getenv("REPORTS_DIR", "./reports")

    # Configurações gerais
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    API_TITLE = os.getenv("API_TITLE", "K_n Conjugacy API")
    API_VERSION = os.getenv("API_VERSION", "0.1.0")

    @classmethod
    def ensure_directories(cls):
        """Garante que os diretórios necessários existem."""
        os.makedirs(cls.REPORTS_DIR, exist_ok=True)

"""Runtime settings read from the environment"""

import logging
import os
from dataclasses import dataclass
from typing import Dict, Optional

logger = logging.getLogger(__name__)

THREADS_ENV = 'DARBOUX_EMBED_THREADS'
LOG_LEVEL_ENV = 'DARBOUX_EMBED_LOG_LEVEL'


@dataclass
class Settings:
    """Process-wide knobs: worker count and default log level"""
    threads: int = 1
    log_level: str = 'WARNING'
    
    @classmethod
    def from_env(cls) -> 'Settings':
        """Build settings from DARBOUX_EMBED_* environment variables"""
        threads = 1
        raw = os.getenv(THREADS_ENV)
        if raw:
            try:
                threads = int(raw)
                if threads < 1:
                    raise ValueError(raw)
            except ValueError:
                logger.warning(f"Ignoring invalid {THREADS_ENV}={raw!r}; using 1 worker")
                threads = 1
        
        level = (os.getenv(LOG_LEVEL_ENV) or 'WARNING').upper()
        if not isinstance(logging.getLevelName(level), int):
            logger.warning(f"Ignoring invalid {LOG_LEVEL_ENV}={level!r}")
            level = 'WARNING'
        
        return cls(threads=threads, log_level=level)
    
    def to_dict(self) -> Dict:
        """Convert to dictionary"""
        return {'threads': self.threads, 'log_level': self.log_level}


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create global settings"""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reset_settings():
    """Forget cached settings so the environment is read again"""
    global _settings
    _settings = None

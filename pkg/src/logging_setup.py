import logging
import logging.config
from pathlib import Path
from typing import Optional

from .config_manager import get_settings


def setup_logging(level_override: Optional[str] = None):
    """
    Configures the application's logging based on settings from the config file.

    ``level_override`` replaces the console level (the CLI's --verbose flag).
    """
    try:
        settings = get_settings()
        log_config = settings.logging
        console_level = (level_override or log_config.level).upper()

        handlers = {
            "console": {
                "class": "logging.StreamHandler",
                "formatter": "default",
                "level": console_level,
                "stream": "ext://sys.stderr",
            },
        }
        root_handlers = ["console"]

        if log_config.file:
            log_file_path = Path(log_config.file)
            # Ensure the parent directory exists
            log_file_path.parent.mkdir(exist_ok=True, parents=True)
            handlers["file"] = {
                "class": "logging.handlers.RotatingFileHandler",
                "formatter": "default",
                "filename": str(log_file_path),
                "maxBytes": log_config.max_size_mb * 1024 * 1024,
                "backupCount": log_config.backup_count,
                "level": log_config.level.upper(),
            }
            root_handlers.append("file")

        config_dict = {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "default": {
                    "format": log_config.format,
                },
            },
            "handlers": handlers,
            "root": {
                "handlers": root_handlers,
                "level": min(
                    logging.getLevelName(console_level),
                    logging.getLevelName(log_config.level.upper()),
                ),
            },
        }

        logging.config.dictConfig(config_dict)
        logging.getLogger(__name__).debug("Logging configured successfully.")

    except Exception as e:
        # Fallback to basic logging if configuration fails
        logging.basicConfig(level=logging.INFO)
        logging.exception(f"Error configuring logging from settings: {e}")

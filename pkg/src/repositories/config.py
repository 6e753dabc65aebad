import json
import logging
from pathlib import Path

from pydantic import ValidationError

from exceptions.sim_exceptions import ConfigException
from schemas.config import Config

log = logging.getLogger(__name__)


def _error_message(e: ValidationError) -> str:
    error = e.errors()[0]
    key = ".".join(str(part) for part in error["loc"]) or "<root>"
    return f"Invalid config key '{key}': {error['msg']}"


class ConfigRepository:
    """Scenario configuration files (strict JSON: unknown keys are rejected)."""

    def parse(self, data: dict, base_dir: Path | None = None) -> Config:
        try:
            config = Config.model_validate(data)
        except ValidationError as e:
            raise ConfigException(_error_message(e))

        heightmap = config.terrain.heightmap
        if heightmap is not None and base_dir is not None and not heightmap.is_absolute():
            terrain = config.terrain.model_copy(update={"heightmap": base_dir / heightmap})
            config = config.model_copy(update={"terrain": terrain})
        return config

    def load(self, path: Path) -> Config:
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except FileNotFoundError:
            raise ConfigException(f"Config file {path} not found")
        except (OSError, json.JSONDecodeError) as e:
            log.error("Failed read config %s > %s", path, e)
            raise ConfigException(f"Cannot read config file {path}: {e}")
        if not isinstance(data, dict):
            raise ConfigException(f"Config file {path} must hold a JSON object")

        config = self.parse(data, base_dir=path.parent)
        log.info("Loaded config %s", path)
        return config

    def dump(self, config: Config) -> dict:
        return config.model_dump(mode="json")

    def save(self, config: Config, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.dump(config), indent=2) + "\n")
        return path

import json
import logging
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from exceptions.sim_exceptions import ConfigException
from schemas.model import ModelParams

log = logging.getLogger(__name__)


class ParamsRepository:
    """Model parameter files: a flat JSON object keyed `slip.a_v` ... `sinkage.F_ref`."""

    @staticmethod
    def to_dotted(params: ModelParams) -> dict[str, float]:
        return {
            f"{group}.{name}": value
            for group, fields in params.model_dump().items()
            for name, value in fields.items()
        }

    @staticmethod
    def from_dotted(data: dict[str, Any]) -> ModelParams:
        nested: dict[str, dict[str, Any]] = {}
        for key, value in data.items():
            if isinstance(value, dict):
                nested.setdefault(key, {}).update(value)
                continue
            group, _, name = key.partition(".")
            if not name:
                raise ConfigException(f"Unknown model parameter key '{key}'")
            nested.setdefault(group, {})[name] = value
        try:
            return ModelParams.model_validate(nested)
        except ValidationError as e:
            error = e.errors()[0]
            key = ".".join(str(part) for part in error["loc"])
            raise ConfigException(f"Invalid model parameter '{key}': {error['msg']}")

    def load(self, path: Path) -> ModelParams:
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            log.error("Failed read model parameters %s > %s", path, e)
            raise ConfigException(f"Cannot read model parameter file {path}: {e}")
        if not isinstance(data, dict):
            raise ConfigException(f"Model parameter file {path} must hold a JSON object")
        return self.from_dotted(data)

    def save(self, params: ModelParams, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dotted(params), indent=2) + "\n")
        log.info("Wrote model parameters %s", path)
        return path

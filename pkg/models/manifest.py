from datetime import datetime, timezone
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


class RunManifest(BaseModel):
    """
    Everything needed to replay a run: config echo, dataset fingerprint, outputs
    """

    command: str = "run"
    status: str = "running"  # running, completed, failed
    config: dict
    preset: Optional[str] = None
    dataset_source: str
    dataset_fingerprint: str
    dataset_shape: List[int]
    started_at: str = Field(default_factory=utc_now)
    finished_at: Optional[str] = None
    outputs: Dict[str, str] = Field(default_factory=dict)
    error: Optional[str] = None

    def finalize(self, status: str, error: Optional[str] = None) -> "RunManifest":
        self.status = status
        self.error = error
        self.finished_at = utc_now()
        return self

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.model_dump_json(indent=2))

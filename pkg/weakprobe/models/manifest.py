"""
Run manifest model
"""
from dataclasses import dataclass, field
from datetime import datetime, timezone

SCHEMA_VERSION = '1'


@dataclass
class RunManifest:
    """Provenance record written next to every set of output files"""
    command: str
    config_digest: str
    seed: int
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    outputs: list = field(default_factory=list)

    def add_output(self, path):
        self.outputs.append(str(path))

    def to_dict(self) -> dict:
        return {
            'schema_version': SCHEMA_VERSION,
            'command': self.command,
            'config_digest': self.config_digest,
            'seed': self.seed,
            'timestamp': self.timestamp,
            'outputs': list(self.outputs),
        }

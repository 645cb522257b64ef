"""JSON Schema files for every report the command line emits."""
import json
from functools import lru_cache
from importlib import resources

NAMES = (
    "absorb_report", "closeness_report", "factor_result", "hypergraph", "local_search",
    "pipeline_report", "selftest", "stats", "threshold", "trace",
)


@lru_cache(maxsize=None)
def load(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"no schema named {name!r}")
    return json.loads(resources.files(__name__).joinpath(f"{name}.json").read_text())

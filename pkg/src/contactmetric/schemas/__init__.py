"""JSON Schemas (draft 2020-12) for the pair-spec input and every report."""

import json
from importlib import resources

NAMES = ("pairspec", "check", "lemma-verify", "verdict", "scan-umbilic", "gallery", "curvature")


def load(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"no schema named {name!r}")
    return json.loads(resources.files(__package__).joinpath(f"{name}.json").read_text(encoding="utf-8"))

"""The bundled library and the harness that runs it as a regression suite."""

from .harness import (
    export_inventory,
    load_inventory,
    load_manifest,
    postulated_names,
    required_paths,
    run_corpus,
)

__all__ = [
    "export_inventory",
    "load_inventory",
    "load_manifest",
    "postulated_names",
    "required_paths",
    "run_corpus",
]

"""Multi-criteria graph traversal driven by Pareto skyline geometry."""

from ._core import (
    Instance,
    enumerate_paths,
    generate_instance,
    load_instance,
    parse_instance,
    run,
    verify,
)

__all__ = [
    "Instance",
    "enumerate_paths",
    "generate_instance",
    "load_instance",
    "parse_instance",
    "run",
    "verify",
]

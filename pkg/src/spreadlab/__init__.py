"""Exact spread and uniform spread computations for finite permutation groups."""

__version__ = "0.1.0"

from .perm import Permutation, parse_perm  # noqa: E402
from .group import BoundExceeded, NotInGroup, PermGroup  # noqa: E402
from .constructions import GroupSpec, SpecError, build_named, catalog, parse_spec  # noqa: E402
from .classes import conjugacy_classes, class_by_label  # noqa: E402
from .genlib import (  # noqa: E402
    spread_exact, uniform_spread_exact, witness_check, verify_certificate, SpreadValue,
)

__all__ = [
    "Permutation", "parse_perm", "PermGroup", "BoundExceeded", "NotInGroup", "GroupSpec", "SpecError",
    "build_named", "catalog", "parse_spec", "conjugacy_classes", "class_by_label", "spread_exact",
    "uniform_spread_exact", "witness_check", "verify_certificate", "SpreadValue", "__version__",
]

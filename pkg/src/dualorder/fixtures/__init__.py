"""Worked example pairs, each witnessing one non-implication between orders.

Files are ``<name>_E.json`` and ``<name>_F.json`` in the matrix file format.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..dual import DualMatrix
from ..matrixio import parse_matrix_text

EXAMPLES = (
    "dual-minus-not-dm-sharp",
    "dm-sharp-not-d-sharp",
    "dm-sharp-not-g-sharp",
)


def fixture_path(name: str, which: str) -> Path:
    """Filesystem path of the E or F file of example ``name``."""
    if name not in EXAMPLES or which not in ("E", "F"):
        raise KeyError(f"no fixture {name}_{which}")
    return Path(str(resources.files(__name__).joinpath(f"{name}_{which}.json")))


def load_example(name: str) -> tuple[DualMatrix, DualMatrix]:
    e, f = (parse_matrix_text(fixture_path(name, w).read_text(encoding="utf-8")) for w in "EF")
    return e, f


def load_examples() -> dict[str, tuple[DualMatrix, DualMatrix]]:
    return {name: load_example(name) for name in EXAMPLES}

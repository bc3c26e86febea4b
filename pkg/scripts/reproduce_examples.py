"""Evaluate every order on the three shipped example pairs and print a verdict table.

Usage: python3 scripts/reproduce_examples.py
"""

from __future__ import annotations

from dualorder.fixtures import load_examples
from dualorder.orders import OrderKind, Unmet, implication_matrix


def _cell(v: bool | Unmet) -> str:
    return "unmet" if isinstance(v, Unmet) else str(v).lower()


def main() -> None:
    examples = load_examples()
    width = max(len(k.value) for k in OrderKind)
    print(" " * width + "  " + "  ".join(f"{name:>24}" for name in examples))
    table = {name: implication_matrix(e, f) for name, (e, f) in examples.items()}
    for kind in OrderKind:
        print(f"{kind.value:<{width}}  " + "  ".join(f"{_cell(table[n][kind]):>24}" for n in examples))


if __name__ == "__main__":
    main()

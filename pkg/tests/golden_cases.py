"""Fixed-seed CLI commands whose SVG output is pinned under tests/golden.

Run ``python tests/golden_cases.py`` to rewrite the golden files.
"""

import os
import sys

from lamlab.cli import main

HERE = os.path.dirname(os.path.abspath(__file__))
GOLDEN = os.path.join(HERE, "golden")
FIG_FACTO = "3 4\n8 9\n3 5\n1 3\n1 6\n1 8\n2 3\n7 8\n"


def cases(out):
    """(name, argv, output path) for every pinned command, writing into ``out``."""
    facto = os.path.join(out, "fig.txt")
    return [
        ("tree", ["sample-tree", "--n", "40", "--seed", "1", "--format", "svg"], "tree.svg"),
        ("facto", ["sample-facto", "--n", "60", "--seed", "2", "--format", "svg"], "facto.svg"),
        ("cut", ["cut-process", "--n", "300", "--c", "1.5", "--seed", "3", "--format", "svg"], "cut.svg"),
        ("partition", ["partition", "--facto", facto, "--k", "5", "--labels"], "partition.svg"),
        ("animate", ["animate", "--alpha", "1.8", "--n", "20000", "--frames", "51", "--seed", "7"], "frames"),
    ]


def run_all(out):
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "fig.txt"), "w") as fh:
        fh.write(FIG_FACTO)
    for name, argv, target in cases(out):
        code = main(argv + ["--out", os.path.join(out, target)])
        if code != 0:
            raise RuntimeError(f"{name} exited with {code}")


if __name__ == "__main__":
    run_all(sys.argv[1] if len(sys.argv) > 1 else GOLDEN)

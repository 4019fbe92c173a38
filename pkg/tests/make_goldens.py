"""Regenerate tests/golden/ from the shipped state files.

    python3 tests/make_goldens.py

Review the diff before committing: goldens pin outputs byte for byte.
"""
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))

from golden_cases import CASES, resolve

from tfqm.cli import main


def run(golden_dir=HERE / "golden", states_dir=HERE.parent / "states"):
    golden_dir.mkdir(exist_ok=True)
    for name, argv, _ in CASES:
        code = main(resolve(argv, states_dir, golden_dir / name))
        if code != 0:
            raise SystemExit(f"{name}: exit code {code}")
        print(name)


if __name__ == "__main__":
    run()

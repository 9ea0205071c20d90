"""Write (or re-verify) every golden snapshot under tests/golden.

Existing snapshots are compared rather than overwritten; delete a file to
regenerate it.
"""

import argparse
import contextlib
import io
import sys
import time
from pathlib import Path

from liouville_lab.cli import parse_and_dispatch
from liouville_lab.suite import GOLDEN_SUITE, golden_argv

DEFAULT_DIR = Path(__file__).resolve().parents[1] / "tests" / "golden"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", default=str(DEFAULT_DIR))
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()
    failures = 0
    for name, argv in GOLDEN_SUITE:
        t0 = time.perf_counter()
        err = io.StringIO()
        with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(err):
            code = parse_and_dispatch(golden_argv(name, argv, args.dir, args.threads))
        status = err.getvalue().strip().splitlines()[-1] if err.getvalue().strip() else ""
        print(f"{name:24s} exit={code} {time.perf_counter() - t0:6.2f}s  {status}")
        failures += code != 0
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

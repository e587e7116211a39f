"""Run the acceptance suite and print only its PASS/FAIL lines."""

import subprocess
import sys
from pathlib import Path


def main() -> int:
    tests = Path(__file__).resolve().parent.parent / "tests" / "test_acceptance.py"
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-s", str(tests)],
                          capture_output=True, text=True, check=False)
    lines = [line.lstrip(".F") for line in proc.stdout.splitlines() if "] criterion " in line]
    print("\n".join(lines))
    print(proc.stdout.strip().splitlines()[-1])
    return proc.returncode


if __name__ == "__main__":
    sys.exit(main())

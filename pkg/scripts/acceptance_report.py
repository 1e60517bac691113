"""Run the acceptance suite and print one line per criterion."""
import sys
from pathlib import Path

import pytest

if __name__ == "__main__":
    suite = Path(__file__).resolve().parents[1] / "tests" / "test_acceptance.py"
    sys.exit(pytest.main([str(suite), "-q", "-p", "no:cacheprovider", *sys.argv[1:]]))

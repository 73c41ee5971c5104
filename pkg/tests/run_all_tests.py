#!/usr/bin/env python3
"""
Run every test script under tests/<area>/, each in its own subprocess.

Usage:
    python tests/run_all_tests.py              # all areas
    python tests/run_all_tests.py core train   # selected areas

The statistical suites in tests/integration skip themselves unless
GHLDA_SLOW_TESTS=1 is set; the per-file timeout grows with them.
"""

import os
import subprocess
import sys
import time
from pathlib import Path
from typing import List, NamedTuple, Sequence

TEST_AREAS = ['core', 'ingest', 'train', 'evaluate', 'export', 'integration']
TIMEOUT = 120
SLOW_TIMEOUT = 1200


class TestResult(NamedTuple):
    path: Path
    success: bool
    seconds: float
    output: str


def find_test_files(test_dir: Path, areas: Sequence[str]) -> List[Path]:
    test_files = []
    for area in areas:
        area_path = test_dir / area
        if area_path.exists():
            test_files.extend(sorted(area_path.glob('test_*.py')))
    return test_files


def run_test(test_file: Path, repo_root: Path, timeout: int) -> TestResult:
    # run from the repository root so the local `statistics` package wins
    start = time.time()
    try:
        result = subprocess.run(
            [sys.executable, str(test_file)],
            capture_output=True,
            text=True,
            timeout=timeout,
            cwd=repo_root,
        )
        output = result.stdout if result.returncode == 0 else result.stderr or result.stdout
        return TestResult(test_file, result.returncode == 0, time.time() - start, output)
    except subprocess.TimeoutExpired:
        return TestResult(test_file, False, time.time() - start, f"Timed out after {timeout} seconds")


def main(argv: Sequence[str]) -> int:
    test_dir = Path(__file__).parent
    areas = list(argv) or TEST_AREAS
    unknown = [a for a in areas if a not in TEST_AREAS]
    if unknown:
        print(f"Unknown test area(s): {', '.join(unknown)}; choose from {', '.join(TEST_AREAS)}")
        return 2

    test_files = find_test_files(test_dir, areas)
    if not test_files:
        print("No test files found!")
        return 1

    slow = os.environ.get("GHLDA_SLOW_TESTS") == "1"
    timeout = SLOW_TIMEOUT if slow else TIMEOUT

    print("=" * 60)
    print(f"Running Topic Model Tests ({', '.join(areas)})" + (" [slow suites on]" if slow else ""))
    print("=" * 60)
    print(f"\nFound {len(test_files)} test file(s)\n")

    results = []
    for test_file in test_files:
        print(f"Running {test_file.relative_to(test_dir)}...", end=" ", flush=True)
        result = run_test(test_file, test_dir.parent, timeout)
        results.append(result)
        if result.success:
            print(f"✅ PASSED ({result.seconds:.1f}s)")
        else:
            print(f"❌ FAILED ({result.seconds:.1f}s)")
            print(f"  Error: {result.output[-400:]}")

    failed = [r for r in results if not r.success]
    print("\n" + "=" * 60)
    print("Test Summary")
    print("=" * 60)
    print(f"\nTotal: {len(results)} files in {sum(r.seconds for r in results):.1f}s")
    print(f"Passed: {len(results) - len(failed)} ✅")
    print(f"Failed: {len(failed)} ❌")
    for result in failed:
        print(f"  - {result.path.relative_to(test_dir)}")

    print("\n" + "=" * 60)
    print("🎉 All tests passed successfully!" if not failed else f"⚠️  {len(failed)} test file(s) failed.")
    print("=" * 60)
    return 0 if not failed else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))

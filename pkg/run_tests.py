#!/usr/bin/env python3
"""
Test runner script for the Zariski closure engine
"""
import os
import subprocess
import sys


def run_tests(fast: bool = False):
    """Run the test suite with coverage reporting."""
    print("Running Zariski closure engine test suite")
    print("=" * 50)

    if not os.path.exists("tests"):
        print("Error: tests directory not found. Please run from project root.")
        sys.exit(1)

    print("Installing test dependencies...")
    try:
        subprocess.run([sys.executable, "-m", "pip", "install", "-r", "requirements-test.txt"],
                       check=True, capture_output=True)
        print("Test dependencies installed")
    except subprocess.CalledProcessError as e:
        print(f"Failed to install test dependencies: {e}")
        sys.exit(1)

    command = [
        sys.executable, "-m", "pytest",
        "tests/",
        "-v",
        "--cov=modules",
        "--cov=main",
        "--cov-report=term-missing",
        "--cov-report=html:htmlcov",
    ]
    if fast:
        command += ["-m", "not slow"]

    print("\nRunning tests with coverage...")
    result = subprocess.run(command, check=False)
    if result.returncode == 0:
        print("\nAll tests passed!")
        print("Coverage report generated in htmlcov/index.html")
    else:
        print("\nSome tests failed!")
        sys.exit(1)


if __name__ == "__main__":
    run_tests(fast="--fast" in sys.argv[1:])

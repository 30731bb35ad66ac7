#!/usr/bin/env python3
"""Test script to verify the QES solver setup."""

import sys
from pathlib import Path

REQUIRED_PACKAGES = [
    ("numpy", "numpy"),
    ("scipy", "scipy"),
    ("sympy", "sympy"),
    ("pandas", "pandas"),
    ("dotenv", "python-dotenv"),
    ("yaml", "pyyaml"),
    ("rich", "rich"),
]

PACKAGE_MODULES = [
    "spiked_qes.polyalg",
    "spiked_qes.services.qes_core",
    "spiked_qes.services.wavefunction",
    "spiked_qes.services.spectral_verify",
    "spiked_qes.utils.config",
    "spiked_qes.utils.logger",
    "spiked_qes.manager",
    "spiked_qes.cli",
]


def test_imports():
    """Test that all required modules can be imported."""
    print("Testing imports...")

    import importlib

    ok = True
    for module, label in REQUIRED_PACKAGES + [(m, m) for m in PACKAGE_MODULES]:
        try:
            importlib.import_module(module)
            print(f"  ✓ {label}")
        except ImportError as e:
            print(f"  ✗ {label}: {e}")
            ok = False
    return ok


def test_config():
    """Test configuration loading."""
    print("\nTesting configuration...")

    try:
        from spiked_qes.utils.config import Config

        config = Config()
        is_valid, errors = config.validate()
        print(f"  ✓ Config loaded")
        print(f"    - Digits: {config.digits}")
        print(f"    - Grid points: {config.grid_points}")
        print(f"    - Logs folder: {config.logs_folder}")
        for error in errors:
            print(f"  ✗ {error}")

        return is_valid
    except Exception as e:
        print(f"  ✗ Config error: {e}")
        return False


def test_golden_tables():
    """Test that the packaged golden tables load and match the solver."""
    print("\nTesting golden tables...")

    try:
        from spiked_qes.services.qes_core import reduced_condition
        from spiked_qes.utils.golden import compare_with_golden, is_match, load_golden_tables

        rows = load_golden_tables()
        print(f"  ✓ Loaded {len(rows)} golden rows")

        ok = True
        for problem, row in sorted(rows.items(), key=lambda kv: (kv[0].parity.value, kv[0].N)):
            verdict = compare_with_golden(row, reduced_condition(problem).poly)
            mark = "✓" if is_match(verdict) else "✗"
            print(f"  {mark} {problem}: {verdict}")
            ok = ok and is_match(verdict)
        return ok
    except Exception as e:
        print(f"  ✗ Golden tables error: {e}")
        return False


def test_directories():
    """Test that required directories exist."""
    print("\nTesting directories...")

    project_root = Path.cwd()
    required_dirs = ["config", "src/spiked_qes", "tests"]

    all_exist = True
    for dir_name in required_dirs:
        if (project_root / dir_name).exists():
            print(f"  ✓ {dir_name}/")
        else:
            print(f"  ✗ {dir_name}/ not found")
            all_exist = False

    return all_exist


def main():
    """Run all tests."""
    print("=" * 60)
    print("  Spiked-oscillator QES solver - Setup Test")
    print("=" * 60)
    print()

    tests = [
        ("Imports", test_imports),
        ("Configuration", test_config),
        ("Directories", test_directories),
        ("Golden Tables", test_golden_tables),
    ]

    results = []
    for test_name, test_func in tests:
        try:
            result = test_func()
            results.append((test_name, result))
        except Exception as e:
            print(f"\n  ✗ {test_name} failed with exception: {e}")
            results.append((test_name, False))

    # Summary
    print("\n" + "=" * 60)
    print("  Test Summary")
    print("=" * 60)
    print()

    all_passed = True
    for test_name, result in results:
        status = "✓ PASS" if result else "✗ FAIL"
        print(f"  {status}: {test_name}")
        if not result:
            all_passed = False

    print()

    if all_passed:
        print("🎉 All tests passed! Your setup is ready.")
        print()
        print("Next steps:")
        print("  1. Optionally copy .env.example to .env and adjust the overrides")
        print("  2. Reproduce the tables:")
        print("     uv run spiked-qes tables")
        print("  3. Run the verification suite:")
        print("     ./run.sh")
        print()
        return 0
    else:
        print("❌ Some tests failed. Please check the errors above.")
        print()
        return 1


if __name__ == "__main__":
    sys.exit(main())

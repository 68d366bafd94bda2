#!/usr/bin/env python3
"""
Getting Started Script for weylcheck
Interactive setup: dependency check, .env run defaults and a smoke check

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

import importlib
import os
import platform
import sys
from pathlib import Path
from typing import Dict, Optional

ENV_KEYS = (
    ("WEYLCHECK_POINTS", "64", "sample points per task"),
    ("WEYLCHECK_SEED", "0", "Halton offset"),
    ("WEYLCHECK_TOL", "1e-7", "relative tolerance"),
    ("WEYLCHECK_WORKERS", "1", "worker threads (1 = serial)"),
    ("WEYLCHECK_FLOOR", "1e-10", "nondegeneracy floor"),
    ("WEYLCHECK_LOG_LEVEL", "WARNING", "logging level"),
)

REQUIRED_PACKAGES = (
    ("numpy", "numpy"),
    ("scipy", "scipy"),
    ("arpeggio", "arpeggio"),
    ("dotenv", "python-dotenv"),
)

SMOKE_ENTRY = "euclidean_r4"


def show_platform_info():
    """Show platform information"""
    print(f"🖥️  Detected OS: {platform.system()} {platform.release()}")
    print(f"🐍 Python: {sys.version.split()[0]} ({sys.executable})")
    print()


def print_banner():
    """Print welcome banner"""
    print("🚀 weylcheck - Getting Started")
    print("=" * 60)
    print("Numerical verification of harmonic morphisms between Weyl spaces.")
    print("Choose what you'd like to do from the menu below.")
    print()


def check_python_version() -> bool:
    """Check if Python version is adequate"""
    if sys.version_info < (3, 9):
        print("❌ Python 3.9+ is required. You have:", sys.version)
        return False
    print("✅ Python version check passed")
    return True


def check_dependencies() -> bool:
    """Check that the runtime packages import"""
    ok = True
    packages = list(REQUIRED_PACKAGES)
    packages.append(("tomllib", "Python 3.11+") if sys.version_info >= (3, 11) else ("tomli", "tomli"))
    for module, dist in packages:
        try:
            importlib.import_module(module)
            print(f"✅ {dist} found")
        except ImportError:
            print(f"❌ {dist} not found")
            ok = False
    if not ok:
        print("📦 Install with: pip install -r requirements.txt")
    return ok


def render_env(values: Optional[Dict[str, str]] = None) -> str:
    """Text of a .env file with every run default, overridden by ``values``."""
    values = values or {}
    lines = ["# weylcheck run defaults (command-line flags and [run] tables override these)", ""]
    for key, default, comment in ENV_KEYS:
        lines.append(f"# {comment}")
        lines.append(f"{key}={values.get(key, default)}")
    return "\n".join(lines) + "\n"


def setup_environment(env_file: Path = Path(".env"), interactive: bool = True) -> bool:
    """Write a .env file with the run defaults"""
    values: Dict[str, str] = {}
    if env_file.exists():
        print(f"⚠️  Environment file already exists at {env_file}")
        if not interactive or input("Do you want to overwrite it? (y/N): ").lower() != "y":
            print("✅ Using existing environment file")
            return True

    if interactive:
        print("💡 Press Enter to keep a default.")
        for key, default, comment in ENV_KEYS:
            answer = input(f"   {key} ({comment}) [{default}]: ").strip()
            if answer:
                values[key] = answer

    try:
        env_file.parent.mkdir(parents=True, exist_ok=True)
        env_file.write_text(render_env(values), encoding="utf-8")
    except PermissionError:
        print(f"❌ Permission denied: Cannot write {env_file}")
        return False
    except OSError as e:
        print(f"❌ System error writing {env_file}: {e}")
        return False
    print(f"✅ Run defaults written to {env_file}")
    return True


def run_smoke_check(points: int = 16) -> bool:
    """Run every expected task of the euclidean_r4 catalog entry"""
    try:
        from weylcheck import RunSettings, WeylCheckError, parse_declaration, run_tasks
        from weylcheck.catalog import entry
    except ImportError as e:
        print(f"❌ Cannot import weylcheck: {e}")
        return False

    found = entry(SMOKE_ENTRY)
    print(f"🔍 Smoke check on {SMOKE_ENTRY} ({points} points)...")
    try:
        decl = parse_declaration(found.text, found.name)
        reports = run_tasks(decl, list(found.expected), RunSettings(points=points))
    except WeylCheckError as e:
        print(f"❌ Smoke check failed: {e}")
        return False

    mismatches = [r.task for r in reports if r.verdict != found.expected[r.task]]
    for r in reports:
        icon = "✅" if r.verdict == found.expected[r.task] else "❌"
        print(f"   {icon} {r.task}: {r.verdict}")
    if mismatches:
        print(f"❌ Unexpected verdicts: {', '.join(mismatches)}")
        return False
    print("✅ Smoke check passed")
    return True


def show_main_menu():
    """Show main menu"""
    print("🛠️  Options:")
    print("1. 📦 Check dependencies")
    print("2. 📝 Write .env run defaults")
    print("3. 🔍 Run smoke check")
    print("4. 📚 Show usage")
    print("0. 🚪 Exit")
    print()


def handle_help():
    """Show command-line usage"""
    print("📚 Usage:")
    print("   python weyl_check.py tasks")
    print("   python weyl_check.py examples list")
    print("   python weyl_check.py examples emit gibbons_hawking --output-dir geometries")
    print("   python weyl_check.py check geometries/gibbons_hawking.toml --task morphism --json")
    print("   python weyl_check.py identity chain geometries/gibbons_hawking.toml")
    print(f"💡 Run defaults come from .env in {os.getcwd()}")


def main():
    """Main setup workflow"""
    print_banner()
    show_platform_info()

    print("🔍 Checking Python version...")
    if not check_python_version():
        sys.exit(1)
    print()

    while True:
        show_main_menu()
        choice = input("Select an option (0-4): ")

        if choice == "0":
            print("👋 Thanks for using weylcheck!")
            break
        elif choice == "1":
            check_dependencies()
        elif choice == "2":
            setup_environment()
        elif choice == "3":
            run_smoke_check()
        elif choice == "4":
            handle_help()
        else:
            print("❌ Invalid choice. Please select 0-4.")

        print("\n" + "=" * 60)


if __name__ == "__main__":
    main()

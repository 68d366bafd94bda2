#!/usr/bin/env python3
"""
Tests for getting_started.py - interactive setup, .env defaults and the smoke check.
"""

import platform
import sys
from pathlib import Path
from unittest.mock import MagicMock, patch

import pytest

# Add the project root to the path so we can import getting_started
sys.path.insert(0, str(Path(__file__).parent.parent))
import getting_started
from weylcheck.config import load_config


@pytest.mark.unit
class TestPlatformAndVersion:
    """Test platform display and the Python version gate."""

    def test_show_platform_info(self, capsys, monkeypatch):
        monkeypatch.setattr(platform, "system", lambda: "Linux")
        monkeypatch.setattr(platform, "release", lambda: "6.1.0")
        getting_started.show_platform_info()
        captured = capsys.readouterr()
        assert "Linux 6.1.0" in captured.out
        assert "🐍 Python:" in captured.out

    def test_banner(self, capsys):
        getting_started.print_banner()
        assert "🚀 weylcheck - Getting Started" in capsys.readouterr().out

    def test_python_version_passes(self, capsys):
        assert getting_started.check_python_version()
        assert "✅ Python version check passed" in capsys.readouterr().out

    def test_python_version_too_old(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, "version_info", (3, 8, 10))
        assert not getting_started.check_python_version()
        assert "Python 3.9+ is required" in capsys.readouterr().out


@pytest.mark.unit
class TestDependencies:
    """Test the runtime package check."""

    def test_all_present(self, capsys):
        with patch("getting_started.importlib.import_module", return_value=MagicMock()):
            assert getting_started.check_dependencies()
        out = capsys.readouterr().out
        assert "✅ numpy found" in out
        assert "✅ python-dotenv found" in out

    def test_missing_package(self, capsys):
        def fake_import(name):
            if name == "scipy":
                raise ImportError(name)
            return MagicMock()

        with patch("getting_started.importlib.import_module", side_effect=fake_import):
            assert not getting_started.check_dependencies()
        out = capsys.readouterr().out
        assert "❌ scipy not found" in out
        assert "pip install -r requirements.txt" in out


@pytest.mark.unit
class TestEnvironmentSetup:
    """Test writing the .env run defaults."""

    def test_render_env_defaults(self):
        text = getting_started.render_env()
        assert "WEYLCHECK_POINTS=64" in text
        assert "WEYLCHECK_LOG_LEVEL=WARNING" in text
        assert text.endswith("\n")

    def test_render_env_overrides(self):
        text = getting_started.render_env({"WEYLCHECK_SEED": "5"})
        assert "WEYLCHECK_SEED=5" in text
        assert "WEYLCHECK_SEED=0" not in text

    def test_written_file_loads(self, temp_directory, capsys):
        """Test that the generated file is read back by the config loader."""
        env_file = temp_directory / "conf" / ".env"
        assert getting_started.setup_environment(env_file, interactive=False)
        assert "✅ Run defaults written" in capsys.readouterr().out
        settings = load_config(str(env_file))
        assert settings.points == 64
        assert settings.tol == 1e-7

    def test_interactive_answers(self, temp_directory):
        env_file = temp_directory / ".env"
        answers = ["32", "", "1e-6", "", "", "info"]
        with patch("builtins.input", side_effect=answers):
            assert getting_started.setup_environment(env_file)
        settings = load_config(str(env_file))
        assert settings.points == 32
        assert settings.seed == 0
        assert settings.tol == 1e-6
        assert settings.log_level == "INFO"

    def test_existing_file_kept(self, temp_directory, capsys):
        env_file = temp_directory / ".env"
        env_file.write_text("WEYLCHECK_POINTS=5\n")
        with patch("builtins.input", return_value="n"):
            assert getting_started.setup_environment(env_file)
        assert env_file.read_text() == "WEYLCHECK_POINTS=5\n"
        assert "Using existing environment file" in capsys.readouterr().out

    def test_permission_error(self, temp_directory, capsys):
        env_file = temp_directory / ".env"
        with patch.object(Path, "write_text", side_effect=PermissionError("denied")):
            assert not getting_started.setup_environment(env_file, interactive=False)
        assert "Permission denied" in capsys.readouterr().out


@pytest.mark.unit
class TestSmokeCheck:
    """Test the catalog smoke check."""

    @pytest.mark.slow
    def test_smoke_check_passes(self, capsys):
        assert getting_started.run_smoke_check(points=8)
        out = capsys.readouterr().out
        assert "✅ Smoke check passed" in out
        assert "asd: pass" in out

    def test_unexpected_verdict(self, capsys):
        report = MagicMock(task="asd", verdict="fail")
        with patch("weylcheck.run_tasks", return_value=[report]):
            assert not getting_started.run_smoke_check(points=4)
        assert "❌ Unexpected verdicts: asd" in capsys.readouterr().out


@pytest.mark.unit
class TestMainMenu:
    """Test the interactive loop."""

    def test_help_then_exit(self, capsys):
        with patch("builtins.input", side_effect=["4", "9", "0"]):
            getting_started.main()
        out = capsys.readouterr().out
        assert "python weyl_check.py tasks" in out
        assert "❌ Invalid choice" in out
        assert "👋 Thanks for using weylcheck!" in out

    def test_old_python_exits(self, monkeypatch):
        monkeypatch.setattr(sys, "version_info", (3, 7, 0))
        with pytest.raises(SystemExit) as exc_info:
            getting_started.main()
        assert exc_info.value.code == 1

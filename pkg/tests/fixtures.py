# Copyright (C) 2024 twyleg
import pytest
import shutil
import logging
from pathlib import Path

from twisted_sums.zeta import default_zeros


FILE_DIR = Path(__file__).parent


@pytest.fixture(autouse=True)
def print_tmp_path(tmp_path):
    logging.info("tmp_path: %s", tmp_path)
    return None


@pytest.fixture
def project_dir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("TWISTED_SUMS_THREADS", raising=False)
    monkeypatch.delenv("TWISTED_SUMS_ZEROS", raising=False)
    return tmp_path


def create_valid_config_file(dst_filepath: Path):
    log_config_template_filepath = FILE_DIR / "resources/logging_configs/valid_logging_config.yaml"
    dst_filepath.parent.mkdir(parents=True, exist_ok=True)
    shutil.copy(log_config_template_filepath, dst_filepath)
    return dst_filepath


@pytest.fixture
def valid_custom_logging_config(tmp_path):
    return create_valid_config_file(tmp_path / "logging.yaml")


@pytest.fixture
def valid_custom_logging_config_with_alternative_name_in_alternative_directory(tmp_path):
    return create_valid_config_file(tmp_path / "subdir/alternative_logging_config.yaml")


def copy_application_config(template_name: str, dst_filepath: Path) -> Path:
    shutil.copy(FILE_DIR / "resources/application_configs" / template_name, dst_filepath)
    return dst_filepath


@pytest.fixture
def valid_application_config_in_cwd(tmp_path):
    return copy_application_config("valid_test_application_config.json", tmp_path / "test_application_config.json")


@pytest.fixture
def invalid_application_config_in_cwd(tmp_path):
    return copy_application_config("invalid_test_application_config.json", tmp_path / "test_application_config.json")


@pytest.fixture
def valid_twisted_sums_config_in_cwd(tmp_path):
    return copy_application_config("valid_test_application_config.json", tmp_path / "twisted_sums_config.json")


@pytest.fixture
def invalid_twisted_sums_config_in_cwd(tmp_path):
    return copy_application_config("invalid_test_application_config.json", tmp_path / "twisted_sums_config.json")


@pytest.fixture(scope="session")
def zeros():
    return default_zeros()

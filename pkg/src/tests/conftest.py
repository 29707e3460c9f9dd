# tests/conftest.py
import pytest
import tempfile
from pathlib import Path
from src.utils.config_manager import ConfigManager
from src.utils.export_manager import ExportManager
from src.features.finitefield import field_make
from src.features.codes import (
    Code,
    construct_extended_binary_hamming,
    construct_extended_rs,
    construct_hamming,
)

@pytest.fixture
def temp_dir():
    """Provide temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmp_dir:
        yield Path(tmp_dir)

@pytest.fixture
def config(temp_dir):
    """Provide test configuration."""
    config_file = temp_dir / "config.json"
    config = ConfigManager(str(config_file))
    config.update({
        "enumeration": {"cap": 2 ** 24},
        "runtime": {"threads": 2}
    })
    return config

@pytest.fixture
def export_manager():
    return ExportManager()

@pytest.fixture
def gf2():
    return field_make(2, 1)

@pytest.fixture
def gf4():
    return field_make(2, 2)

@pytest.fixture
def repetition4():
    """{0000, 1111}: the extended Hamming code of length 4."""
    return construct_extended_binary_hamming(2)

@pytest.fixture
def hexacode():
    """[6,3,4] hyperoval code over GF(4)."""
    return construct_extended_rs(2)

@pytest.fixture
def hamming7(gf2):
    return construct_hamming(gf2, 3)

@pytest.fixture
def code_file(temp_dir, export_manager):
    """Write a code into the temporary directory and return its path."""
    def _write(code: Code, name: str = "code.code") -> Path:
        path = temp_dir / name
        export_manager.write_code(code, path)
        return path
    return _write

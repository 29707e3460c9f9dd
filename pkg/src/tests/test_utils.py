# tests/test_utils.py
import io
import json
import logging
import pytest
from fractions import Fraction

from src.constants import DEFAULT_ENUMERATION_CAP, EXIT_INTERNAL, EXIT_USAGE
from src.features.codes import Code
from src.features.exact import RationalMatrix
from src.features.graph import distance_partition
from src.utils.config_manager import ConfigManager
from src.utils.error_handler import CodeFormatError, ErrorHandler, InvalidParameterError
from src.utils.performance import PerformanceUtils, parallel_map, resolve_workers


class TestConfigManager:
    def test_defaults_written(self, temp_dir):
        """Test that defaults are written."""
        path = temp_dir / "config.json"
        config = ConfigManager(str(path))
        assert path.exists()
        assert config.get("enumeration.cap") == DEFAULT_ENUMERATION_CAP

    def test_in_memory(self, temp_dir):
        """Test in-memory configuration."""
        config = ConfigManager()
        assert config.get("search.pool_cap") == 10 ** 4
        assert config.get("missing.key", 5) == 5
        assert list(temp_dir.iterdir()) == []

    def test_update_merges(self, config):
        """Test configuration merging."""
        assert config.get("enumeration.cap") == 2 ** 24
        assert config.get("runtime.threads") == 2
        assert config.get("runtime.output_format") == "pretty"

    def test_reload(self, config):
        """Test reloading."""
        reloaded = ConfigManager(str(config.config_file))
        assert reloaded.get("enumeration.cap") == 2 ** 24

    def test_set_and_reset(self, config):
        """Test set and reset."""
        config.set("feasibility.trial_division_bound", 1000)
        assert config.get("feasibility.trial_division_bound") == 1000
        config.reset_to_defaults()
        assert config.get("enumeration.cap") == DEFAULT_ENUMERATION_CAP

    def test_export_import(self, config, temp_dir):
        """Test configuration export and import."""
        target = temp_dir / "exported.json"
        assert config.export_config(str(target))
        fresh = ConfigManager()
        assert fresh.import_config(str(target))
        assert fresh.get("enumeration.cap") == 2 ** 24

    def test_corrupt_file(self, temp_dir):
        """Test a corrupt configuration file."""
        path = temp_dir / "config.json"
        path.write_text("{not json")
        config = ConfigManager(str(path))
        assert config.get("enumeration.cap") == DEFAULT_ENUMERATION_CAP

    def test_invalid_values_are_repaired(self, temp_dir):
        """Test configuration repair."""
        path = temp_dir / "config.json"
        path.write_text(json.dumps({
            "enumeration": {"cap": -1},
            "search": {"pool_cap": "many"},
            "runtime": {"threads": 3, "output_format": "xml"},
        }))
        config = ConfigManager(str(path))
        assert config.get("enumeration.cap") == DEFAULT_ENUMERATION_CAP
        assert config.get("search.pool_cap") == 10 ** 4
        assert config.get("runtime.output_format") == "pretty"
        assert config.get("runtime.threads") == 3
        assert config.problems() == []

    def test_feasibility_limits(self, config):
        """Test feasibility limits."""
        config.set("feasibility.trial_division_bound", 500)
        limits = config.feasibility_limits()
        assert limits["bound"] == 500
        assert set(limits) == {"exact_value_limit", "bits_cap", "bound"}


class TestErrorHandler:
    def test_exit_codes(self):
        """Test exit codes."""
        handler = ErrorHandler("ERROR")
        assert handler.handle_error(InvalidParameterError("bad"), context="test") == EXIT_USAGE
        assert handler.handle_error(RuntimeError("boom"), context="test") == EXIT_INTERNAL

    def test_log_file(self, temp_dir):
        """Records reach the log file; the root logger goes back to stderr afterwards."""
        log_file = temp_dir / "logs" / "run.log"
        handler = ErrorHandler("INFO", str(log_file))
        try:
            logging.getLogger("src.tests").info("hello")
            handler.handle_error(InvalidParameterError("bad"))
        finally:
            # force=True closes and drops the file handler before temp_dir is removed
            ErrorHandler("WARNING")
        assert not any(str(temp_dir) in getattr(h, "baseFilename", "") for h in logging.getLogger().handlers)
        text = log_file.read_text()
        assert "hello" in text
        assert "InvalidParameterError: bad" in text


class TestExportManager:
    def test_code_roundtrip(self, export_manager, hexacode, code_file):
        """Test code file write and read."""
        path = code_file(hexacode)
        text = path.read_text()
        assert text.startswith("# PerfectCodes 1.0.0\n")
        assert "# field: GF(2^2) modulus 1 1 1" in text
        code = export_manager.read_code(path)
        assert code.word_list() == hexacode.word_list()
        assert code.parameters["construction"] == "extended-rs"

    def test_comments_and_blank_lines(self, export_manager):
        """Test comments and blank lines."""
        code = export_manager.read_code(io.StringIO("# note\n\n2 3\n0 1\n# inline\n2 2\n"))
        assert code.word_list() == [(0, 1), (2, 2)]

    @pytest.mark.parametrize("text", [
        "",
        "2 2\n",
        "2\n0 1\n",
        "2 2\n0 1 1\n",
        "2 2\n0 2\n",
        "2 2\n1 1\n1 1\n",
        "# PerfectCodes 9.0.0\n2 2\n0 0\n",
    ])
    def test_malformed(self, export_manager, text):
        """Test malformed code files."""
        with pytest.raises(CodeFormatError):
            export_manager.parse_code(text)

    def test_missing_file(self, export_manager, temp_dir):
        """Test a missing file."""
        with pytest.raises(CodeFormatError):
            export_manager.read_code(temp_dir / "absent.code")

    def test_json_is_sorted(self, export_manager):
        """Test sorted JSON."""
        text = export_manager.to_json({"b": Fraction(1, 2), "a": RationalMatrix([[1]])})
        data = json.loads(text)
        assert list(data) == ["a", "b", "version"]
        assert data["b"] == {"num": 1, "den": 2}
        assert data["a"] == [[{"num": 1, "den": 1}]]

    def test_render_matrix(self, export_manager):
        """Test matrix rendering."""
        rendered = export_manager.render_matrix(RationalMatrix([[0, 18], [Fraction(1, 3), 2]]), indent="")
        assert rendered.splitlines() == ["  0  18", "1/3   2"]

    def test_tsv(self, export_manager):
        """Test TSV output."""
        assert export_manager.to_tsv(["n", "q"], [[2, 3]]) == "n\tq\n2\t3"

    def test_export_partition(self, export_manager, temp_dir):
        """Test partition export."""
        record = distance_partition(Code.from_words(2, 2, [[0, 0]]).ranks(), 2, 2)
        path = temp_dir / "partition.txt"
        export_manager.export_partition(record, path)
        assert path.read_text().splitlines() == ["2 2 3", "0 0", "1 1", "2 1", "3 2"]


class TestPerformance:
    def test_parallel_map_keeps_order(self):
        """Test parallel map ordering."""
        items = list(range(50))
        assert parallel_map(lambda v: v * v, items, workers=4) == [v * v for v in items]
        assert parallel_map(lambda v: v, [], workers=4) == []

    def test_resolve_workers(self):
        """Test worker resolution."""
        assert resolve_workers(3) == 3
        assert resolve_workers(0) >= 1
        assert resolve_workers(None) >= 1

    def test_measure_time(self):
        """Test performance monitoring."""
        perf = PerformanceUtils()
        with perf.measure_time("work"):
            sum(range(1000))
        assert perf.timings["work"] >= 0
        assert perf.get_memory_usage() > 0

    def test_timeit(self):
        """Test the timeit decorator."""
        @PerformanceUtils.timeit
        def double(v):
            return 2 * v
        assert double(4) == 8

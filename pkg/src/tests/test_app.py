# tests/test_app.py
import json
import pytest

from src.app import RunConfig, main, parse_args, run
from src.constants import EXIT_OK, EXIT_REJECTED, EXIT_USAGE
from src.features.codes import Code, construct_extended_rs
from src.utils.error_handler import InvalidParameterError


class TestParseArgs:
    def test_global_options(self):
        """Test global options ahead of the subcommand."""
        config = parse_args(["--cap", "1000", "--threads", "2", "--format", "json",
                             "krawtchouk", "--r", "1", "--x", "0", "--q", "2", "--n", "3"])
        assert config.subcommand == "krawtchouk"
        assert (config.cap, config.threads, config.output_format) == (1000, 2, "json")
        assert config.parameters == {"r": 1, "x": 0, "q": 2, "n": 3}

    def test_missing_subcommand(self):
        """Test that a bare invocation is a usage error."""
        with pytest.raises(SystemExit) as exc:
            parse_args([])
        assert exc.value.code == 2

    def test_invalid_cap(self):
        """Test cap validation."""
        with pytest.raises(InvalidParameterError):
            RunConfig("scan", cap=0)


class TestCommands:
    def test_krawtchouk(self, capsys):
        """Test the krawtchouk command."""
        assert main(["krawtchouk", "--r", "6", "--x", "0", "--q", "4", "--n", "6"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "729"

    def test_feasibility_excluded(self, capsys):
        """Test an excluded pair."""
        assert main(["feasibility", "--n", "5", "--q", "3"]) == EXIT_REJECTED
        assert "theorem1: residue 1 mod 2" in capsys.readouterr().out

    def test_feasibility_admissible_json(self, capsys):
        """Test JSON output for an admissible pair."""
        assert main(["--format", "json", "feasibility", "--n", "6", "--q", "4", "--full"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["verdict"] == "admissible"
        assert data["version"] == "1.0.0"

    def test_json_is_deterministic(self, capsys):
        """Test that repeated runs print identical JSON."""
        argv = ["--format", "json", "classify", "--p", "3", "--m", "1", "--kmax", "4"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first

    def test_construct_and_verify(self, temp_dir, capsys):
        """Test construct followed by verify."""
        path = temp_dir / "hexacode.code"
        assert main(["construct", "extended-rs", "--m", "2", "--output", str(path)]) == EXIT_OK
        assert main(["verify", "--mode", "extended-perfect", str(path)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "prop1: accept" in out
        assert "quotient matrix" in out

    def test_verify_all_json(self, code_file, hexacode, capsys):
        """Test verify with every route."""
        path = code_file(hexacode)
        assert main(["--format", "json", "verify", str(path)]) == EXIT_OK
        reports = json.loads(capsys.readouterr().out)["reports"]
        assert [r["route"] for r in reports] == ["prop1", "puncture", "fast"]
        assert all(r["verdict"] == "accept" for r in reports)

    def test_verify_reject(self, code_file, capsys):
        """Test a rejected code."""
        path = code_file(Code.from_words(3, 2, [[0, 0, 0]]))
        assert main(["verify", "--mode", "perfect", str(path)]) == EXIT_REJECTED
        assert "vertex 111" in capsys.readouterr().out

    def test_cap_exceeded(self, code_file, hexacode):
        """Test the enumeration cap."""
        path = code_file(hexacode)
        assert main(["--cap", "10", "verify", "--mode", "extended-perfect", str(path)]) == EXIT_USAGE

    def test_malformed_code_file(self, temp_dir):
        """Test malformed code files."""
        path = temp_dir / "bad.code"
        path.write_text("2 2\n0 1\n0 1\n")
        assert main(["verify", str(path)]) == EXIT_USAGE
        path.write_text("2 2\n0 x\n")
        assert main(["verify", str(path)]) == EXIT_USAGE

    def test_quotient_theoretical(self, capsys):
        """Test the closed-form quotient."""
        argv = ["--format", "json", "quotient", "--theoretical", "--n", "6", "--q", "4", "--dist", "6"]
        assert main(argv) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["quotient"][2][0] == {"num": 11, "den": 1}

    def test_quotient_enumerated(self, code_file, repetition4, temp_dir, capsys):
        """Test the enumerated quotient and partition export."""
        path = code_file(repetition4)
        partition = temp_dir / "partition.txt"
        argv = ["quotient", str(path), "--export-partition", str(partition)]
        assert main(argv) == EXIT_OK
        assert "covering_radius=2" in capsys.readouterr().out
        lines = partition.read_text().splitlines()
        assert lines[0] == "4 2 3"
        assert lines[1] == "0 0"
        assert len(lines) == 17

    def test_scan_rejects_non_prime_power(self):
        """Test scan with a composite alphabet."""
        assert main(["scan", "--q", "6", "--kmax", "2"]) == EXIT_USAGE

    def test_scan_table(self, capsys):
        """Test the scan table."""
        assert main(["scan", "--qmax", "4", "--kmax", "3"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "n\tq"
        assert len(lines) == 7

    def test_witness(self, capsys):
        """Test the witness command."""
        assert main(["witness", "--p", "3", "--m", "1", "--k", "3"]) == EXIT_OK
        assert "OrderA" in capsys.readouterr().out

    def test_search_count(self, capsys):
        """Test search counting."""
        assert main(["search", "--n", "4", "--q", "2", "--no-normalize", "--count-only"]) == EXIT_OK
        assert "8 codes" in capsys.readouterr().out

    def test_search_writes_codes(self, temp_dir, export_manager):
        """Test that search writes one file per code."""
        out_dir = temp_dir / "found"
        assert main(["search", "--n", "4", "--q", "2", "--output-dir", str(out_dir)]) == EXIT_OK
        files = sorted(out_dir.glob("*.code"))
        assert len(files) == 1
        assert export_manager.read_code(files[0]).word_list() == [(0, 0, 0, 0), (1, 1, 1, 1)]

    def test_search_refuses_intractable_space(self):
        """H(6,4) has a pool under the cap but far too many subsets."""
        assert main(["search", "--n", "6", "--q", "4", "--count-only"]) == EXIT_USAGE

    def test_construct_trivial(self, capsys):
        """The trivial family writes the single word 00."""
        assert main(["construct", "trivial", "--q", "3"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "# alphabet: 3" in out
        assert out.rstrip().splitlines()[-2:] == ["2 3", "0 0"]

    def test_construct_auto_length_two(self, capsys):
        """auto dispatches n=2 to the trivial family."""
        assert main(["construct", "auto", "--n", "2", "--q", "5"]) == EXIT_OK
        assert "# construction: trivial" in capsys.readouterr().out

    def test_modulus_override(self, capsys):
        """Test a custom field modulus."""
        config = RunConfig("construct", {"family": "extended-rs", "m": 3}, modulus="1 0 1 1")
        assert run(config) == EXIT_OK
        assert "modulus 1 0 1 1" in capsys.readouterr().out

    def test_reducible_modulus(self):
        """Test a reducible modulus."""
        config = RunConfig("construct", {"family": "extended-rs", "m": 2}, modulus="1 0 1")
        assert run(config) == EXIT_USAGE

    def test_unknown_subcommand(self):
        """Test an unknown subcommand."""
        assert run(RunConfig("decode")) == EXIT_USAGE

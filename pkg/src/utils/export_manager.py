# src/utils/export_manager.py
import io
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, TextIO, Union

from packaging import version

from src.constants import APP_NAME, APP_VERSION, ERROR_MESSAGES
from src.features.codes import Code
from src.features.exact import RationalMatrix
from src.features.graph import DistancePartitionRecord
from src.utils.error_handler import CodeFormatError

PathOrStream = Union[str, Path, TextIO]


class ExportManager:
    """Readers and writers for code files, partitions and reports."""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def write_code(self, code: Code, target: PathOrStream) -> None:
        """Header comments, then "n q", then one word per line."""
        lines = [f"# {APP_NAME} {APP_VERSION}"]
        for key in sorted(code.parameters):
            lines.append(f"# {key}: {code.parameters[key]}")
        lines.append(f"{code.n} {code.q}")
        lines.extend(" ".join(str(s) for s in word) for word in code.word_list())
        text = "\n".join(lines) + "\n"

        if isinstance(target, (str, Path)):
            try:
                Path(target).write_text(text)
            except OSError as e:
                raise CodeFormatError(f"cannot write {target}: {e}") from e
            self.logger.info(f"Wrote {code.size} codewords to {target}")
        else:
            target.write(text)

    def read_code(self, source: PathOrStream) -> Code:
        if isinstance(source, (str, Path)):
            try:
                text = Path(source).read_text()
            except OSError as e:
                raise CodeFormatError(f"cannot read {source}: {e}") from e
        else:
            text = source.read()
        return self.parse_code(text)

    def parse_code(self, text: str) -> Code:
        parameters: Dict[str, str] = {}
        header = None
        words: List[List[int]] = []
        seen = set()

        for line_no, raw in enumerate(io.StringIO(text), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                self._parse_comment(line[1:].strip(), parameters)
                continue
            try:
                values = [int(tok) for tok in line.split()]
            except ValueError:
                raise CodeFormatError(f"line {line_no}: non-integer token in {line!r}")

            if header is None:
                if len(values) != 2:
                    raise CodeFormatError(f"line {line_no}: expected 'n q', got {line!r}")
                header = values
                continue
            n, q = header
            if len(values) != n:
                raise CodeFormatError(f"line {line_no}: word of length {len(values)}, expected {n}")
            if any(not 0 <= s < q for s in values):
                raise CodeFormatError(f"line {line_no}: symbol outside [0, {q})")
            key = tuple(values)
            if key in seen:
                raise CodeFormatError(ERROR_MESSAGES["duplicate_word"].format(line=line_no, word=line))
            seen.add(key)
            words.append(values)

        if header is None:
            raise CodeFormatError("missing 'n q' header line")
        if not words:
            raise CodeFormatError(ERROR_MESSAGES["empty_code"])
        n, q = header
        if n < 1 or q < 2:
            raise CodeFormatError(f"invalid parameters n={n}, q={q}")
        return Code.from_words(n, q, words, **parameters)

    def _parse_comment(self, body: str, parameters: Dict[str, str]) -> None:
        if body.startswith(APP_NAME):
            written = body[len(APP_NAME):].strip()
            try:
                if version.parse(written).major > version.parse(APP_VERSION).major:
                    raise CodeFormatError(f"code file written by a newer version ({written})")
            except version.InvalidVersion:
                self.logger.warning(f"Unrecognized version tag {written!r} in code file header")
            return
        key, sep, value = body.partition(":")
        if sep:
            parameters[key.strip()] = value.strip()

    def export_partition(self, record: DistancePartitionRecord, path: Union[str, Path]) -> None:
        """One "rank cell" line per vertex, after an "n q r" header."""
        with open(path, "w") as f:
            f.write(f"{record.n} {record.q} {record.partition.r}\n")
            for line in record.partition.lines():
                f.write(line + "\n")
        self.logger.info(f"Exported distance partition of H({record.n},{record.q}) to {path}")

    def to_json(self, payload: Dict[str, Any]) -> str:
        """Stable JSON: sorted keys, fixed indentation, no timestamps."""
        data = {"version": APP_VERSION, **payload}
        return json.dumps(data, indent=2, sort_keys=True, default=_json_default)

    def to_tsv(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        lines = ["\t".join(header)]
        lines.extend("\t".join(str(v) for v in row) for row in rows)
        return "\n".join(lines)

    def render_matrix(self, matrix: RationalMatrix, indent: str = "  ") -> str:
        """Right-aligned exact entries, one row per line."""
        cells = [[str(v) for v in row] for row in matrix]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(indent + " ".join(c.rjust(width) for c in row) for row in cells)


def _json_default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, RationalMatrix):
        return value.to_json()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


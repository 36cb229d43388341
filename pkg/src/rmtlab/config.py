"""Key-value configuration documents for the experiment runner.

A small TOML-subset reader: single-level ``[tables]``, bare keys, and
string / integer / float / boolean / single-line array values, with
``#`` comments.  The parser records the line of every key so validation
errors (unknown key, missing key, type mismatch) point at the offending
line; stock TOML readers do not expose key positions.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from .errors import ConfigError

__all__ = ["ConfigProblem", "parse_document", "canonical_text", "config_hash"]

_BARE_KEY = re.compile(r"^[A-Za-z0-9_-]+$")


@dataclass(frozen=True)
class ConfigProblem:
    line: Optional[int]
    message: str

    def __str__(self):
        where = f"line {self.line}: " if self.line is not None else ""
        return where + self.message


def _strip_comment(line: str) -> str:
    out = []
    in_str = False
    for ch in line:
        if ch == '"':
            in_str = not in_str
        if ch == "#" and not in_str:
            break
        out.append(ch)
    return "".join(out)


def _parse_scalar(tok: str, line_no: int, problems):
    tok = tok.strip()
    if tok.startswith('"'):
        if not (tok.endswith('"') and len(tok) >= 2):
            problems.append(ConfigProblem(line_no, f"unterminated string {tok!r}"))
            return None
        return tok[1:-1].replace('\\"', '"').replace("\\\\", "\\")
    if tok in ("true", "false"):
        return tok == "true"
    try:
        if re.fullmatch(r"[+-]?\d+", tok):
            return int(tok)
        return float(tok)
    except ValueError:
        problems.append(ConfigProblem(line_no, f"cannot parse value {tok!r}"))
        return None


def _split_array_items(body: str, line_no: int, problems):
    items, depth, cur, in_str = [], 0, [], False
    for ch in body:
        if ch == '"':
            in_str = not in_str
        if not in_str:
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
            elif ch == "," and depth == 0:
                items.append("".join(cur))
                cur = []
                continue
        cur.append(ch)
    tail = "".join(cur).strip()
    if tail:
        items.append(tail)
    if depth != 0 or in_str:
        problems.append(ConfigProblem(line_no, "malformed array"))
    return [s.strip() for s in items if s.strip()]


def _parse_value(tok: str, line_no: int, problems):
    tok = tok.strip()
    if tok.startswith("["):
        if not tok.endswith("]"):
            problems.append(ConfigProblem(line_no, "arrays must close on the same line"))
            return None
        return [_parse_scalar(s, line_no, problems)
                for s in _split_array_items(tok[1:-1], line_no, problems)]
    return _parse_scalar(tok, line_no, problems)


def parse_document(text: str) -> Tuple[Dict[str, Any], Dict[tuple, int]]:
    """Parse the document into nested dicts plus a key-path -> line map.

    Raises ConfigError listing every syntax problem with its line.
    """
    data: Dict[str, Any] = {}
    locations: Dict[tuple, int] = {}
    problems: list = []
    table: Optional[str] = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                problems.append(ConfigProblem(line_no, f"malformed table header {line!r}"))
                continue
            name = line[1:-1].strip()
            if not _BARE_KEY.match(name):
                problems.append(ConfigProblem(line_no, f"invalid table name {name!r}"))
                continue
            table = name
            data.setdefault(table, {})
            locations[(table,)] = line_no
            continue
        if "=" not in line:
            problems.append(ConfigProblem(line_no, f"expected key = value, got {line!r}"))
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        if not _BARE_KEY.match(key):
            problems.append(ConfigProblem(line_no, f"invalid key {key!r}"))
            continue
        parsed = _parse_value(value, line_no, problems)
        target = data if table is None else data[table]
        path = (key,) if table is None else (table, key)
        if path in locations:
            problems.append(ConfigProblem(line_no, f"duplicate key {'.'.join(path)!r}"))
            continue
        target[key] = parsed
        locations[path] = line_no

    if problems:
        raise ConfigError(problems)
    return data, locations


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_format_value(x) for x in v) + "]"
    raise TypeError(f"unsupported config value {v!r}")


def canonical_text(data: Dict[str, Any]) -> str:
    """Serialize to the canonical document: sorted keys, tables last.

    Parsing the canonical text and re-serializing is a fixed point, which
    makes the config hash stable across round trips.
    """
    lines = []
    scalars = sorted(k for k, v in data.items() if not isinstance(v, dict))
    tables = sorted(k for k, v in data.items() if isinstance(v, dict))
    for k in scalars:
        lines.append(f"{k} = {_format_value(data[k])}")
    for t in tables:
        lines.append(f"[{t}]")
        for k in sorted(data[t]):
            lines.append(f"{k} = {_format_value(data[t][k])}")
    return "\n".join(lines) + "\n"


def config_hash(data: Dict[str, Any]) -> str:
    """Stable digest of the canonicalized configuration."""
    return hashlib.sha256(canonical_text(data).encode()).hexdigest()

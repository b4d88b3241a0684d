"""Line-oriented DSL for matrix descriptions.

    universe finite <name>+
    universe tracks <name>+
    default <0|1>
    rect rows <setexpr> cols <setexpr> value <0|1>
    diag row <T>[n+<p>] col <U>[n+<q>] for n>=<n0> [step <d>] value <0|1>
    except <index> <index> value <0|1>

setexpr is a comma-separated union of brace groups and track tails:
`{x[1], a, y[3..]}`, `y[*]`, `z[2..]`, `z[2.. step 3]`.  `#` starts a
comment.  Parse errors carry line and column.
"""

from __future__ import annotations

import re

from .matrix import DiagRule, MatrixSpec, RectRule
from .universe import BitStream, IndexSet, Universe


class DslError(ValueError):
    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


_DIAG_RE = re.compile(
    r"^diag\s+row\s+(\w+)\[n(?:\+(\d+))?\]\s+col\s+(\w+)\[n(?:\+(\d+))?\]"
    r"\s+for\s+n>=(\d+)(?:\s+step\s+(\d+))?\s+value\s+([01])$"
)
_RECT_RE = re.compile(r"^rect\s+rows\s+(.*\S)\s+cols\s+(.*\S)\s+value\s+([01])$")
_EXCEPT_RE = re.compile(r"^except\s+(\S+)\s+(\S+)\s+value\s+([01])$")
_TAIL_RE = re.compile(r"^(\w+)\[(?:\*|(\d+)\.\.(?:\s*step\s+(\d+))?)\]$")


def _split_commas(text: str) -> list:
    """Split on commas outside braces."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "{":
            depth += 1
            cur.append(ch)
        elif ch == "}":
            depth -= 1
            cur.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur).strip())
    return [p for p in parts if p]


def parse_set(universe: Universe, text: str, line: int = 0) -> IndexSet:
    """Parse a setexpr over the given universe."""
    result = universe.empty_set()
    for atom in _split_commas(text):
        if atom.startswith("{"):
            if not atom.endswith("}"):
                raise DslError(f"unbalanced braces in {atom!r}", line)
            for item in _split_commas(atom[1:-1]):
                result = result.union(_parse_atom(universe, item, line))
        else:
            result = result.union(_parse_atom(universe, atom, line))
    return result


def _parse_atom(universe: Universe, item: str, line: int) -> IndexSet:
    m = _TAIL_RE.match(item)
    if m and (m.group(2) is not None or item.endswith("[*]")):
        track = m.group(1)
        if universe.kind != "tracked" or track not in universe.names:
            raise DslError(f"unknown track {track!r}", line)
        start = int(m.group(2)) if m.group(2) else 1
        step = int(m.group(3)) if m.group(3) else 1
        if start < 1 or step < 1:
            raise DslError(f"bad tail bounds in {item!r}", line)
        return IndexSet(universe, tracks={track: BitStream.tail(start, step)})
    try:
        idx = universe.parse_index(item)
    except ValueError as e:
        raise DslError(str(e), line) from None
    return IndexSet.of(universe, [idx])


def parse_spec(text: str) -> MatrixSpec:
    """Parse a DSL document into a validated MatrixSpec."""
    universe = None
    default = 0
    saw_default = False
    rules = []
    exceptions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "universe":
            if universe is not None:
                raise DslError("duplicate universe declaration", lineno)
            if len(words) < 3 or words[1] not in ("finite", "tracks"):
                raise DslError("expected 'universe finite <name>+' or 'universe tracks <name>+'", lineno)
            kind = "finite" if words[1] == "finite" else "tracked"
            try:
                universe = Universe(kind, words[2:])
            except ValueError as e:
                raise DslError(str(e), lineno) from None
            continue
        if universe is None:
            raise DslError("universe must be declared first", lineno)
        if head == "default":
            if len(words) != 2 or words[1] not in ("0", "1"):
                raise DslError("expected 'default 0' or 'default 1'", lineno)
            default = int(words[1])
            saw_default = True
        elif head == "rect":
            m = _RECT_RE.match(line)
            if not m:
                raise DslError("malformed rect rule", lineno, col=raw.find("rect") + 1)
            rows = parse_set(universe, m.group(1), lineno)
            cols = parse_set(universe, m.group(2), lineno)
            rules.append(RectRule(rows, cols, int(m.group(3))))
        elif head == "diag":
            m = _DIAG_RE.match(line)
            if not m:
                raise DslError("malformed diag rule", lineno, col=raw.find("diag") + 1)
            row_track, row_off, col_track, col_off, start, step, value = m.groups()
            if universe.kind != "tracked":
                raise DslError("diag rules need a tracked universe", lineno)
            for t in (row_track, col_track):
                if t not in universe.names:
                    raise DslError(f"unknown track {t!r}", lineno)
            rules.append(
                DiagRule(
                    row_track,
                    int(row_off or 0),
                    col_track,
                    int(col_off or 0),
                    int(start),
                    int(step or 1),
                    int(value),
                )
            )
        elif head == "except":
            m = _EXCEPT_RE.match(line)
            if not m:
                raise DslError("malformed except rule", lineno, col=raw.find("except") + 1)
            try:
                i = universe.parse_index(m.group(1))
                j = universe.parse_index(m.group(2))
            except ValueError as e:
                raise DslError(str(e), lineno) from None
            exceptions.append((i, j, int(m.group(3))))
        else:
            raise DslError(f"unknown directive {head!r}", lineno)
    if universe is None:
        raise DslError("document has no universe declaration", 1)
    if not saw_default and not rules and not exceptions:
        raise DslError("document defines no entries", 1)
    try:
        return MatrixSpec(universe, rules, default, exceptions)
    except ValueError as e:
        raise DslError(str(e), 0) from None


def parse_word_letters(universe: Universe, text: str) -> list:
    """Whitespace-separated letters, `~x` for an inverse letter.

    Returns a list of (index, sign) pairs.
    """
    out = []
    for tok in text.split():
        sign = 1
        if tok.startswith("~"):
            sign = -1
            tok = tok[1:]
        out.append((universe.parse_index(tok), sign))
    return out

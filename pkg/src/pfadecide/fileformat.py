"""Line-oriented PFA text format.

::

    pfa v1
    states 2
    alphabet a
    initial 1 0
    final   0 1
    matrix a
    1/2 1/2
    0   1

``#`` starts a comment. Only exact rationals (``p`` or ``p/q``) are accepted.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .linalg import RMatrix, format_rational, parse_rational
from .pfa import Pfa, PfaError


class PfaFormatError(PfaError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _rationals(tokens, line):
    try:
        return [parse_rational(t) for t in tokens]
    except (ValueError, ZeroDivisionError) as exc:
        raise PfaFormatError(str(exc), line) from None


def loads(text: str) -> Pfa:
    lines = list(_lines(text))
    if not lines or lines[0][1] != ["pfa", "v1"]:
        raise PfaFormatError("expected header 'pfa v1'", lines[0][0] if lines else None)
    n = None
    alphabet = None
    initial = final = None
    matrices: dict[str, list[list[Fraction]]] = {}
    header_lines: dict[str, int] = {}
    i = 1
    while i < len(lines):
        no, toks = lines[i]
        key, args = toks[0], toks[1:]
        if key == "states":
            if len(args) != 1 or not args[0].isdigit() or int(args[0]) < 1:
                raise PfaFormatError("'states' takes one positive integer", no)
            n = int(args[0])
        elif key == "alphabet":
            if not args or len(set(args)) != len(args):
                raise PfaFormatError("'alphabet' needs distinct letter names", no)
            alphabet = args
        elif key in ("initial", "final"):
            if n is None:
                raise PfaFormatError(f"'{key}' before 'states'", no)
            vals = _rationals(args, no)
            if len(vals) != n:
                raise PfaFormatError(f"'{key}' has {len(vals)} entries, expected {n}", no)
            if key == "initial":
                if any(v < 0 for v in vals) or sum(vals) != 1:
                    raise PfaFormatError(f"initial vector sums to {format_rational(sum(vals))}, expected 1", no)
                initial = vals
            else:
                if any(v not in (0, 1) for v in vals):
                    raise PfaFormatError("final vector entries must be 0 or 1", no)
                final = [int(v) for v in vals]
            header_lines[key] = no
        elif key == "matrix":
            if n is None or alphabet is None:
                raise PfaFormatError("'matrix' before 'states' and 'alphabet'", no)
            if len(args) != 1 or args[0] not in alphabet:
                raise PfaFormatError(f"'matrix' must name one letter of the alphabet, got {args}", no)
            letter = args[0]
            if letter in matrices:
                raise PfaFormatError(f"duplicate matrix for {letter!r}", no)
            rows = []
            for r in range(n):
                i += 1
                if i >= len(lines):
                    raise PfaFormatError(f"matrix {letter!r} has only {r} of {n} rows", no)
                rno, rtoks = lines[i]
                row = _rationals(rtoks, rno)
                if len(row) != n:
                    raise PfaFormatError(f"row {r + 1} of matrix {letter!r} has {len(row)} entries, expected {n}", rno)
                if any(x < 0 for x in row) or sum(row) != 1:
                    raise PfaFormatError(
                        f"row {r + 1} of matrix {letter!r} sums to {format_rational(sum(row))}, expected 1", rno
                    )
                rows.append(row)
            matrices[letter] = rows
        else:
            raise PfaFormatError(f"unknown directive {key!r}", no)
        i += 1

    for what, val in (("states", n), ("alphabet", alphabet), ("initial", initial), ("final", final)):
        if val is None:
            raise PfaFormatError(f"missing '{what}'")
    missing = [a for a in alphabet if a not in matrices]
    if missing:
        raise PfaFormatError(f"missing matrix for {missing}")
    return Pfa(tuple(alphabet), initial, tuple(RMatrix(matrices[a]) for a in alphabet), final)


def dumps(pfa: Pfa) -> str:
    out = ["pfa v1", f"states {pfa.n}", "alphabet " + " ".join(pfa.alphabet)]
    out.append("initial " + " ".join(format_rational(x) for x in pfa.initial))
    out.append("final " + " ".join(str(b) for b in pfa.final))
    for letter, m in zip(pfa.alphabet, pfa.matrices):
        out.append(f"matrix {letter}")
        out.extend(" ".join(format_rational(x) for x in row) for row in m.rows)
    return "\n".join(out) + "\n"


def read_pfa(path) -> Pfa:
    return loads(Path(path).read_text(encoding="utf-8"))


def write_pfa(pfa: Pfa, path) -> None:
    Path(path).write_text(dumps(pfa), encoding="utf-8")

"""Structured text records: nested key/value blocks with stable key order.

The value universe is closed: None, bool, int, float, complex, str, and
nested dicts and lists of these.  Scalars are printed so that parsing
recovers the exact value and type: floats carry 17 significant digits
(enough to round-trip a double) and always contain a '.', an exponent,
or a non-finite name so they stay distinguishable from ints; complex
values always end in 'j'; strings are double quoted with backslash
escapes.  parse_record(print_record(x)) == x for every x in the universe.
"""

from __future__ import annotations

from .errors import DomainError

_INDENT = "  "
_KEY_OK = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


def _valid_key(key) -> bool:
    return (isinstance(key, str) and key != "" and not key[0].isdigit()
            and set(key) <= _KEY_OK)


def _format_float(x: float) -> str:
    out = format(x, ".17g")
    if out.lstrip("+-").isdigit():
        out += ".0"
    return out


def _format_scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, complex):
        return "%s%sj" % (_format_float(value.real),
                          _sign_prefixed(value.imag))
    if isinstance(value, str):
        body = (value.replace("\\", "\\\\").replace('"', '\\"')
                .replace("\n", "\\n").replace("\t", "\\t"))
        return '"%s"' % body
    raise DomainError("value %r is outside the record universe" % (value,))


def _sign_prefixed(x: float) -> str:
    out = _format_float(x)
    return out if out.startswith("-") else "+" + out


def _is_scalar(value) -> bool:
    if isinstance(value, (dict, list)):
        return len(value) == 0
    return True


def _emit(value, depth: int, lines: list[str]):
    pad = _INDENT * depth
    if isinstance(value, dict):
        for key, sub in value.items():
            if not _valid_key(key):
                raise DomainError("record key %r is not a bare identifier"
                                  % (key,))
            if _is_scalar(sub):
                lines.append("%s%s: %s" % (pad, key, _scalar_or_empty(sub)))
            else:
                lines.append("%s%s:" % (pad, key))
                _emit(sub, depth + 1, lines)
    elif isinstance(value, list):
        for item in value:
            if _is_scalar(item):
                lines.append("%s- %s" % (pad, _scalar_or_empty(item)))
            else:
                lines.append("%s-" % (pad,))
                _emit(item, depth + 1, lines)
    else:
        lines.append("%s%s" % (pad, _format_scalar(value)))


def _scalar_or_empty(value) -> str:
    if isinstance(value, dict):
        return "{}"
    if isinstance(value, list):
        return "[]"
    return _format_scalar(value)


def print_record(value) -> str:
    """Render a value to the record text form, one line per scalar."""
    lines: list[str] = []
    if _is_scalar(value):
        lines.append(_scalar_or_empty(value))
    else:
        _emit(value, 0, lines)
    return "\n".join(lines) + "\n"


def _parse_scalar(text: str):
    if text == "null":
        return None
    if text == "true":
        return True
    if text == "false":
        return False
    if text == "{}":
        return {}
    if text == "[]":
        return []
    if text.startswith('"'):
        if not text.endswith('"') or len(text) < 2:
            raise DomainError("unterminated string %r" % (text,))
        out = []
        i = 1
        while i < len(text) - 1:
            ch = text[i]
            if ch == "\\":
                i += 1
                if i >= len(text) - 1:
                    raise DomainError("dangling escape in %r" % (text,))
                try:
                    out.append({"\\": "\\", '"': '"',
                                "n": "\n", "t": "\t"}[text[i]])
                except KeyError:
                    raise DomainError("unknown escape \\%s" % text[i])
            else:
                out.append(ch)
            i += 1
        return "".join(out)
    try:
        if text.endswith("j"):
            return complex(text)
        if text.lstrip("+-").isdigit():
            return int(text)
        return float(text)
    except ValueError:
        raise DomainError("cannot parse scalar %r" % (text,))


def _depth_of(line: str) -> int:
    n = len(line) - len(line.lstrip(" "))
    if n % len(_INDENT) != 0:
        raise DomainError("odd indentation in record line %r" % (line,))
    return n // len(_INDENT)


def _parse_block(lines: list[str], pos: int, depth: int):
    """Parse the block starting at lines[pos] with the given depth;
    returns (value, next position)."""
    first = lines[pos].strip()
    as_list = first == "-" or first.startswith("- ")
    out = [] if as_list else {}
    while pos < len(lines):
        line = lines[pos]
        d = _depth_of(line)
        if d < depth:
            break
        if d > depth:
            raise DomainError("unexpected indent at record line %r" % (line,))
        body = line.strip()
        if as_list:
            if body == "-":
                sub, pos = _parse_block(lines, pos + 1, depth + 1)
                out.append(sub)
            elif body.startswith("- "):
                out.append(_parse_scalar(body[2:]))
                pos += 1
            else:
                break
        else:
            if body == "-" or body.startswith("- "):
                break
            key, sep, rest = body.partition(":")
            if not sep or not _valid_key(key):
                raise DomainError("bad record line %r" % (line,))
            rest = rest.strip()
            if rest:
                out[key] = _parse_scalar(rest)
                pos += 1
            else:
                sub, pos = _parse_block(lines, pos + 1, depth + 1)
                out[key] = sub
    return out, pos


def _looks_structural(body: str) -> bool:
    if body == "-" or body.startswith("- "):
        return True
    key, sep, _ = body.partition(":")
    return bool(sep) and _valid_key(key)


def parse_record(text: str):
    """Inverse of print_record on its image."""
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip() != ""]
    if not lines:
        raise DomainError("empty record text")
    if len(lines) == 1 and not _looks_structural(lines[0].strip()):
        return _parse_scalar(lines[0].strip())
    value, pos = _parse_block(lines, 0, 0)
    if pos != len(lines):
        raise DomainError("trailing content after record block: %r"
                          % (lines[pos],))
    return value

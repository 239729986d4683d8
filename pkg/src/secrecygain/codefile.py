"""Reading codes, corpora and wiretap schemes from JSON files."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .codes import (
    ExplicitCode,
    LinearCode,
    WeightEnumerator,
    Z4GrayCode,
    full_space,
    parse_word,
)
from .convcode import tailbite
from .exceptions import CodeValidationError

KINDS = ("linear", "explicit", "z4gray", "tailbiting", "enumerator")


def _binary_rows(rows, n, kind):
    words = []
    for i, row in enumerate(rows):
        text = "".join(str(b) for b in row) if isinstance(row, list) else str(row)
        if len(text) != n:
            raise CodeValidationError(f"row {i} has length {len(text)}, expected {n}")
        try:
            words.append(parse_word(text, n))
        except (ValueError, CodeValidationError) as exc:
            raise CodeValidationError(f"row {i}: {exc}") from None
    return words


def code_from_dict(obj: dict, name: str = ""):
    """Build a code (or a bare weight enumerator) from its JSON description."""
    if not isinstance(obj, dict):
        raise CodeValidationError("a code description must be a JSON object")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise CodeValidationError(f"unknown code kind {kind!r}; expected one of {', '.join(KINDS)}")
    name = obj.get("name", name)
    if kind == "enumerator":
        return WeightEnumerator.from_json(obj["weight_enumerator"])
    if kind == "tailbiting":
        for key in ("g1", "g2", "L"):
            if key not in obj:
                raise CodeValidationError(f"tail-biting code needs {key!r}")
        return tailbite(obj["g1"], obj["g2"], int(obj["L"]), obj.get("memory"), name=name)
    if kind == "z4gray":
        rows = obj.get("rows")
        if not rows:
            raise CodeValidationError("z4gray code needs generator rows")
        length = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != length:
                raise CodeValidationError(f"row {i} has length {len(row)}, expected {length}")
            if any(int(v) not in range(4) for v in row):
                raise CodeValidationError(f"row {i} has entries outside Z4")
        return Z4GrayCode(tuple(tuple(int(v) for v in r) for r in rows), name=name).image()
    n = obj.get("n")
    if not isinstance(n, int) or n <= 0:
        raise CodeValidationError("code needs a positive integer length 'n'")
    if kind == "linear" and obj.get("rows") == "full":
        return full_space(n, name=name)
    words = _binary_rows(obj.get("rows", []), n, kind)
    if kind == "linear":
        return LinearCode(n, tuple(words), name=name)
    return ExplicitCode(n, tuple(words), name=name)


def load_code(path):
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise CodeValidationError(f"{path}: invalid JSON ({exc})") from None
    return code_from_dict(obj, name=path.stem)


def enumerator_of(code_or_W) -> WeightEnumerator:
    if isinstance(code_or_W, WeightEnumerator):
        return code_or_W
    return code_or_W.weight_enumerator()


@dataclass
class CorpusEntry:
    name: str
    weight_enumerator: WeightEnumerator
    expected: dict = field(default_factory=dict)
    provenance: str = ""


def _resolve(entry: dict, base: Path):
    if "code" in entry:
        ref = entry["code"]
        if isinstance(ref, dict):
            return code_from_dict(ref, entry.get("name", ""))
        return load_code(base / ref)
    if "weight_enumerator" in entry:
        return WeightEnumerator.from_json(entry["weight_enumerator"])
    if "direct_sum" in entry:
        parts = [enumerator_of(_resolve(p, base)) for p in entry["direct_sum"]]
        W = parts[0]
        for P in parts[1:]:
            W = W * P
        return W
    raise CodeValidationError(f"corpus entry {entry.get('name')!r} has no code")


def load_corpus(path=None) -> list[CorpusEntry]:
    """Load a corpus file; the bundled corpus is used when ``path`` is None."""
    if path is None:
        ref = resources.files("secrecygain") / "data" / "corpus.json"
        with resources.as_file(ref) as p:
            return load_corpus(p)
    path = Path(path)
    obj = json.loads(path.read_text())
    out = []
    for entry in obj["entries"]:
        W = enumerator_of(_resolve(entry, path.parent))
        out.append(CorpusEntry(entry["name"], W, entry.get("expected", {}), entry.get("provenance", "")))
    return out


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("secrecygain") / "data" / name))


def load_scheme(path):
    """Load a wiretap scheme file with keys n, A, B, C (code descriptions or paths)."""
    from .wiretap import CosetScheme

    path = Path(path)
    obj = json.loads(path.read_text())
    n = obj["n"]
    parts = {}
    for key in "ABC":
        ref = obj[key]
        if isinstance(ref, str):
            parts[key] = load_code(path.parent / ref)
        else:
            parts[key] = code_from_dict(ref, key)
        if parts[key].n != n:
            raise CodeValidationError(f"{key} has length {parts[key].n}, expected {n}")
    return CosetScheme(n, *(tuple(parts[k].codewords()) for k in "ABC"))

"""Input documents and plain-text reports for the command line.

An input document is INI text::

    [group]
    ; kind is one of named, table, perm, product
    kind = named
    name = C2xC2

    [presentation]
    periods = 2, 2
    images = a, b

    [options]
    tower_steps = 2

``kind = table`` takes ``table`` (rows on separate lines or split by ``;``),
``kind = perm`` takes ``generators`` (cycle notation) and an optional
``degree``, ``kind = product`` takes ``factors`` (named groups).
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field

from . import __version__
from .groups import (
    DEFAULT_PERM_CAP,
    FiniteGroup,
    build_group,
    direct_product,
    group_from_table,
    permutation_group,
)
from .presentations import PeriodicPresentation, make_presentation


class InputError(ValueError):
    """Malformed or unsupported input; maps to exit status 2."""


SCHEMA = {
    "group": {"kind", "name", "table", "generators", "degree", "factors"},
    "generators": {"elements"},
    "presentation": {"periods", "images"},
    "options": {"modulus", "tower_steps", "threshold", "policy", "perm_cap", "oracle_cap"},
}
GROUP_KEYS = {
    "named": {"name"},
    "table": {"table"},
    "perm": {"generators", "degree"},
    "product": {"factors"},
}
INT_OPTIONS = {"modulus", "tower_steps", "threshold", "perm_cap", "oracle_cap"}

_TOKEN = re.compile(r"(?:\([^()]*\))+(?:\^-?\d+)?|[^,\s]+")


def split_elements(text: str) -> list[str]:
    """Split a comma list of element tokens; cycle products like ``(1,2)(3,4)`` stay whole."""
    text = text.strip()
    if not text:
        return []
    tokens = _TOKEN.findall(text)
    rest = _TOKEN.sub("", text).replace(",", "").strip()
    if rest:
        raise InputError(f"cannot parse element list {text!r}")
    return tokens


def parse_ints(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in re.split(r"[,\s]+", text.strip()) if t]
    except ValueError:
        raise InputError(f"{what} must be a list of integers, got {text!r}") from None


def _parse_table(text: str) -> list[list[int]]:
    rows = [r for r in re.split(r"[;\n]", text) if r.strip()]
    return [parse_ints(r, "table row") for r in rows]


def build_group_section(section: dict[str, str], perm_cap: int = DEFAULT_PERM_CAP) -> tuple[FiniteGroup, str]:
    """Group and a one-line description of how it was specified."""
    kind = section.get("kind", "named").strip()
    if kind not in GROUP_KEYS:
        raise InputError(f"unknown group kind {kind!r}")
    extra = set(section) - GROUP_KEYS[kind] - {"kind"}
    if extra:
        raise InputError(f"keys {sorted(extra)} do not apply to group kind {kind!r}")
    if kind == "named":
        name = section.get("name", "").strip()
        return build_group(name), name
    if kind == "product":
        names = [f.strip() for f in section.get("factors", "").split(",") if f.strip()]
        if not names:
            raise InputError("product group needs factors")
        G = direct_product(*(build_group(n) for n in names), name="x".join(names))
        return G, "x".join(names)
    if kind == "table":
        rows = _parse_table(section.get("table", ""))
        if not rows:
            raise InputError("table group needs a table")
        return group_from_table(rows, name=f"table{len(rows)}"), f"table of order {len(rows)}"
    gens = split_elements(section.get("generators", ""))
    degree = int(section["degree"]) if "degree" in section else None
    G = permutation_group(gens, degree=degree, cap=perm_cap, name="perm")
    return G, "perm " + ",".join(gens)


@dataclass
class InputDocument:
    group: FiniteGroup
    group_description: str
    generators: list[int] | None = None
    periods: list[int] | None = None
    images: list[int] | None = None
    options: dict[str, int | str] = field(default_factory=dict)

    def presentation(self) -> PeriodicPresentation:
        if self.periods is None or self.images is None:
            raise InputError("document has no [presentation] section")
        if len(self.periods) != len(self.images):
            raise InputError("periods and images differ in length")
        return make_presentation(self.periods, self.group, self.images)


def parse_document(text: str) -> InputDocument:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise InputError(f"malformed document: {exc}") from None
    for sec in cp.sections():
        if sec not in SCHEMA:
            raise InputError(f"unknown section [{sec}]")
        unknown = set(cp[sec]) - SCHEMA[sec]
        if unknown:
            raise InputError(f"unknown keys in [{sec}]: {', '.join(sorted(unknown))}")
    if "group" not in cp:
        raise InputError("document needs a [group] section")
    options: dict[str, int | str] = {}
    if "options" in cp:
        for k, v in cp["options"].items():
            options[k] = parse_ints(v, k)[0] if k in INT_OPTIONS else v.strip()
    G, desc = build_group_section(dict(cp["group"]), int(options.get("perm_cap", DEFAULT_PERM_CAP)))
    doc = InputDocument(G, desc, options=options)
    if "generators" in cp:
        doc.generators = [G.element(t) for t in split_elements(cp["generators"].get("elements", ""))]
    if "presentation" in cp:
        sec = cp["presentation"]
        doc.periods = parse_ints(sec.get("periods", ""), "periods")
        doc.images = [G.element(t) for t in split_elements(sec.get("images", ""))]
    return doc


def load_document(path: str) -> InputDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_document(text)


# ---------------------------------------------------------------------------
# reports


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(format_value(x) for x in v) + ")"
    return str(v)


class Report:
    """Ordered ``key: value`` lines; ``check`` lines also record failures."""

    def __init__(self, command: str):
        self.lines: list[tuple[str, str]] = [("schurcover", __version__), ("command", command)]
        self.failures: list[str] = []
        self.attachment: str | None = None

    def add(self, key: str, value) -> None:
        self.lines.append((key, format_value(value)))

    def check(self, key: str, ok: bool, detail: str = "") -> bool:
        status = "OK" if ok else "FAIL"
        self.lines.append((key, f"{status} {detail}".rstrip()))
        if not ok:
            self.failures.append(key)
        return ok

    @property
    def ok(self) -> bool:
        return not self.failures

    def render(self) -> str:
        text = "".join(f"{k}: {v}\n" for k, v in self.lines)
        if self.attachment is not None:
            text += self.attachment if self.attachment.endswith("\n") else self.attachment + "\n"
        return text


def element_list(G: FiniteGroup, elems) -> str:
    return ", ".join(f"{int(g)}={G.label(int(g))}" for g in elems)

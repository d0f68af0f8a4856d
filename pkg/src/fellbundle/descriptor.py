"""JSON descriptor files for bundles and named sections.

Top-level object with keys ``base``, ``dims`` and optional ``sections``.

* ``base.kind == "pair"``: ``n`` objects ``0 .. n-1``; section keys are
  ``"u:A"`` (unit at object A) and ``"a:A>B"`` (arrow A -> B).
* ``base.kind == "grid"``: ``rows``, ``cols``, boolean ``folding``;
  vertices are named ``"r,c"``.  Section keys address folded arrows:
  ``"u:r,c"``, ``"a:r1,c1>r2,c2"``, plus the aliases ``"e:h:r,c"`` /
  ``"e:v:r,c"`` (edge from its top-left vertex), ``"sq:r,c"`` (2-cell,
  the diagonal TL -> BR) and ``"sq2:r,c"`` (reverse 2-cell, BL -> TR).

``dims`` is a single integer (uniform) or a list: one entry per object
for pair bases, one per vertex in row-major order for grids.  Complex
scalars are two-element arrays ``[re, im]``; matrices are row-major
nested arrays of such pairs (a bare pair stands for a 1x1 matrix).
Missing section keys default to zero blocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .dfell import LAYOUT, DoubleBundle, SquareSection
from .fellcore import FellBundle, Section
from .groupoid import grid_double_groupoid, pair_groupoid


class ParseError(ValueError):
    """Descriptor rejection; ``location`` pinpoints the offending spot."""

    def __init__(self, msg, location=None):
        super().__init__(f"{msg} (at {location})" if location else msg)
        self.location = location


@dataclass(eq=False)
class BundleDescriptor:
    kind: str  # "pair" | "grid"
    bundle: object  # FellBundle | DoubleBundle
    sections: dict = field(default_factory=dict)

    def section(self, name: str):
        try:
            return self.sections[name]
        except KeyError:
            raise ParseError(f"no section named {name!r}", "sections") from None

    def fell_bundle(self) -> FellBundle:
        """The underlying Fell bundle (folded, for grid descriptors)."""
        if self.kind == "pair":
            return self.bundle
        return self.bundle.folded_bundle()


def parse_complex(val, location) -> complex:
    if (
        isinstance(val, (list, tuple))
        and len(val) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in val)
    ):
        return complex(float(val[0]), float(val[1]))
    raise ParseError(f"expected a [re, im] pair, got {val!r}", location)


def parse_matrix(val, location) -> np.ndarray:
    # a bare [re, im] pair is a 1x1 matrix
    if (
        isinstance(val, (list, tuple))
        and len(val) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in val)
    ):
        return np.array([[parse_complex(val, location)]], dtype=np.complex128)
    if not isinstance(val, list) or not val:
        raise ParseError("expected a nonempty nested array of [re, im] pairs", location)
    rows = []
    width = None
    for i, row in enumerate(val):
        if not isinstance(row, list) or not row:
            raise ParseError(f"row {i} is not a nonempty array", location)
        entries = [parse_complex(x, f"{location}[{i}][{j}]") for j, x in enumerate(row)]
        if width is None:
            width = len(entries)
        elif len(entries) != width:
            raise ParseError(f"row {i} has {len(entries)} entries, expected {width}", location)
        rows.append(entries)
    return np.array(rows, dtype=np.complex128)


def matrix_to_json(mat) -> list:
    a = np.asarray(mat, dtype=np.complex128)
    return [[[float(x.real), float(x.imag)] for x in row] for row in a]


def _parse_dims(val, count: int, location) -> list:
    if isinstance(val, int) and not isinstance(val, bool):
        if val < 1:
            raise ParseError(f"dimension must be positive, got {val}", location)
        return [val] * count
    if isinstance(val, list) and all(isinstance(x, int) and x >= 1 for x in val):
        if len(val) != count:
            raise ParseError(f"expected {count} dimensions, got {len(val)}", location)
        return list(val)
    raise ParseError("dims must be a positive integer or list of them", location)


def _vertex(txt: str, location):
    parts = txt.split(",")
    if len(parts) != 2:
        raise ParseError(f"bad vertex {txt!r}, expected 'r,c'", location)
    try:
        return (int(parts[0]), int(parts[1]))
    except ValueError:
        raise ParseError(f"bad vertex {txt!r}, expected 'r,c'", location) from None


def _grid_arrow_key(key: str, location):
    """Resolve a grid section key to an ordered vertex pair (from, to)."""
    if key.startswith("u:"):
        v = _vertex(key[2:], location)
        return v, v
    if key.startswith("a:"):
        body = key[2:]
        if ">" not in body:
            raise ParseError(f"bad arrow key {key!r}", location)
        src_txt, dst_txt = body.split(">", 1)
        return _vertex(src_txt, location), _vertex(dst_txt, location)
    if key.startswith("e:h:"):
        r, c = _vertex(key[4:], location)
        return (r, c), (r, c + 1)
    if key.startswith("e:v:"):
        r, c = _vertex(key[4:], location)
        return (r, c), (r + 1, c)
    if key.startswith("sq:"):
        r, c = _vertex(key[3:], location)
        return (r, c), (r + 1, c + 1)
    if key.startswith("sq2:"):
        r, c = _vertex(key[4:], location)
        return (r + 1, c), (r, c + 1)
    raise ParseError(f"unknown section key {key!r}", location)


def _infer_square(pairs, squares, location):
    """The lexicographically smallest square whose folded arrows cover the keys."""
    candidates = []
    for sq in squares:
        r, c = sq
        verts = {(r, c), (r + 1, c), (r, c + 1), (r + 1, c + 1)}
        if all(a in verts and b in verts for a, b in pairs):
            candidates.append(sq)
    if not candidates:
        raise ParseError("section keys do not fit inside any single square", location)
    return min(candidates)


def _pair_section(bundle: FellBundle, entries: dict, name: str) -> Section:
    data = {g: np.zeros(bundle.fiber_shape(g), dtype=np.complex128) for g in bundle.base.arrows}
    for key, val in entries.items():
        loc = f"sections.{name}.{key}"
        if key.startswith("u:"):
            arrow_name = f"{key[2:]}>{key[2:]}"
        elif key.startswith("a:"):
            arrow_name = key[2:]
        else:
            raise ParseError(f"unknown section key {key!r}", loc)
        try:
            g = bundle.base.arrow(arrow_name)
        except LookupError:
            raise ParseError(f"unknown arrow {arrow_name!r}", loc) from None
        mat = parse_matrix(val, loc)
        if mat.shape != bundle.fiber_shape(g):
            raise ParseError(
                f"matrix shape {mat.shape} does not match fiber shape "
                f"{bundle.fiber_shape(g)}", loc,
            )
        data[g] = mat
    return Section(bundle, data)


def _grid_section(bundle: DoubleBundle, entries: dict, name: str) -> SquareSection:
    pairs = {}
    for key, val in entries.items():
        loc = f"sections.{name}.{key}"
        src, dst = _grid_arrow_key(key, loc)
        for v in (src, dst):
            if v not in bundle.vdim:
                raise ParseError(f"unknown vertex {v}", loc)
        mat = parse_matrix(val, loc)
        want = (bundle.vdim[dst], bundle.vdim[src])
        if mat.shape != want:
            raise ParseError(f"matrix shape {mat.shape} does not match fiber shape {want}", loc)
        pairs[(src, dst)] = mat
    sq = _infer_square(pairs.keys(), bundle.dg.squares, f"sections.{name}")
    verts = bundle.dg.square_vertices(sq)
    blocks = {}
    for i in range(4):
        for j in range(4):
            got = pairs.get((verts[j], verts[i]))
            if got is not None:
                blocks[LAYOUT[i][j]] = got
    return SquareSection.from_blocks(sq, bundle.square_dims(sq), blocks)


def parse_descriptor(text: str) -> BundleDescriptor:
    """Parse a descriptor document; all rejections carry a location."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"syntax error: {e.msg}", f"line {e.lineno}, column {e.colno}"
        ) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", "top level")
    base = doc.get("base")
    if not isinstance(base, dict) or "kind" not in base:
        raise ParseError("missing or malformed 'base'", "base")
    kind = base["kind"]
    if kind == "pair":
        n = base.get("n")
        if not isinstance(n, int) or n < 1:
            raise ParseError(f"pair base needs a positive 'n', got {n!r}", "base.n")
        dims = _parse_dims(doc.get("dims", 1), n, "dims")
        bundle = FellBundle(pair_groupoid(n), {i: dims[i] for i in range(n)})
        desc = BundleDescriptor("pair", bundle)
        for name, entries in (doc.get("sections") or {}).items():
            if not isinstance(entries, dict):
                raise ParseError("section must map keys to matrices", f"sections.{name}")
            desc.sections[name] = _pair_section(bundle, entries, name)
        return desc
    if kind == "grid":
        rows, cols = base.get("rows"), base.get("cols")
        folding = base.get("folding", True)
        if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 1:
            raise ParseError("grid base needs positive 'rows' and 'cols'", "base")
        if not isinstance(folding, bool):
            raise ParseError("'folding' must be a boolean", "base.folding")
        dg = grid_double_groupoid(rows, cols, folding)
        dims = _parse_dims(doc.get("dims", 1), len(dg.vertices), "dims")
        vdim = {v: dims[i] for i, v in enumerate(dg.vertices)}
        bundle = DoubleBundle(dg, vdim)
        desc = BundleDescriptor("grid", bundle)
        for name, entries in (doc.get("sections") or {}).items():
            if not isinstance(entries, dict):
                raise ParseError("section must map keys to matrices", f"sections.{name}")
            desc.sections[name] = _grid_section(bundle, entries, name)
        return desc
    raise ParseError(f"unknown base kind {kind!r}", "base.kind")


def serialize_descriptor(desc: BundleDescriptor) -> dict:
    """Canonical document for a descriptor; parsing it back is an identity."""
    if desc.kind == "pair":
        bundle = desc.bundle
        n = len(bundle.base.objects)
        doc = {
            "base": {"kind": "pair", "n": n},
            "dims": [bundle.objdim[i] for i in range(n)],
        }
        if desc.sections:
            doc["sections"] = {
                name: {
                    f"a:{g.name}": matrix_to_json(sec.data[g])
                    for g in bundle.base.arrows
                    if np.any(sec.data[g])
                }
                for name, sec in desc.sections.items()
            }
        return doc
    dg = desc.bundle.dg
    doc = {
        "base": {"kind": "grid", "rows": dg.rows, "cols": dg.cols, "folding": dg.folding},
        "dims": [desc.bundle.vdim[v] for v in dg.vertices],
    }
    if desc.sections:
        out = {}
        for name, sec in desc.sections.items():
            verts = dg.square_vertices(sec.square)
            entries = {}
            for i in range(4):
                for j in range(4):
                    blk = sec.block(i, j)
                    if not np.any(blk):
                        continue
                    src, dst = verts[j], verts[i]
                    key = (
                        f"u:{src[0]},{src[1]}"
                        if src == dst
                        else f"a:{src[0]},{src[1]}>{dst[0]},{dst[1]}"
                    )
                    entries[key] = matrix_to_json(blk)
            out[name] = entries
        doc["sections"] = out
    return doc

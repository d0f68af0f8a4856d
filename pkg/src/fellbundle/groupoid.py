"""Discrete groupoids and grid double groupoids with folding.

A :class:`Groupoid` is stored with explicit unit/inverse/composition
tables so the category laws can be checked by exhaustive lookup rather
than trusted by construction.  Only principal (pair) groupoids are
constructible; that is all the finite examples need.

A :class:`DoubleGroupoid` is a rectangular grid of squares.  Folding is
modeled as the principal pair-groupoid closure on the vertex set: with
folding enabled, every ordered vertex pair indexes exactly one folded
arrow, which is what lets horizontal and vertical data multiply inside
one linking matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cxmat import DomainError

HORIZONTAL = "h"
VERTICAL = "v"


@dataclass(frozen=True)
class Arrow:
    """A groupoid arrow ``src -> dst`` with a distinguishing name."""

    name: str
    src: object
    dst: object

    def __repr__(self):
        return f"Arrow({self.name}: {self.src}->{self.dst})"


@dataclass(frozen=True, eq=False)
class Groupoid:
    objects: tuple
    arrows: tuple
    units: dict = field(repr=False)
    inverses: dict = field(repr=False)
    compositions: dict = field(repr=False)

    def unit(self, obj) -> Arrow:
        return self.units[obj]

    def inverse(self, g: Arrow) -> Arrow:
        return self.inverses[g]

    def composable(self, g1: Arrow, g2: Arrow) -> bool:
        return g1.dst == g2.src

    def compose(self, g1: Arrow, g2: Arrow) -> Arrow:
        try:
            return self.compositions[(g1, g2)]
        except KeyError:
            raise DomainError(f"arrows {g1} and {g2} do not compose") from None

    def composable_pairs(self):
        """The derived composability set: all (g1, g2) with dst g1 = src g2."""
        return tuple(sorted(self.compositions.keys(), key=lambda p: (p[0].name, p[1].name)))

    def arrow(self, name: str) -> Arrow:
        for g in self.arrows:
            if g.name == name:
                return g
        raise LookupError(f"no arrow named {name!r}")


def pair_groupoid(objects) -> Groupoid:
    """The principal groupoid on the given objects (or on ``range(n)``).

    One arrow i->j for every ordered pair, composition (i->j)(j->k) = i->k,
    inverse (i->j)^-1 = (j->i).
    """
    if isinstance(objects, int):
        if objects < 1:
            raise DomainError(f"pair groupoid needs at least one object, got {objects}")
        objects = tuple(range(objects))
    else:
        objects = tuple(objects)
        if not objects:
            raise DomainError("pair groupoid needs at least one object")
        if len(set(objects)) != len(objects):
            raise DomainError("pair groupoid objects must be distinct")

    def key(a, b):
        return f"{_obj_label(a)}>{_obj_label(b)}"

    arr = {(a, b): Arrow(key(a, b), a, b) for a in objects for b in objects}
    units = {a: arr[(a, a)] for a in objects}
    inverses = {arr[(a, b)]: arr[(b, a)] for a in objects for b in objects}
    comps = {
        (arr[(a, b)], arr[(b, c)]): arr[(a, c)]
        for a in objects
        for b in objects
        for c in objects
    }
    arrows = tuple(arr[(a, b)] for a in objects for b in objects)
    return Groupoid(objects, arrows, units, inverses, comps)


def _obj_label(obj) -> str:
    if isinstance(obj, tuple):
        return ",".join(str(x) for x in obj)
    return str(obj)


@dataclass(frozen=True, eq=False)
class DoubleGroupoid:
    """A rows x cols grid of invertible squares over a vertex lattice."""

    rows: int
    cols: int
    folding: bool
    vertices: tuple = field(repr=False)
    squares: tuple = field(repr=False)

    @property
    def h_edges(self):
        # horizontal edge at (r, c) runs from vertex (r, c) to (r, c+1)
        return tuple((r, c) for r in range(self.rows + 1) for c in range(self.cols))

    @property
    def v_edges(self):
        # vertical edge at (r, c) runs from vertex (r, c) to (r+1, c)
        return tuple((r, c) for r in range(self.rows) for c in range(self.cols + 1))

    def check_square(self, sq) -> tuple:
        sq = tuple(sq)
        if sq not in self._square_set():
            raise LookupError(f"no square {sq} in a {self.rows}x{self.cols} grid")
        return sq

    def _square_set(self):
        return set(self.squares)

    def square_vertices(self, sq):
        """Corner vertices of a square in layout order (TL, BL, TR, BR)."""
        r, c = self.check_square(sq)
        return ((r, c), (r + 1, c), (r, c + 1), (r + 1, c + 1))

    def composable(self, s1, s2):
        """``"h"`` if s2 sits immediately right of s1 (shared vertical edge),
        ``"v"`` if immediately below (shared horizontal edge), else None."""
        r1, c1 = self.check_square(s1)
        r2, c2 = self.check_square(s2)
        if r1 == r2 and c2 == c1 + 1:
            return HORIZONTAL
        if c1 == c2 and r2 == r1 + 1:
            return VERTICAL
        return None

    def layout_vertices(self):
        """Vertices in column-major order: (0,0), (1,0), ..., (0,1), ...

        This is the row/column order of every assembled section matrix
        (A, B, A', B' for one square; A, B, A', B', A'', B'' for a
        horizontal strip).
        """
        return tuple(sorted(self.vertices, key=lambda v: (v[1], v[0])))

    def folded(self) -> Groupoid:
        """The pair groupoid on the vertex set (requires folding)."""
        if not self.folding:
            raise DomainError("double groupoid was built without folding")
        return pair_groupoid(self.layout_vertices())

    def element_count(self) -> int:
        """Units, edges (with inverses) and 2-cells (with inverses).

        With folding these are exactly the ordered vertex pairs of one
        square's closure; for the one-square groupoid the count is 16.
        """
        n_units = len(self.vertices)
        n_edges = 2 * (len(self.h_edges) + len(self.v_edges))
        n_cells = 4 * len(self.squares)  # alpha, alpha*, alpha', alpha'*
        return n_units + n_edges + n_cells


def grid_double_groupoid(rows: int, cols: int, folding: bool = True) -> DoubleGroupoid:
    """Build the rows x cols grid double groupoid.

    Vertices are (r, c) for 0 <= r <= rows, 0 <= c <= cols; squares are
    indexed by their top-left vertex.
    """
    if rows < 1 or cols < 1:
        raise DomainError(f"grid needs at least one row and column, got {rows}x{cols}")
    vertices = tuple((r, c) for r in range(rows + 1) for c in range(cols + 1))
    squares = tuple((r, c) for r in range(rows) for c in range(cols))
    return DoubleGroupoid(rows, cols, folding, vertices, squares)

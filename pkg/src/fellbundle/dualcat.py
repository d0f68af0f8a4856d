"""The transpose dual of a saturated bundle.

With J the entrywise conjugation of vectors, the map b -> J b* J is the
transpose, a conjugate-linear isometry squaring to the identity.  Applied
section by section it reverses every arrow: the fiber over A -> B becomes
the fiber over B -> A and the left/right module actions exchange sides.
Applying the dual twice returns the original structure exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cxmat import DomainError, adjoint, as_matrix, transpose
from .dfell import DoubleBundle, SquareSection
from .fellcore import FellBundle, Section, is_saturated
from .groupoid import Arrow, Groupoid


def conj_J(v) -> np.ndarray:
    """Entrywise complex conjugation; J = J^-1 = J*."""
    return np.conj(np.asarray(v, dtype=np.complex128))


def dual_section(sec) -> np.ndarray:
    """The dual payload of a section: the transpose of its assembled matrix.

    Operatorially this is J adjoint(.) J; accepts a linking matrix, a
    :class:`Section` or a :class:`SquareSection`.
    """
    if isinstance(sec, Section):
        return transpose(sec.linking())
    if isinstance(sec, SquareSection):
        return transpose(sec.assemble())
    return transpose(as_matrix(sec))


def _reverse_groupoid(base: Groupoid):
    """The same objects with every arrow reversed; returns (groupoid, map)."""
    rev = {g: Arrow(f"{g.name}^o", g.dst, g.src) for g in base.arrows}
    arrows = tuple(rev[g] for g in base.arrows)
    units = {obj: rev[base.unit(obj)] for obj in base.objects}
    inverses = {rev[g]: rev[base.inverse(g)] for g in base.arrows}
    # (g1 g2)^o = g2^o g1^o: reversal is contravariant
    comps = {
        (rev[g2], rev[g1]): rev[base.compositions[(g1, g2)]]
        for (g1, g2) in base.compositions
    }
    return Groupoid(base.objects, arrows, units, inverses, comps), rev


@dataclass(frozen=True, eq=False)
class DualDescriptor:
    """The dual of a bundle: reversed arrows, transposed fibers."""

    source: object
    dual_base: Groupoid | None
    arrow_map: dict = field(repr=False, default_factory=dict)

    def dual_of(self, sec) -> np.ndarray:
        return dual_section(sec)

    def dual_bundle(self) -> FellBundle:
        """The dual as a Fell bundle (module directions exchanged)."""
        src = self.source
        if isinstance(src, DoubleBundle):
            return FellBundle(self.dual_base, dict(src.vdim))
        return FellBundle(self.dual_base, dict(src.objdim))

    def structured_dual(self, sec: Section) -> Section:
        """Dual of a section as a section of the dual bundle.

        The entry over g^o is the transpose of the entry over g; the
        assembled matrix is exactly ``dual_section(sec)``.
        """
        data = {self.arrow_map[g]: transpose(sec.data[g]) for g in sec.data}
        return Section(self.dual_bundle(), data)


def dual_category(src) -> DualDescriptor:
    """Build the dual (double) category of a saturated bundle.

    Objects are kept; every arrow A -> B is replaced by B -> A and the
    fiber over the reversed arrow is the transposed fiber space.  Applying
    :func:`dual_category` to the result returns the original source.
    Raises if the source is not saturated.
    """
    if isinstance(src, DualDescriptor):
        # dual of the dual: hand back the original, exactly
        return src.source
    if isinstance(src, FellBundle):
        if not is_saturated(src):
            raise DomainError("dual category requires a saturated bundle")
        dual_base, rev = _reverse_groupoid(src.base)
        return DualDescriptor(src, dual_base, rev)
    if isinstance(src, DoubleBundle):
        folded = src.folded_bundle()
        if not is_saturated(folded):
            raise DomainError("dual category requires a saturated bundle")
        dual_base, rev = _reverse_groupoid(folded.base)
        return DualDescriptor(src, dual_base, rev)
    raise DomainError(f"cannot dualize {type(src).__name__}")

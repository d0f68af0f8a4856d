"""Fell bundles over discrete groupoids and their linking algebras.

A bundle assigns a dimension to every object; the fiber over an arrow
``A -> B`` is the full space of ``n_B x n_A`` complex matrices, so the
fiber over a unit is the full matrix algebra of its object.  Sections
(one matrix per arrow, all independent) assemble into an N x N linking
matrix, and the convolution product of sections corresponds exactly to
the matrix product of linking matrices.

The verifiers at the bottom sample seeded Gaussian fiber elements and
report one :class:`~fellbundle.report.Report` per axiom instead of
raising, so a corrupted structure produces a witness rather than a stack
trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import cxmat
from .cxmat import DomainError, ShapeError, adjoint, as_matrix, op_norm
from .groupoid import Arrow, Groupoid
from .report import Report


class CompositionError(ValueError):
    """Raised when fiber elements over non-composable arrows are multiplied."""


@dataclass(frozen=True, eq=False)
class FellBundle:
    """A bundle of full matrix fibers over a discrete groupoid.

    ``zero_fibers`` degrades the named arrows to the zero fiber; it exists
    so saturation tests have a negative control and is not part of the
    healthy-bundle surface.
    """

    base: Groupoid
    objdim: dict = field(repr=False)
    zero_fibers: frozenset = frozenset()

    def __post_init__(self):
        for obj in self.base.objects:
            n = self.objdim.get(obj)
            if not isinstance(n, int) or n < 1:
                raise DomainError(f"object {obj!r} needs a positive dimension, got {n!r}")

    def fiber_shape(self, g: Arrow):
        return (self.objdim[g.dst], self.objdim[g.src])

    def fiber_dim(self, g: Arrow) -> int:
        if g in self.zero_fibers:
            return 0
        rows, cols = self.fiber_shape(g)
        return rows * cols

    def fiber_basis(self, g: Arrow):
        """Matrix units of the fiber over ``g`` (empty for a zero fiber)."""
        rows, cols = self.fiber_shape(g)
        if g in self.zero_fibers:
            return []
        out = []
        for i in range(rows):
            for j in range(cols):
                e = np.zeros((rows, cols), dtype=np.complex128)
                e[i, j] = 1.0
                out.append(e)
        return out

    def check_element(self, g: Arrow, e) -> np.ndarray:
        e = as_matrix(e)
        if e.shape != self.fiber_shape(g):
            raise ShapeError(
                f"element over {g} must have shape {self.fiber_shape(g)}, got {e.shape}"
            )
        return e

    def fiber_mul(self, g1: Arrow, e1, g2: Arrow, e2):
        """Multiply fiber elements along composable arrows.

        Returns ``(g1 g2, product)`` where the product lies in the fiber
        over the composite.  With the dst x src fiber convention the raw
        matrix product is ``e2 @ e1``; that bookkeeping stays internal.
        """
        if not self.base.composable(g1, g2):
            raise CompositionError(f"arrows {g1} and {g2} do not compose")
        e1 = self.check_element(g1, e1)
        e2 = self.check_element(g2, e2)
        g = self.base.compose(g1, g2)
        return g, e2 @ e1

    def fiber_adjoint(self, g: Arrow, e):
        """Involution: the adjoint lands in the fiber over the inverse arrow."""
        return self.base.inverse(g), adjoint(self.check_element(g, e))

    def unit_element(self, obj) -> np.ndarray:
        return np.eye(self.objdim[obj], dtype=np.complex128)

    def zero_section(self) -> "Section":
        data = {g: np.zeros(self.fiber_shape(g), dtype=np.complex128) for g in self.base.arrows}
        return Section(self, data)

    def random_section(self, rng: np.random.Generator) -> "Section":
        data = {}
        for g in self.base.arrows:
            if g in self.zero_fibers:
                data[g] = np.zeros(self.fiber_shape(g), dtype=np.complex128)
            else:
                data[g] = random_matrix(rng, self.fiber_shape(g))
        return Section(self, data)

    def identity_section(self) -> "Section":
        s = self.zero_section()
        data = dict(s.data)
        for obj in self.base.objects:
            data[self.base.unit(obj)] = self.unit_element(obj)
        return Section(self, data)


def random_matrix(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussian entries."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class Section:
    """One matrix per arrow; a general element of the linking algebra."""

    bundle: FellBundle
    data: dict = field(repr=False)

    def __post_init__(self):
        for g in self.bundle.base.arrows:
            if g not in self.data:
                raise LookupError(f"section is missing arrow {g}")
            self.bundle.check_element(g, self.data[g])

    def __call__(self, g: Arrow) -> np.ndarray:
        return self.data[g]

    def __add__(self, other: "Section") -> "Section":
        return Section(self.bundle, {g: self.data[g] + other.data[g] for g in self.data})

    def scale(self, lam: complex) -> "Section":
        return Section(self.bundle, {g: lam * self.data[g] for g in self.data})

    def __mul__(self, other: "Section") -> "Section":
        """Convolution over composable factorizations.

        Each factorization g = g1 g2 contributes the fiber product of the
        right factor's first leg with the left factor's second leg; that
        pairing is what makes :func:`linking` multiplicative.
        """
        base = self.bundle.base
        out = {g: np.zeros(self.bundle.fiber_shape(g), dtype=np.complex128) for g in base.arrows}
        for (g1, g2) in base.compositions:
            g = base.compositions[(g1, g2)]
            _, prod = self.bundle.fiber_mul(g1, other.data[g1], g2, self.data[g2])
            out[g] = out[g] + prod
        return Section(self.bundle, out)

    def star(self) -> "Section":
        """Involution: adjoint of the entry over the inverse arrow."""
        base = self.bundle.base
        return Section(
            self.bundle, {g: adjoint(self.data[base.inverse(g)]) for g in base.arrows}
        )

    def linking(self) -> np.ndarray:
        return linking(self)

    def norm(self) -> float:
        return op_norm(self.linking())


def _offsets(bundle: FellBundle):
    offs, pos = {}, 0
    for obj in bundle.base.objects:
        offs[obj] = pos
        pos += bundle.objdim[obj]
    return offs, pos


def linking(sec: Section) -> np.ndarray:
    """Assemble the N x N linking matrix, N = sum of object dimensions.

    Block (B, A) holds the entry over the arrow A -> B.
    """
    b = sec.bundle
    offs, n = _offsets(b)
    out = np.zeros((n, n), dtype=np.complex128)
    for g in b.base.arrows:
        r, c = offs[g.dst], offs[g.src]
        e = sec.data[g]
        out[r : r + e.shape[0], c : c + e.shape[1]] = e
    return out


def section_from_linking(bundle: FellBundle, mat) -> Section:
    """Slice an assembled matrix back into per-arrow blocks."""
    mat = as_matrix(mat)
    offs, n = _offsets(bundle)
    if mat.shape != (n, n):
        raise ShapeError(f"linking matrix must be {n}x{n}, got {mat.shape}")
    data = {}
    for g in bundle.base.arrows:
        r, c = offs[g.dst], offs[g.src]
        nr, nc = bundle.fiber_shape(g)
        data[g] = mat[r : r + nr, c : c + nc].copy()
    return Section(bundle, data)


# ---------------------------------------------------------------------------
# axiom verifiers


def _sample_pairs(base: Groupoid, rng: np.random.Generator, samples: int):
    pairs = base.composable_pairs()
    idx = rng.integers(0, len(pairs), size=samples)
    return [pairs[i] for i in idx]


def check_fell_axioms(
    bundle: FellBundle,
    samples: int = 100,
    tol: float = 1e-9,
    seed: int = 42,
    mul=None,
) -> list:
    """Verify the ten bundle axioms on seeded random fiber elements.

    ``mul`` may replace the fiber multiplication (used by negative-control
    tests to confirm that a corrupted product is caught, not absorbed).
    Returns one report per axiom; failures carry a witness.
    """
    if samples < 1:
        raise DomainError("need at least one sample")
    rng = np.random.default_rng(seed)
    base = bundle.base
    mul = mul if mul is not None else bundle.fiber_mul
    reports = []

    def rand(g):
        return random_matrix(rng, bundle.fiber_shape(g))

    # 1: products land over the composed arrow (structural).
    bad = None
    for (g1, g2) in base.composable_pairs():
        g, prod = mul(g1, rand(g1), g2, rand(g2))
        if g != base.compose(g1, g2) or prod.shape != bundle.fiber_shape(g):
            bad = {"pair": (g1.name, g2.name)}
            break
    reports.append(
        Report("fell-01-projection-multiplicative", "fail" if bad else "pass", 0.0, seed, bad)
    )

    # 2: the induced fiber map is bilinear.
    res, wit = 0.0, None
    for (g1, g2) in _sample_pairs(base, rng, samples):
        a, ap, e = rand(g1), rand(g1), rand(g2)
        lam, mu = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        _, lhs = mul(g1, lam * a + mu * ap, g2, e)
        _, r1 = mul(g1, a, g2, e)
        _, r2 = mul(g1, ap, g2, e)
        d = op_norm(lhs - lam * r1 - mu * r2)
        b2, b2p = rand(g2), rand(g2)
        _, lhs2 = mul(g1, a, g2, lam * b2 + mu * b2p)
        _, r3 = mul(g1, a, g2, b2)
        _, r4 = mul(g1, a, g2, b2p)
        d = max(d, op_norm(lhs2 - lam * r3 - mu * r4))
        if d > res:
            res, wit = d, {"pair": (g1.name, g2.name), "residual": d}
    reports.append(_residual_report("fell-02-bilinear", res, tol, seed, wit))

    # 3: associativity over composable triples.
    res, wit = 0.0, None
    pairs = base.composable_pairs()
    for _ in range(samples):
        g1, g2 = pairs[rng.integers(0, len(pairs))]
        g12 = base.compose(g1, g2)
        nexts = [p for p in pairs if p[0] == g12]
        g3 = nexts[rng.integers(0, len(nexts))][1]
        e1, e2, e3 = rand(g1), rand(g2), rand(g3)
        ga, pa = mul(g1, e1, g2, e2)
        _, left = mul(ga, pa, g3, e3)
        gb, pb = mul(g2, e2, g3, e3)
        _, right = mul(g1, e1, gb, pb)
        d = op_norm(left - right)
        if d > res:
            res, wit = d, {"triple": (g1.name, g2.name, g3.name), "residual": d}
    reports.append(_residual_report("fell-03-associative", res, tol, seed, wit))

    # 4: norm submultiplicativity.
    res, wit = 0.0, None
    for (g1, g2) in _sample_pairs(base, rng, samples):
        e1, e2 = rand(g1), rand(g2)
        _, prod = mul(g1, e1, g2, e2)
        d = max(0.0, op_norm(prod) - op_norm(e1) * op_norm(e2))
        if d > res:
            res, wit = d, {"pair": (g1.name, g2.name), "residual": d}
    reports.append(_residual_report("fell-04-submultiplicative", res, tol, seed, wit))

    # 5: the involution lands over the inverse arrow (structural).
    bad = None
    for g in base.arrows:
        gi, e = bundle.fiber_adjoint(g, rand(g))
        if gi != base.inverse(g) or e.shape != bundle.fiber_shape(gi):
            bad = {"arrow": g.name}
            break
    reports.append(
        Report("fell-05-involution-projection", "fail" if bad else "pass", 0.0, seed, bad)
    )

    # 6: conjugate linearity of the involution.
    res, wit = 0.0, None
    for _ in range(samples):
        g = base.arrows[rng.integers(0, len(base.arrows))]
        e, f = rand(g), rand(g)
        lam, mu = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        _, lhs = bundle.fiber_adjoint(g, lam * e + mu * f)
        _, es = bundle.fiber_adjoint(g, e)
        _, fs = bundle.fiber_adjoint(g, f)
        d = op_norm(lhs - np.conj(lam) * es - np.conj(mu) * fs)
        if d > res:
            res, wit = d, {"arrow": g.name, "residual": d}
    reports.append(_residual_report("fell-06-conjugate-linear", res, tol, seed, wit))

    # 7: the involution is an involution.
    res, wit = 0.0, None
    for _ in range(samples):
        g = base.arrows[rng.integers(0, len(base.arrows))]
        e = rand(g)
        gi, es = bundle.fiber_adjoint(g, e)
        gii, ess = bundle.fiber_adjoint(gi, es)
        d = op_norm(ess - e) if gii == g else np.inf
        if d > res:
            res, wit = d, {"arrow": g.name, "residual": d}
    reports.append(_residual_report("fell-07-involutive", res, tol, seed, wit))

    # 8: (e1 e2)* = e2* e1*.
    res, wit = 0.0, None
    for (g1, g2) in _sample_pairs(base, rng, samples):
        e1, e2 = rand(g1), rand(g2)
        g, prod = mul(g1, e1, g2, e2)
        _, lhs = bundle.fiber_adjoint(g, prod)
        g2i, e2s = bundle.fiber_adjoint(g2, e2)
        g1i, e1s = bundle.fiber_adjoint(g1, e1)
        _, rhs = mul(g2i, e2s, g1i, e1s)
        d = op_norm(lhs - rhs)
        if d > res:
            res, wit = d, {"pair": (g1.name, g2.name), "residual": d}
    reports.append(_residual_report("fell-08-star-antimultiplicative", res, tol, seed, wit))

    # 9: C*-identity, relative residual.
    res, wit = 0.0, None
    for _ in range(samples):
        g = base.arrows[rng.integers(0, len(base.arrows))]
        e = rand(g)
        gi, es = bundle.fiber_adjoint(g, e)
        _, ese = mul(g, e, gi, es)
        nrm = op_norm(e)
        d = abs(op_norm(ese) - nrm * nrm) / (1.0 + nrm * nrm)
        if d > res:
            res, wit = d, {"arrow": g.name, "residual": d}
    reports.append(_residual_report("fell-09-cstar-identity", res, tol, seed, wit))

    # 10: e* e is positive.
    res, wit = 0.0, None
    for _ in range(samples):
        g = base.arrows[rng.integers(0, len(base.arrows))]
        e = rand(g)
        gi, es = bundle.fiber_adjoint(g, e)
        _, ese = mul(g, e, gi, es)
        w, _v = cxmat.hermitian_eig(ese)
        herm = op_norm(ese - adjoint(ese))
        d = max(0.0, -float(w[0]), herm)
        if d > res:
            res, wit = d, {"arrow": g.name, "residual": d}
    reports.append(_residual_report("fell-10-positive", res, tol, seed, wit))
    return reports


def _residual_report(check, res, tol, seed, wit) -> Report:
    ok = res <= tol
    return Report(check, "pass" if ok else "fail", float(res), seed, None if ok else wit)


def check_cstar_category(
    bundle: FellBundle, tol: float = 1e-9, samples: int = 100, seed: int = 42
) -> list:
    """Verify the six C*-category conditions homset by homset.

    Homsets are the fibers: (A, B) is the space over the arrow A -> B.
    Finite dimensionality makes completeness structural; it is reported,
    not computed.
    """
    rng = np.random.default_rng(seed)
    base = bundle.base
    reports = []

    def rand(g):
        return random_matrix(rng, bundle.fiber_shape(g))

    # 1: homsets are complex vector spaces with bilinear composition.
    res, wit = 0.0, None
    for (g1, g2) in _sample_pairs(base, rng, samples):
        a, ap, e = rand(g1), rand(g1), rand(g2)
        lam, mu = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        _, lhs = bundle.fiber_mul(g1, lam * a + mu * ap, g2, e)
        _, r1 = bundle.fiber_mul(g1, a, g2, e)
        _, r2 = bundle.fiber_mul(g1, ap, g2, e)
        d = op_norm(lhs - lam * r1 - mu * r2)
        if d > res:
            res, wit = d, {"pair": (g1.name, g2.name), "residual": d}
    reports.append(_residual_report("cstar-1-bilinear", res, tol, seed, wit))

    # 2: * is an adjoint-preserving contravariant endofunctor.
    res, wit = 0.0, None
    for (g1, g2) in _sample_pairs(base, rng, samples):
        m, p = rand(g1), rand(g2)
        g, prod = bundle.fiber_mul(g1, m, g2, p)
        _, lhs = bundle.fiber_adjoint(g, prod)
        g2i, ps = bundle.fiber_adjoint(g2, p)
        g1i, ms = bundle.fiber_adjoint(g1, m)
        _, rhs = bundle.fiber_mul(g2i, ps, g1i, ms)
        d = op_norm(lhs - rhs)
        if d > res:
            res, wit = d, {"pair": (g1.name, g2.name), "residual": d}
    reports.append(_residual_report("cstar-2-star-functor", res, tol, seed, wit))

    # 3: m* m is positive in (A, A) and faithful (m* m = 0 forces m = 0).
    res, wit = 0.0, None
    for _ in range(samples):
        g = base.arrows[rng.integers(0, len(base.arrows))]
        m = rand(g)
        gi, ms = bundle.fiber_adjoint(g, m)
        _, mm = bundle.fiber_mul(g, m, gi, ms)
        w, _v = cxmat.hermitian_eig(mm)
        d = max(0.0, -float(w[0]))
        nm = op_norm(m)
        d = max(d, abs(op_norm(mm) - nm * nm) / (1.0 + nm * nm))
        if d > res:
            res, wit = d, {"arrow": g.name, "residual": d}
    # faithfulness at the zero element is exact: 0* 0 = 0 and norm 0 means 0.
    for g in base.arrows:
        z = np.zeros(bundle.fiber_shape(g), dtype=np.complex128)
        gi, zs = bundle.fiber_adjoint(g, z)
        _, zz = bundle.fiber_mul(g, z, gi, zs)
        if op_norm(zz) != 0.0:
            res, wit = np.inf, {"arrow": g.name, "residual": np.inf}
    reports.append(_residual_report("cstar-3-positive-faithful", res, tol, seed, wit))

    # 4: norm submultiplicativity per homset pair.
    res, wit = 0.0, None
    for (g1, g2) in _sample_pairs(base, rng, samples):
        m, p = rand(g1), rand(g2)
        _, prod = bundle.fiber_mul(g1, m, g2, p)
        d = max(0.0, op_norm(prod) - op_norm(m) * op_norm(p))
        if d > res:
            res, wit = d, {"pair": (g1.name, g2.name), "residual": d}
    reports.append(_residual_report("cstar-4-submultiplicative", res, tol, seed, wit))

    # 5: completeness -- finite-dimensional homsets are Banach spaces.
    reports.append(Report("cstar-5-complete", "pass", 0.0, seed))

    # 6: C*-identity per homset.
    res, wit = 0.0, None
    for _ in range(samples):
        g = base.arrows[rng.integers(0, len(base.arrows))]
        m = rand(g)
        gi, ms = bundle.fiber_adjoint(g, m)
        _, mm = bundle.fiber_mul(g, m, gi, ms)
        nm = op_norm(m)
        d = abs(op_norm(mm) - nm * nm) / (1.0 + nm * nm)
        if d > res:
            res, wit = d, {"arrow": g.name, "residual": d}
    reports.append(_residual_report("cstar-6-cstar-identity", res, tol, seed, wit))
    return reports


def is_saturated(bundle: FellBundle, tol: float = 1e-9) -> bool:
    """True iff fiber products span the fiber over every composite arrow."""
    base = bundle.base
    for (g1, g2) in base.composable_pairs():
        g = base.compose(g1, g2)
        target = bundle.fiber_dim(g)
        if target == 0:
            continue
        cols = []
        for x in bundle.fiber_basis(g1):
            for y in bundle.fiber_basis(g2):
                _, prod = bundle.fiber_mul(g1, x, g2, y)
                cols.append(prod.reshape(-1))
        if not cols:
            return False
        span = np.stack(cols, axis=1)
        gram = span.conj().T @ span
        w, _ = cxmat.hermitian_eig(gram)
        lam_max = max(float(w[-1]), 0.0)
        rank = int(np.count_nonzero(w > tol * lam_max)) if lam_max > 0 else 0
        if rank < target:
            return False
    return True


def check_projection_functor(bundle: FellBundle, samples: int = 100, seed: int = 42) -> Report:
    """Regression guard for the bundle bookkeeping.

    Checks that products land over composed arrows with the right shape,
    adjoints land over inverses, and unit fibers act as identities.
    """
    rng = np.random.default_rng(seed)
    base = bundle.base
    for (g1, g2) in _sample_pairs(base, rng, samples):
        e1 = random_matrix(rng, bundle.fiber_shape(g1))
        e2 = random_matrix(rng, bundle.fiber_shape(g2))
        g, prod = bundle.fiber_mul(g1, e1, g2, e2)
        if g != base.compose(g1, g2) or prod.shape != bundle.fiber_shape(g):
            return Report(
                "projection-functor", "fail", np.inf, seed, {"pair": (g1.name, g2.name)}
            )
    res = 0.0
    for g in base.arrows:
        e = random_matrix(rng, bundle.fiber_shape(g))
        gi, es = bundle.fiber_adjoint(g, e)
        if gi != base.inverse(g) or es.shape != bundle.fiber_shape(gi):
            return Report("projection-functor", "fail", np.inf, seed, {"arrow": g.name})
        u_src = base.unit(g.src)
        _, left = bundle.fiber_mul(u_src, bundle.unit_element(g.src), g, e)
        u_dst = base.unit(g.dst)
        _, right = bundle.fiber_mul(g, e, u_dst, bundle.unit_element(g.dst))
        res = max(res, op_norm(left - e), op_norm(right - e))
    ok = res == 0.0
    return Report(
        "projection-functor",
        "pass" if ok else "fail",
        res,
        seed,
        None if ok else {"residual": res},
    )

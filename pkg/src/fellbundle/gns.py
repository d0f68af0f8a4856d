"""Generalized GNS construction anchored at a state on one unit fiber.

Given a state phi on the algebra (A, A) — a density matrix rho with
phi(a) = tr(rho a) — each homset (A, B) acquires the semidefinite inner
product phi(m1* m2).  Quotienting by the null space yields the Hilbert
space H_B; morphisms act by left composition and 2-cells (linear maps
between homsets) descend to the quotients when they respect the null
spaces.  The cyclic vector is the class of the identity of (A, A).

All quotients run through :func:`fellbundle.cxmat.gram_quotient`; the
dHilb variant (state-free Hilbert-Schmidt inner product tr(a* b)) uses
the same machinery via ``inner="hs"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cxmat import DomainError, adjoint, as_matrix, gram_quotient, hermitian_eig, op_norm
from .fellcore import FellBundle
from .report import Report


class QuotientError(ValueError):
    """A map does not descend to the GNS quotient; carries a witness vector."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class PreconditionError(ValueError):
    """Inputs violate a stated precondition (e.g. disagreeing states)."""


class InconsistencyError(ValueError):
    """A derived object failed verification; carries a witness."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


_STATE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class State:
    """A state on the unit fiber at ``obj``: phi(a) = tr(rho a)."""

    obj: object
    rho: np.ndarray

    def __post_init__(self):
        rho = as_matrix(self.rho)
        if rho.shape[0] != rho.shape[1]:
            raise DomainError(f"density matrix must be square, got {rho.shape}")
        if op_norm(rho - adjoint(rho)) > _STATE_TOL:
            raise DomainError("density matrix is not Hermitian within 1e-12")
        w, _ = hermitian_eig(rho)
        if w[0] < -_STATE_TOL:
            raise DomainError(f"density matrix has negative eigenvalue {w[0]:.3e}")
        if abs(np.trace(rho) - 1.0) > _STATE_TOL:
            raise DomainError(f"density matrix must have unit trace, got {np.trace(rho):.12f}")
        object.__setattr__(self, "rho", rho)

    def __call__(self, a) -> complex:
        return complex(np.trace(self.rho @ as_matrix(a)))

    @classmethod
    def tracial(cls, obj, n: int) -> "State":
        return cls(obj, np.eye(n, dtype=np.complex128) / n)

    @classmethod
    def pure(cls, obj, n: int, k: int = 0) -> "State":
        rho = np.zeros((n, n), dtype=np.complex128)
        rho[k, k] = 1.0
        return cls(obj, rho)


@dataclass(frozen=True, eq=False)
class _Space:
    """The GNS quotient of one homset (A, B)."""

    arrow: object
    basis: tuple  # matrix units of the homset
    gram: np.ndarray
    dim: int
    embed: np.ndarray  # dim x k: representative coordinates -> quotient
    lift: np.ndarray  # k x dim: quotient -> a representative, embed @ lift = id

    def null_projector(self) -> np.ndarray:
        """Projector onto the numerical null space of the Gram pairing."""
        k = len(self.basis)
        return np.eye(k, dtype=np.complex128) - self.lift @ self.embed


@dataclass(eq=False)
class GnsRep:
    """A GNS representation: quotient spaces, operator images, cyclic vector.

    ``spaces`` maps an object id B to the quotient of (A, B); the anchor's
    own space is built first and carries the cyclic vector.
    """

    bundle: FellBundle
    anchor: object
    state: State
    tol: float
    inner: str = "state"
    spaces: dict = field(default_factory=dict)
    xi: np.ndarray | None = None

    def space(self, key) -> _Space:
        try:
            return self.spaces[key]
        except KeyError:
            raise DomainError(f"no GNS space built for object {key!r}") from None

    def op_obj(self, a) -> np.ndarray:
        """The image of a in (A, A) acting on H_A by left multiplication."""
        sp = self.space(self.anchor)
        n = self.bundle.objdim[self.anchor]
        a = self.bundle.check_element(self.bundle.base.unit(self.anchor), a)
        lmat = np.kron(a, np.eye(n, dtype=np.complex128))
        return sp.embed @ lmat @ sp.lift

    def op_mor(self, key, m) -> np.ndarray:
        """The image of m in (A, B) as a map H_A -> H_B, [x] -> [m x]."""
        sp_a = self.space(self.anchor)
        sp_b = self.space(key)
        m = self.bundle.check_element(sp_b.arrow, m)
        n = self.bundle.objdim[self.anchor]
        lmat = np.kron(m, np.eye(n, dtype=np.complex128))
        return sp_b.embed @ lmat @ sp_a.lift

    def vector_of(self, key, x) -> np.ndarray:
        """Quotient coordinates of a homset element."""
        sp = self.space(key)
        return sp.embed @ as_matrix(x).reshape(-1)

    def state_values(self) -> np.ndarray:
        sp = self.space(self.anchor)
        return np.array([self.state(b) for b in sp.basis])

    def reconstruction_residual(self) -> float:
        """max over the (A, A) basis of |phi(a) - <xi, F(a) xi>|."""
        res = 0.0
        for a in self.space(self.anchor).basis:
            lhs = self.state(a)
            rhs = np.vdot(self.xi, self.op_obj(a) @ self.xi)
            res = max(res, abs(lhs - rhs))
        return float(res)


def _gram(bundle: FellBundle, state: State, g, g_inv, basis, inner: str) -> np.ndarray:
    k = len(basis)
    gram = np.zeros((k, k), dtype=np.complex128)
    for i, bi in enumerate(basis):
        gi, bi_star = bundle.fiber_adjoint(g, bi)
        assert gi == g_inv
        for j, bj in enumerate(basis):
            _, prod = bundle.fiber_mul(g, bj, g_inv, bi_star)
            gram[i, j] = state(prod) if inner == "state" else np.trace(prod)
    return gram


def _build_space(bundle, state, g, tol, inner) -> _Space:
    g_inv = bundle.base.inverse(g)
    basis = tuple(bundle.fiber_basis(g))
    gram = _gram(bundle, state, g, g_inv, basis, inner)
    dim, isometry = gram_quotient(gram, tol)
    # embed = isometry* gram = Lam^(1/2) V* on the kept eigenpairs; with
    # lift = isometry this is a left inverse and <embed x, embed y>
    # reproduces the Gram pairing on representatives.
    embed = adjoint(isometry) @ gram
    return _Space(g, basis, gram, dim, embed, isometry)


def gns_object(bundle, anchor, state: State, tol: float = 1e-9,
               inner: str = "state") -> GnsRep:
    """Build the GNS space of (A, A) and the cyclic vector.

    The Gram matrix is phi(b_i* b_j) over the matrix-unit basis; kept
    eigenpairs define the quotient and xi is the class of the identity.
    A double bundle is folded first, so anchors are its vertices.
    """
    if inner not in ("state", "hs"):
        raise DomainError(f"inner must be 'state' or 'hs', got {inner!r}")
    if not isinstance(bundle, FellBundle):
        if not hasattr(bundle, "folded_bundle"):
            raise DomainError(f"cannot build a GNS space over {type(bundle).__name__}")
        bundle = bundle.folded_bundle()
    if state.obj != anchor:
        raise DomainError(f"state lives at {state.obj!r}, not at anchor {anchor!r}")
    n = bundle.objdim[anchor]
    if state.rho.shape != (n, n):
        raise DomainError(
            f"density matrix must be {n}x{n} for object {anchor!r}, got {state.rho.shape}"
        )
    rep = GnsRep(bundle, anchor, state, tol, inner)
    unit = bundle.base.unit(anchor)
    sp = _build_space(bundle, state, unit, tol, inner)
    rep.spaces[anchor] = sp
    rep.xi = sp.embed @ bundle.unit_element(anchor).reshape(-1)
    return rep


def gns_homset(rep: GnsRep, target, tol: float | None = None) -> GnsRep:
    """Extend a representation with the quotient of (A, target).

    Elements act by left composition H_A -> H_target; the operator norm
    bound ||F(m)|| <= ||m|| is a Cauchy-Schwarz consequence and is
    verified by the callers' property tests.
    """
    if rep.xi is None or rep.anchor not in rep.spaces:
        raise DomainError("build the object part first (gns_object)")
    tol = rep.tol if tol is None else tol
    base = rep.bundle.base
    arrows = [g for g in base.arrows if g.src == rep.anchor and g.dst == target]
    if not arrows:
        raise DomainError(f"no arrow from anchor {rep.anchor!r} to {target!r}")
    rep.spaces[target] = _build_space(rep.bundle, rep.state, arrows[0], tol, rep.inner)
    return rep


def gns_twocell(rep: GnsRep, alpha, src_key, dst_key, tol: float | None = None) -> np.ndarray:
    """Descend a linear map between homsets to the quotients.

    ``alpha`` maps vec((A, src_key)) to vec((A, dst_key)) (row-major).
    Raises :class:`QuotientError` with a witness if the null space of the
    source Gram is not carried into the target null space.
    """
    tol = rep.tol if tol is None else tol
    sp_m = rep.space(src_key)
    sp_n = rep.space(dst_key)
    alpha = as_matrix(alpha)
    want = (len(sp_n.basis), len(sp_m.basis))
    if alpha.shape != want:
        raise DomainError(f"2-cell matrix must be {want}, got {alpha.shape}")
    if sp_m.dim < len(sp_m.basis):
        null_proj = sp_m.null_projector()
        leak = sp_n.embed @ alpha @ null_proj
        worst = float(np.abs(leak).max()) if leak.size else 0.0
        if worst > tol * (1.0 + op_norm(alpha)):
            col = int(np.abs(leak).max(axis=0).argmax())
            raise QuotientError(
                f"2-cell does not respect the null space (leak {worst:.3e})",
                witness=null_proj[:, col],
            )
    return sp_n.embed @ alpha @ sp_m.lift


def twocell_adjoint(alpha) -> np.ndarray:
    """Adjoint of a 2-cell for the Hilbert-Schmidt pairing tr(a* b)."""
    return adjoint(alpha)


def _pinv_rows(s: np.ndarray, tol: float) -> np.ndarray:
    # right pseudo-inverse of a full-row-rank matrix via its Gram
    gram = s @ s.conj().T
    w, v = hermitian_eig(gram)
    lam_max = max(float(w[-1]), 0.0)
    inv = np.zeros_like(gram)
    for lam, col in zip(w, v.T):
        if lam > tol * lam_max:
            inv += np.outer(col, col.conj()) / lam
    return s.conj().T @ inv


def gns_intertwiner(rep1: GnsRep, rep2: GnsRep, tol: float = 1e-9) -> dict:
    """The natural unitary family carrying rep1 onto rep2.

    Requires equal state values on the (A, A) basis.  For every built
    space the unitary is defined by F1(x) xi1 -> F2(x) xi2 over that
    space's homset basis and verified isometric; returns a dict keyed like
    ``spaces``.
    """
    vals1, vals2 = rep1.state_values(), rep2.state_values()
    gap = float(np.abs(vals1 - vals2).max())
    if gap > tol:
        raise PreconditionError(f"state values disagree by {gap:.3e}")
    out = {}
    for key in rep1.spaces:
        sp1, sp2 = rep1.space(key), rep2.space(key)
        if key == rep1.anchor:
            cols1 = np.stack([rep1.op_obj(b) @ rep1.xi for b in sp1.basis], axis=1)
            cols2 = np.stack([rep2.op_obj(b) @ rep2.xi for b in sp2.basis], axis=1)
        else:
            cols1 = np.stack([rep1.op_mor(key, b) @ rep1.xi for b in sp1.basis], axis=1)
            cols2 = np.stack([rep2.op_mor(key, b) @ rep2.xi for b in sp2.basis], axis=1)
        u = cols2 @ _pinv_rows(cols1, tol)
        defect = op_norm(u.conj().T @ u - np.eye(u.shape[1], dtype=np.complex128))
        if defect > tol:
            raise InconsistencyError(
                f"intertwiner at {key!r} is not isometric (defect {defect:.3e})",
                witness=u,
            )
        out[key] = u
    return out


def conjugated_rep(rep: GnsRep, unitaries: dict) -> GnsRep:
    """A unitarily rotated copy of a representation (testing oracle)."""
    twin = GnsRep(rep.bundle, rep.anchor, rep.state, rep.tol, rep.inner)
    for key, sp in rep.spaces.items():
        v = as_matrix(unitaries[key])
        twin.spaces[key] = _Space(
            sp.arrow, sp.basis, sp.gram, sp.dim, v @ sp.embed, sp.lift @ adjoint(v)
        )
    twin.xi = as_matrix(unitaries[rep.anchor]) @ rep.xi
    return twin


def check_gns(rep: GnsRep, samples: int = 100, seed: int = 42) -> list:
    """Property reports for a built representation.

    Covers state reconstruction, multiplicativity and adjoints on the
    anchor algebra, norm contraction and cyclicity for every homset.
    """
    from .fellcore import random_matrix

    rng = np.random.default_rng(seed)
    tol = rep.tol
    reports = []
    n = rep.bundle.objdim[rep.anchor]

    res = rep.reconstruction_residual()
    reports.append(_rep_report("gns-reconstruction", res, tol, seed))

    res = 0.0
    for _ in range(samples):
        a = random_matrix(rng, (n, n))
        b = random_matrix(rng, (n, n))
        res = max(res, op_norm(rep.op_obj(a @ b) - rep.op_obj(a) @ rep.op_obj(b)))
        res = max(res, op_norm(rep.op_obj(adjoint(a)) - adjoint(rep.op_obj(a))))
    res = max(res, op_norm(rep.op_obj(np.eye(n)) - np.eye(rep.space(rep.anchor).dim)))
    reports.append(_rep_report("gns-star-functor", res, tol, seed))

    res = 0.0
    for _ in range(samples):
        a = random_matrix(rng, (n, n))
        res = max(res, max(0.0, op_norm(rep.op_obj(a)) - op_norm(a)))
    for key in rep.spaces:
        if key == rep.anchor:
            continue
        shape = rep.bundle.fiber_shape(rep.space(key).arrow)
        for _ in range(samples):
            m = random_matrix(rng, shape)
            res = max(res, max(0.0, op_norm(rep.op_mor(key, m)) - op_norm(m)))
    reports.append(_rep_report("gns-contraction", res, tol, seed))

    bad = None
    for key, sp in rep.spaces.items():
        if key == rep.anchor:
            cols = np.stack([rep.op_obj(b) @ rep.xi for b in sp.basis], axis=1)
        else:
            cols = np.stack([rep.op_mor(key, b) @ rep.xi for b in sp.basis], axis=1)
        gram = cols.conj().T @ cols
        w, _ = hermitian_eig(gram)
        lam_max = max(float(w[-1]), 0.0)
        rank = int(np.count_nonzero(w > tol * lam_max)) if lam_max > 0 else 0
        if rank != sp.dim:
            bad = {"space": str(key), "rank": rank, "dim": sp.dim}
    reports.append(Report("gns-cyclic", "fail" if bad else "pass", 0.0, seed, bad))
    return reports


def _rep_report(check, res, tol, seed) -> Report:
    ok = res <= tol
    return Report(check, "pass" if ok else "fail", float(res), seed,
                  None if ok else {"residual": float(res)})

import numpy as np
import pytest

from fellbundle.cxmat import DomainError, adjoint, op_norm
from fellbundle.fellcore import FellBundle, random_matrix
from fellbundle.gns import (
    InconsistencyError,
    PreconditionError,
    QuotientError,
    State,
    check_gns,
    conjugated_rep,
    gns_homset,
    gns_intertwiner,
    gns_object,
    gns_twocell,
    twocell_adjoint,
)
from fellbundle.groupoid import pair_groupoid
from fellbundle.report import all_passed


def haar_unitary(rng, n):
    q, r = np.linalg.qr(random_matrix(rng, (n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def m2_bundle():
    return FellBundle(pair_groupoid(2), {0: 2, 1: 2})


@pytest.fixture
def trace_rep(m2_bundle):
    rep = gns_object(m2_bundle, 0, State.tracial(0, 2))
    return gns_homset(rep, 1)


def test_state_validation():
    with pytest.raises(DomainError):
        State(0, np.array([[1.0, 1.0], [0.0, 0.0]]))  # not Hermitian
    with pytest.raises(DomainError):
        State(0, np.diag([2.0, -1.0]))  # negative eigenvalue
    with pytest.raises(DomainError):
        State(0, np.diag([0.7, 0.7]))  # trace != 1
    s = State.tracial(0, 3)
    assert s(np.eye(3)) == pytest.approx(1.0)


def test_gns_scalar_algebra():
    bundle = FellBundle(pair_groupoid(1), {0: 1})
    rep = gns_object(bundle, 0, State(0, np.eye(1)))
    assert rep.space(0).dim == 1
    a = np.array([[2.0 + 1.0j]])
    assert np.allclose(rep.op_obj(a), a, atol=1e-12)
    assert np.allclose(rep.xi, np.array([1.0]), atol=1e-12)


def test_gns_trace_state_dim4_and_gram(m2_bundle):
    rep = gns_object(m2_bundle, 0, State.tracial(0, 2))
    sp = rep.space(0)
    assert sp.dim == 4
    # hand-computed Gram on matrix units: (1/2) identity
    assert np.allclose(sp.gram, 0.5 * np.eye(4), atol=1e-12)


def test_gns_trace_state_is_isometric(m2_bundle):
    rep = gns_object(m2_bundle, 0, State.tracial(0, 2))
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = random_matrix(rng, (2, 2))
        assert abs(op_norm(rep.op_obj(a)) - op_norm(a)) <= 1e-10


def test_gns_pure_state_dim2(m2_bundle):
    rep = gns_object(m2_bundle, 0, State.pure(0, 2, 0))
    sp = rep.space(0)
    assert sp.dim == 2
    assert np.allclose(sp.gram, np.diag([1.0, 0.0, 1.0, 0.0]), atol=1e-12)
    assert rep.reconstruction_residual() <= 1e-10


def test_reconstruction_full_basis(trace_rep):
    assert trace_rep.reconstruction_residual() <= 1e-10


def test_functoriality(trace_rep):
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b = random_matrix(rng, (2, 2)), random_matrix(rng, (2, 2))
        lhs = trace_rep.op_obj(b @ a)  # a then b in diagram order
        rhs = trace_rep.op_obj(b) @ trace_rep.op_obj(a)
        assert op_norm(lhs - rhs) <= 1e-10
        assert op_norm(trace_rep.op_obj(adjoint(a)) - adjoint(trace_rep.op_obj(a))) <= 1e-10
    assert op_norm(trace_rep.op_obj(np.eye(2)) - np.eye(4)) <= 1e-12


def test_homset_line_bundle_scalar():
    bundle = FellBundle(pair_groupoid(2), {0: 1, 1: 1})
    rep = gns_object(bundle, 0, State(0, np.eye(1)))
    gns_homset(rep, 1)
    assert rep.space(1).dim == 1
    m = np.array([[1.5 - 0.5j]])
    assert np.allclose(rep.op_mor(1, m), m, atol=1e-12)


def test_homset_dim_and_cyclicity(trace_rep):
    assert trace_rep.space(1).dim == 4
    reports = check_gns(trace_rep, samples=60, seed=3)
    assert all_passed(reports)


def test_contraction_bound(trace_rep):
    rng = np.random.default_rng(2)
    for _ in range(100):
        m = random_matrix(rng, (2, 2))
        assert op_norm(trace_rep.op_mor(1, m)) <= op_norm(m) + 1e-10


def test_cauchy_schwarz_for_state(m2_bundle):
    rng = np.random.default_rng(4)
    phi = State.tracial(0, 2)
    for _ in range(100):
        x, y = random_matrix(rng, (2, 2)), random_matrix(rng, (2, 2))
        lhs = abs(phi(adjoint(x) @ y)) ** 2
        rhs = phi(adjoint(x) @ x).real * phi(adjoint(y) @ y).real
        assert lhs <= rhs + 1e-12


def test_twocell_identity_and_scalars(trace_rep):
    d = len(trace_rep.space(1).basis)
    f = gns_twocell(trace_rep, np.eye(d), 1, 1)
    assert np.allclose(f, np.eye(trace_rep.space(1).dim), atol=1e-12)
    f = gns_twocell(trace_rep, (2.0 - 1.0j) * np.eye(d), 1, 1)
    assert np.allclose(f, (2.0 - 1.0j) * np.eye(trace_rep.space(1).dim), atol=1e-12)


def test_twocell_line_bundle_scalar():
    bundle = FellBundle(pair_groupoid(2), {0: 1, 1: 1})
    rep = gns_object(bundle, 0, State(0, np.eye(1)))
    gns_homset(rep, 1)
    alpha = np.array([[0.5 + 2.0j]])
    f = gns_twocell(rep, alpha, 1, 1)
    assert np.allclose(f, alpha, atol=1e-12)
    assert abs(op_norm(f) - abs(alpha[0, 0])) <= 1e-12


def test_twocell_functorial_and_adjoint(trace_rep):
    rng = np.random.default_rng(5)
    d = len(trace_rep.space(1).basis)
    for _ in range(20):
        a1, a2 = random_matrix(rng, (d, d)), random_matrix(rng, (d, d))
        lhs = gns_twocell(trace_rep, a1 @ a2, 1, 1)
        rhs = gns_twocell(trace_rep, a1, 1, 1) @ gns_twocell(trace_rep, a2, 1, 1)
        assert op_norm(lhs - rhs) <= 1e-10
        # with a faithful tracial state the quotient pairing is the
        # Hilbert-Schmidt one, so F(alpha)* = F(alpha*)
        lhs = adjoint(gns_twocell(trace_rep, a1, 1, 1))
        rhs = gns_twocell(trace_rep, twocell_adjoint(a1), 1, 1)
        assert op_norm(lhs - rhs) <= 1e-10
        assert op_norm(gns_twocell(trace_rep, a1, 1, 1)) <= op_norm(a1) + 1e-10


def test_twocell_null_space_violation(m2_bundle):
    # pure state: (A, A) Gram is diag(1, 0, 1, 0); the map sending the
    # null basis vector e01 onto e00 does not descend to the quotient.
    rep = gns_object(m2_bundle, 0, State.pure(0, 2, 0))
    alpha = np.zeros((4, 4))
    alpha[0, 1] = 1.0
    with pytest.raises(QuotientError) as err:
        gns_twocell(rep, alpha, 0, 0)
    assert err.value.witness is not None


def test_intertwiner_identity_and_permutation(trace_rep):
    u = gns_intertwiner(trace_rep, trace_rep)
    for key in u:
        assert np.allclose(u[key], np.eye(u[key].shape[0]), atol=1e-10)
    perm = np.eye(4)[[2, 0, 3, 1]].astype(np.complex128)
    twin = conjugated_rep(trace_rep, {0: perm, 1: perm})
    u = gns_intertwiner(trace_rep, twin)
    assert np.allclose(u[0], perm, atol=1e-9)
    assert np.allclose(u[1], perm, atol=1e-9)


def test_intertwiner_recovers_conjugation(trace_rep):
    rng = np.random.default_rng(6)
    us = {0: haar_unitary(rng, 4), 1: haar_unitary(rng, 4)}
    twin = conjugated_rep(trace_rep, us)
    u = gns_intertwiner(trace_rep, twin)
    assert np.abs(u[0] - us[0]).max() <= 1e-9
    assert np.abs(u[1] - us[1]).max() <= 1e-9
    # intertwining on generators, including a 2-cell
    res = 0.0
    d = len(trace_rep.space(1).basis)
    for _ in range(25):
        a = random_matrix(rng, (2, 2))
        res = max(res, op_norm(u[0] @ trace_rep.op_obj(a) - twin.op_obj(a) @ u[0]))
        m = random_matrix(rng, (2, 2))
        res = max(res, op_norm(u[1] @ trace_rep.op_mor(1, m) - twin.op_mor(1, m) @ u[0]))
        alpha = random_matrix(rng, (d, d))
        f1 = gns_twocell(trace_rep, alpha, 1, 1)
        f2 = gns_twocell(twin, alpha, 1, 1)
        res = max(res, op_norm(u[1] @ f1 - f2 @ u[1]))
    assert res <= 1e-9


def test_intertwiner_with_phase_on_cyclic_vector(trace_rep):
    rng = np.random.default_rng(7)
    phase = np.exp(1.0j * 0.8)
    us = {0: phase * haar_unitary(rng, 4), 1: haar_unitary(rng, 4)}
    twin = conjugated_rep(trace_rep, us)
    u = gns_intertwiner(trace_rep, twin)
    # alignment on the cyclic vector fixes the global phase
    assert np.allclose(u[0] @ trace_rep.xi, twin.xi, atol=1e-9)


def test_intertwiner_preconditions(m2_bundle, trace_rep):
    other = gns_object(m2_bundle, 0, State.pure(0, 2, 0))
    with pytest.raises(PreconditionError):
        gns_intertwiner(trace_rep, other)


def test_intertwiner_detects_non_isometry(trace_rep):
    bad = conjugated_rep(trace_rep, {0: 2.0 * np.eye(4), 1: np.eye(4)})
    with pytest.raises(InconsistencyError) as err:
        gns_intertwiner(trace_rep, bad)
    assert err.value.witness is not None


def test_hilbert_schmidt_variant(m2_bundle):
    # dHilb: the state-free inner product tr(a* b) makes the matrix units
    # orthonormal, so nothing is quotiented away.
    rep = gns_object(m2_bundle, 0, State.pure(0, 2, 0), inner="hs")
    assert rep.space(0).dim == 4
    assert np.allclose(rep.space(0).gram, np.eye(4), atol=1e-12)
    gns_homset(rep, 1)
    assert rep.space(1).dim == 4


def test_gns_accepts_double_bundle():
    # a double bundle is folded first: anchors are its vertices
    from fellbundle.dfell import DoubleBundle
    from fellbundle.groupoid import grid_double_groupoid

    db = DoubleBundle.line(grid_double_groupoid(1, 1, folding=True))
    rep = gns_object(db, (0, 0), State((0, 0), np.eye(1)))
    gns_homset(rep, (1, 1))
    assert rep.space((0, 0)).dim == 1 and rep.space((1, 1)).dim == 1
    assert rep.reconstruction_residual() <= 1e-12
    with pytest.raises(DomainError):
        gns_object(object(), 0, State(0, np.eye(1)))


def test_gns_rejects_bad_anchor(m2_bundle):
    with pytest.raises(DomainError):
        gns_object(m2_bundle, 1, State.tracial(0, 2))
    with pytest.raises(DomainError):
        gns_object(m2_bundle, 0, State.tracial(0, 3))
    rep = gns_object(m2_bundle, 0, State.tracial(0, 2))
    with pytest.raises(DomainError):
        rep.space(1)  # homset not built yet

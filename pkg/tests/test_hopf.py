import numpy as np
import pytest

from qg import _linalg as la
from qg import hopf
from qg.errors import (
    AxiomViolation,
    EquivalenceViolation,
    NoInvariantState,
    NotPositive,
)


def examples():
    return [
        hopf.fn_algebra(hopf.cyclic_table(2), name="C(Z2)"),
        hopf.fn_algebra(hopf.symmetric_3_table(), name="C(S3)"),
        hopf.group_algebra(hopf.cyclic_table(2), name="C[Z2]"),
        hopf.group_algebra(hopf.symmetric_3_table(), name="C[S3]"),
        hopf.kac_paljutkin(),
        hopf.trivial_hopf(),
    ]


@pytest.fixture(scope="module", params=range(6),
                ids=["c_z2", "c_s3", "group_z2", "group_s3", "kp", "trivial"])
def example(request):
    return examples()[request.param]


def test_validate_examples(example):
    report = hopf.validate_hopf(example, tol=1e-9)
    assert report.max_residual <= 1e-9


def test_validate_catches_broken_mult():
    h = hopf.fn_algebra(hopf.cyclic_table(2))
    h.mult[0, 0, 0] = 2.0
    with pytest.raises(AxiomViolation):
        hopf.validate_hopf(h)


def test_haar_known_weights():
    cz2 = hopf.fn_algebra(hopf.cyclic_table(2))
    assert np.allclose(hopf.haar_state(cz2).weights, [0.5, 0.5], atol=1e-12)
    cs3 = hopf.fn_algebra(hopf.symmetric_3_table())
    assert np.allclose(hopf.haar_state(cs3).weights, np.full(6, 1 / 6), atol=1e-12)
    gz2 = hopf.group_algebra(hopf.cyclic_table(2))
    assert np.allclose(hopf.haar_state(gz2).weights, [1.0, 0.0], atol=1e-12)
    gs3 = hopf.group_algebra(hopf.symmetric_3_table())
    want = np.zeros(6)
    want[0] = 1.0
    assert np.allclose(hopf.haar_state(gs3).weights, want, atol=1e-12)


def test_haar_invariance_and_positivity(example):
    haar = hopf.haar_state(example)
    assert max(haar.residuals.values()) <= 1e-9
    assert abs(haar.value(example.unit) - 1.0) < 1e-12
    assert np.linalg.eigvalsh(haar.gram)[0] > 0
    assert haar.tracial


def test_no_invariant_state():
    # pointwise multiplication with group-like coproduct kills every
    # invariant functional
    n = 2
    mult = np.zeros((n, n, n))
    comult = np.zeros((n, n, n))
    for i in range(n):
        mult[i, i, i] = 1.0
        comult[i, i, i] = 1.0
    h = hopf.HopfData(mult, comult, np.ones(n), np.ones(n), np.eye(n), np.eye(n))
    with pytest.raises(NoInvariantState):
        hopf.haar_state(h)


def test_not_positive():
    # flip the star on C[Z2] so that h(x* x) takes negative values
    h = hopf.group_algebra(hopf.cyclic_table(2))
    h.star = np.diag([1.0, -1.0]) @ h.star
    with pytest.raises((NotPositive, AxiomViolation)):
        hopf.haar_state(h)


def test_gns_is_star_representation(example):
    real = hopf.realize(example)
    gram = real.haar.gram
    g = np.random.default_rng(3)
    n = example.dim
    for _ in range(5):
        x = g.standard_normal(n) + 1j * g.standard_normal(n)
        y = g.standard_normal(n) + 1j * g.standard_normal(n)
        assert la.norm_inf(real.pi(example.product(x, y))
                           - real.pi(x) @ real.pi(y)) < 1e-9
        assert la.norm_inf(real.pi(example.apply_star(x))
                           - la.dagger(real.pi(x))) < 1e-9
        # <Lambda(x), Lambda(y)> = h(x* y)
        ip = np.vdot(real.lam @ x, real.lam @ y)
        assert abs(ip - np.conj(x) @ gram @ y) < 1e-9


def test_w_explicit_on_c_z2():
    h = hopf.fn_algebra(hopf.cyclic_table(2))
    w = hopf.realize(h).w
    want = np.zeros((4, 4))
    for s in range(2):
        for t in range(2):
            want[2 * s + ((s + t) % 2), 2 * s + t] = 1.0
    assert la.norm_inf(w - want) < 1e-12


def test_w_residuals(example):
    ut = hopf.multiplicative_unitary(example)
    assert ut.residuals["unitary"] <= 1e-9
    assert ut.residuals["pentagon"] <= 1e-9
    assert ut.residuals["implements_comult"] <= 1e-9


def test_dual_of_function_algebra_is_group_algebra():
    for table in (hopf.cyclic_table(2), hopf.cyclic_table(3), hopf.symmetric_3_table()):
        d = hopf.dual_hopf(hopf.fn_algebra(table))
        want = hopf.group_algebra(table)
        assert hopf.max_tensor_difference(d.hopf, want) < 1e-9


def test_dual_of_group_algebra_is_function_algebra():
    for table in (hopf.cyclic_table(2), hopf.cyclic_table(3), hopf.symmetric_3_table()):
        d = hopf.dual_hopf(hopf.group_algebra(table))
        want = hopf.fn_algebra(table)
        assert hopf.max_tensor_difference(d.hopf, want) < 1e-9


def test_dual_block_structures():
    assert hopf.block_structure(hopf.dual_hopf(hopf.fn_algebra(hopf.symmetric_3_table())).hopf) == (1, 1, 2)
    assert hopf.block_structure(hopf.dual_hopf(hopf.group_algebra(hopf.symmetric_3_table())).hopf) == (1,) * 6
    assert hopf.dual_hopf(hopf.group_algebra(hopf.symmetric_3_table())).hopf.is_commutative()


def test_dual_haar_is_normalized_trace(example):
    d = hopf.dual_hopf(example)
    weights = hopf.haar_state(d.hopf).weights
    trace = np.array([np.trace(z) for z in d.ops]) / example.dim
    assert np.allclose(weights, trace, atol=1e-9)


def test_bidual(example):
    diffs = hopf.bidual_check(example, tol=1e-8)
    assert max(diffs.values()) <= 1e-8


def test_antipode_from_w(example):
    smat, resid = hopf.antipode_from_w(example)
    assert resid <= 1e-8
    assert la.norm_inf(smat - example.antipode) <= 1e-8


def test_left_multiplier_oracle_on_c_s3():
    # on C(G) the dual acts by lambda operators and the multiplier comes out
    # as Theta(e_j) = sum_i c_{j i^{-1}} e_i; derived independently of the
    # engine's least-squares path
    table = hopf.symmetric_3_table()
    inv = hopf._inverses(table)
    h = hopf.fn_algebra(table)
    g = np.random.default_rng(11)
    c = g.standard_normal(6) + 1j * g.standard_normal(6)
    theta = hopf.left_multiplier(h, c)
    want = np.zeros((6, 6), dtype=complex)
    for i in range(6):
        for j in range(6):
            want[i, j] = c[table[j][inv[i]]]
    assert la.norm_inf(theta - want) < 1e-9
    assert hopf.multiplier_relation_residual(h, c, theta) < 1e-9


def test_left_multiplier_on_group_algebra_is_diagonal():
    h = hopf.group_algebra(hopf.symmetric_3_table())
    g = np.random.default_rng(4)
    c = g.standard_normal(6) + 1j * g.standard_normal(6)
    theta = hopf.left_multiplier(h, c)
    assert la.norm_inf(theta - np.diag(c)) < 1e-9


def test_l2_implementation(example):
    g = np.random.default_rng(8)
    n = example.dim
    real = hopf.realize(example)
    for _ in range(5):
        c = g.standard_normal(n) + 1j * g.standard_normal(n)
        rep = hopf.l2_implement(real, c)
        assert rep.residual <= 1e-8
        # spot check the defining property on a random algebra element
        b = g.standard_normal(n) + 1j * g.standard_normal(n)
        lhs = real.lam @ (rep.theta @ b)
        rhs = rep.t @ (real.lam @ b)
        assert np.linalg.norm(lhs - rhs) < 1e-8


def test_classify_multiplier_is_left_centralizer():
    h = hopf.fn_algebra(hopf.symmetric_3_table())
    real = hopf.realize(h)
    g = np.random.default_rng(5)
    c = g.standard_normal(6) + 1j * g.standard_normal(6)
    theta = hopf.left_multiplier(real, c)
    cls = hopf.classify_l2_implementation(real, theta)
    assert cls.in_dual
    assert cls.label in ("left_centralizer", "central")
    # a symmetric (class function) multiplier is two-sided; in lex order the
    # transpositions sit at indices 1, 2, 5 and the 3-cycles at 3, 4
    classes = {0: [0], 1: [1, 2, 5], 2: [3, 4]}
    cc = np.zeros(6, dtype=complex)
    for k, members in classes.items():
        for m in members:
            cc[m] = [1.0, 2.0 - 1j, 0.5j][k]
    theta_c = hopf.left_multiplier(real, cc)
    assert hopf.classify_l2_implementation(real, theta_c).label == "central"


def test_classify_non_multiplier():
    h = hopf.fn_algebra(hopf.symmetric_3_table())
    phi = np.zeros((6, 6))
    phi[0, 0] = 1.0  # rank one cut-down, not a module map
    cls = hopf.classify_l2_implementation(h, phi)
    assert cls.label == "none"


def test_classify_identity_is_central(example):
    cls = hopf.classify_l2_implementation(example, np.eye(example.dim))
    assert cls.label == "central"


def test_counit_vector(example):
    real = hopf.realize(example)
    xi = hopf.counit_vector(real)
    n = example.dim
    for i in range(n):
        resid = np.linalg.norm(real.pi(np.eye(n)[i]) @ xi - example.counit[i] * xi)
        assert resid < 1e-9
    assert np.vdot(real.omega, xi).real > 0


def test_kac_paljutkin_properties():
    kp = hopf.kac_paljutkin()
    assert kp.dim == 8
    assert not kp.is_commutative()
    assert not kp.is_cocommutative()
    assert hopf.block_structure(kp) == (1, 1, 1, 1, 2)
    hopf.validate_hopf(kp, tol=1e-9)


def test_opposite_hopf(example):
    op = hopf.opposite_hopf(example)
    hopf.validate_hopf(op, tol=1e-9)


def test_block_structure_examples():
    assert hopf.block_structure(hopf.fn_algebra(hopf.symmetric_3_table())) == (1,) * 6
    assert hopf.block_structure(hopf.group_algebra(hopf.symmetric_3_table())) == (1, 1, 2)

import numpy as np
import pytest

from qg import corep
from qg.corep import (FinSupp, PolElement, antipode, antipode_inv,
                      central_average, counit_functional, finsupp_central,
                      finsupp_matrix_unit, finsupp_unit_blocks, group_table,
                      haar_pair, l2_implement, module_action,
                      multiplier_involution, pol_star, rep_s3_table, rep_z2_table,
                      scaling_modular_action, schur_gram, schur_index,
                      subgroup_expectation, suq2_table, symmetrize_ap_net,
                      tau_fixed_part, theta_apply)
from qg.errors import (AxiomViolation, DegenerateUnitCoefficient,
                       InconsistentAntipode, MissingConjugationData,
                       MissingFusionData, NotASubcategory, ShapeMismatch,
                       TruncationTooSmall)
from qg.hopf import cyclic_table, symmetric_3_table

RNG = np.random.default_rng(11)


def random_finsupp(table, labels, rng=RNG):
    blocks = {}
    for a in labels:
        d = table.dims[a]
        blocks[a] = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return FinSupp(table, blocks)


def random_pol(table, labels, rng=RNG):
    return PolElement(table, random_finsupp(table, labels, rng).blocks)


@pytest.fixture(scope="module", params=["rep_z2", "rep_s3", "suq2", "group_s3"])
def table(request):
    return {
        "rep_z2": rep_z2_table,
        "rep_s3": rep_s3_table,
        "suq2": lambda: suq2_table(0.8, 4),
        "group_s3": lambda: group_table(symmetric_3_table(), name="dual C[S3]"),
    }[request.param]()


def test_table_invariants(table):
    assert table.dims[table.unit] == 1
    for a in table.labels:
        assert table.dims[table.conj[a]] == table.dims[a]
        dq = table.dim_q(a)
        assert abs(dq - (1.0 / table.rho[a]).sum()) < 1e-9
        assert dq >= table.dims[a] - 1e-9 or table.is_kac()


def test_table_rejects_bad_rho():
    with pytest.raises(AxiomViolation):
        corep.IrrTable([0, 1], {0: 1, 1: 1}, {0: [1.0], 1: [2.0]},
                       {0: 0, 1: 1})


def test_table_rejects_bad_intertwiner():
    # T = diag(1, 1) forces (T^-1)^T T = 1, incompatible with rho != 1
    q = 0.8
    with pytest.raises(InconsistentAntipode):
        corep.IrrTable([0, 1], {0: 1, 1: 2},
                       {0: [1.0], 1: [1.0 / q, q]}, {0: 0, 1: 1},
                       conj_intertwiners={0: np.eye(1), 1: np.eye(2)})


def test_table_rejects_overfull_fusion():
    fusion = {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (1, 1, 0): 1,
              (1, 1, 1): 1}  # Z2 fusion plus a spurious 1 (x) 1 -> 1
    with pytest.raises(AxiomViolation):
        corep.IrrTable([0, 1], {0: 1, 1: 1}, {0: [1.0], 1: [1.0]},
                       {0: 0, 1: 1}, fusion=fusion)


def test_table_rejects_frobenius_violation():
    # Z3 fusion with the (1,2) mass moved from label 0 to label 1: the total
    # mass is right but reciprocity against (2,1,...) breaks
    fusion = {}
    for i in range(3):
        for j in range(3):
            fusion[(i, j, (i + j) % 3)] = 1
    del fusion[(1, 2, 0)]
    fusion[(1, 2, 1)] = 1
    with pytest.raises(AxiomViolation):
        corep.IrrTable([0, 1, 2], {i: 1 for i in range(3)},
                       {i: [1.0] for i in range(3)}, {0: 0, 1: 2, 2: 1},
                       fusion=fusion)


def test_suq2_quantum_dims():
    q = 0.8
    t = suq2_table(q, 5)
    qdim = lambda n: (q ** -(n + 1) - q ** (n + 1)) / (q ** -1 - q)
    for n in t.labels:
        assert abs(t.dim_q(n) - qdim(n)) < 1e-12
    # recursion [2][n+1] = [n] + [n+2]
    for n in range(1, 5):
        assert abs(t.dim_q(1) * t.dim_q(n) - t.dim_q(n - 1) - t.dim_q(n + 1)) < 1e-10


def test_theta_block_projection(table):
    x = random_pol(table, table.labels)
    sub = table.labels[:2]
    p = finsupp_unit_blocks(table, sub)
    y = theta_apply(table, p, x)
    assert set(y.support) <= set(sub)
    for a in sub:
        assert np.allclose(y.block(a), x.block(a))


def test_theta_matrix_unit_shift():
    t = rep_s3_table()
    a = finsupp_matrix_unit(t, "std", 0, 1)
    x = PolElement(t, {"std": np.array([[1.0, 2.0], [3.0, 4.0]])})
    y = theta_apply(t, a, x)
    # U_{1j} -> U_{2j}, U_{2j} -> 0 (1-based): rows shift down
    assert np.allclose(y.block("std"), np.array([[0.0, 0.0], [1.0, 2.0]]))


def test_theta_antihomomorphism(table):
    a = random_finsupp(table, table.labels[:3])
    b = random_finsupp(table, table.labels[:3])
    x = random_pol(table, table.labels[:3])
    lhs = theta_apply(table, a.mul(b), x)
    rhs = theta_apply(table, b, theta_apply(table, a, x))
    assert lhs.distance(rhs) < 1e-12


def test_theta_unit_coefficient(table):
    a = random_finsupp(table, table.labels[:2])
    one = PolElement(table, {table.unit: np.ones((1, 1))})
    y = theta_apply(table, a, one)
    assert abs(haar_pair(y) - a.block(table.unit)[0, 0]) < 1e-12


def test_l2_implement_central_swaps_labels():
    t = group_table(symmetric_3_table())
    vals = {g: complex(g + 1, g) for g in t.labels}
    a = finsupp_central(t, vals)
    out = l2_implement(t, a)
    for g in t.labels:
        assert out.block(t.conj[g])[0, 0] == pytest.approx(vals[g])


def test_l2_implement_projection(table):
    sub = set(table.labels[:2])
    p = finsupp_unit_blocks(table, sub)
    out = l2_implement(table, p)
    assert set(out.support) == {table.conj[a] for a in sub}
    for a in out.support:
        assert np.allclose(out.block(a), np.eye(table.dims[a]))


def test_antipode_inverse_pair(table):
    a = random_finsupp(table, table.labels)
    assert antipode_inv(table, antipode(table, a)).distance(a) < 1e-10
    assert antipode(table, antipode_inv(table, a)).distance(a) < 1e-10


def test_antipode_squared_is_rho_twist():
    t = suq2_table(0.8, 3)
    a = random_finsupp(t, t.labels)
    twice = antipode(t, antipode(t, a))
    for n in t.labels:
        r = np.diag(t.rho[n])
        want = np.linalg.inv(r) @ a.block(n) @ r
        assert np.abs(twice.block(n) - want).max() < 1e-10
    undo = antipode_inv(t, antipode(t, a))
    assert undo.distance(a) < 1e-10


def test_involution_is_involutive(table):
    a = random_finsupp(table, table.labels)
    again = multiplier_involution(table, multiplier_involution(table, a))
    assert again.distance(a) < 1e-10


def test_involution_theta_contract(table):
    a = random_finsupp(table, table.labels)
    x = random_pol(table, table.labels)
    sharp = multiplier_involution(table, a)
    lhs = theta_apply(table, sharp, x)
    rhs = pol_star(table, theta_apply(table, a, pol_star(table, x)))
    assert lhs.distance(rhs) < 1e-10


def test_pol_star_involutive(table):
    x = random_pol(table, table.labels)
    assert pol_star(table, pol_star(table, x)).distance(x) < 1e-12


def test_pol_star_group_dual():
    # on C[Z_3] coefficients, (sum c_g u_g)* = sum conj(c_g) u_{g^-1}
    t = group_table(cyclic_table(3))
    x = PolElement(t, {1: np.array([[2.0 + 1j]])})
    xs = pol_star(t, x)
    assert xs.support == (2,)
    assert xs.block(2)[0, 0] == pytest.approx(2.0 - 1j)


def test_involution_central_conjugates():
    t = group_table(cyclic_table(3))
    a = finsupp_central(t, {1: 1j})
    sharp = multiplier_involution(t, a)
    assert sharp.support == (2,)
    assert sharp.block(2)[0, 0] == pytest.approx(-1j)


def test_scaling_trivial_on_kac():
    t = rep_s3_table()
    x = random_pol(t, t.labels)
    a = random_finsupp(t, t.labels)
    for which in ("tau", "sigma_phi", "sigma_psi"):
        assert scaling_modular_action(t, 0.7, x, which).distance(x) < 1e-12
        assert scaling_modular_action(t, 0.7, a, which).distance(a) < 1e-12


def test_scaling_phase_example():
    q = 0.8
    t = corep.IrrTable([0, 1], {0: 1, 1: 2}, {0: [1.0], 1: [q, 1.0 / q]},
                       {0: 0, 1: 1})
    x = PolElement(t, {1: np.array([[0.0, 1.0], [0.0, 0.0]])})
    y = scaling_modular_action(t, 1.0, x, "tau")
    assert y.block(1)[0, 1] == pytest.approx(q ** 2j)


def test_scaling_group_law():
    t = suq2_table(0.8, 3)
    x = random_pol(t, t.labels)
    for which in ("tau", "sigma_phi", "sigma_psi"):
        once = scaling_modular_action(t, 0.3, x, which)
        twice = scaling_modular_action(t, 0.4, once, which)
        assert twice.distance(scaling_modular_action(t, 0.7, x, which)) < 1e-12


def test_theta_tau_covariance():
    t = suq2_table(0.8, 4)
    a = random_finsupp(t, [0, 1, 2])
    x = random_pol(t, [0, 1, 2])
    s = 0.37
    lhs = theta_apply(t, scaling_modular_action(t, s, a, "tau"), x)
    rhs = scaling_modular_action(
        t, s, theta_apply(t, a, scaling_modular_action(t, -s, x, "tau")), "tau")
    assert lhs.distance(rhs) < 1e-10


def test_sigma_minus_i_is_rho_both_sides():
    t = suq2_table(0.8, 2)
    x = PolElement(t, {2: np.eye(3)})
    y = scaling_modular_action(t, -1j, x, "sigma_phi")
    want = t.rho[2][:, None] * np.eye(3) * t.rho[2][None, :]
    assert np.abs(y.block(2) - want).max() < 1e-12


def test_tau_fixed_part_kills_off_weights():
    t = suq2_table(0.8, 2)
    a = FinSupp(t, {2: np.ones((3, 3))})
    b = tau_fixed_part(t, a)
    assert np.allclose(b.block(2), np.eye(3))
    s = 1.23
    moved = scaling_modular_action(t, s, b, "tau")
    assert moved.distance(b) < 1e-12


def test_symmetrize_properties(table):
    a = random_finsupp(table, table.labels[:3])
    out = symmetrize_ap_net(table, a)
    assert abs(out.block(table.unit)[0, 0] - 1.0) < 1e-12
    assert scaling_modular_action(table, 0.9, out, "tau").distance(out) < 1e-10
    assert antipode(table, out.star()).distance(out) < 1e-10
    # idempotent on its own output up to the (already 1) rescaling
    assert symmetrize_ap_net(table, out).distance(out) < 1e-10


def test_symmetrize_rescales():
    t = rep_s3_table()
    a = finsupp_central(t, {"triv": 2.0, "std": 4.0})
    out = symmetrize_ap_net(t, a)
    assert out.block("triv")[0, 0] == pytest.approx(1.0)
    assert out.block("std")[0, 0] == pytest.approx(2.0)


def test_symmetrize_degenerate():
    t = rep_s3_table()
    a = finsupp_central(t, {"std": 1.0})
    with pytest.raises(DegenerateUnitCoefficient):
        symmetrize_ap_net(t, a)
    with pytest.raises(DegenerateUnitCoefficient):
        symmetrize_ap_net(t, finsupp_central(t, {"triv": 1j}))


def test_central_average(table):
    a = random_finsupp(table, table.labels)
    avg = central_average(table, a)
    assert avg.is_central()
    assert central_average(table, avg).distance(avg) < 1e-12
    for al in a.support:
        assert np.trace(avg.block(al)) == pytest.approx(np.trace(a.block(al)))
    sharp = multiplier_involution(table, avg)
    want = central_average(table, multiplier_involution(table, a))
    assert sharp.distance(want) < 1e-10


def test_central_average_example():
    t = rep_s3_table()
    a = finsupp_matrix_unit(t, "std", 0, 0)
    avg = central_average(t, a)
    assert np.allclose(avg.block("std"), 0.5 * np.eye(2))


def test_subgroup_expectation():
    t = rep_s3_table()
    x = random_pol(t, t.labels)
    e = subgroup_expectation(t, {"triv", "sgn"}, x)
    assert set(e.support) <= {"triv", "sgn"}
    again = subgroup_expectation(t, {"triv", "sgn"}, e)
    assert again.distance(e) < 1e-15
    only_unit = subgroup_expectation(t, {"triv"}, x)
    assert abs(haar_pair(only_unit) - haar_pair(x)) < 1e-15
    full = subgroup_expectation(t, set(t.labels), x)
    assert full.distance(x) < 1e-15


def test_subgroup_expectation_rejects_non_closed():
    t = rep_s3_table()
    x = random_pol(t, t.labels)
    with pytest.raises(NotASubcategory):
        subgroup_expectation(t, {"triv", "std"}, x)  # std (x) std hits sgn
    with pytest.raises(NotASubcategory):
        subgroup_expectation(t, {"sgn"}, x)
    g = group_table(symmetric_3_table())
    y = random_pol(g, g.labels)
    with pytest.raises(NotASubcategory):
        subgroup_expectation(g, {0, 1, 3}, y)  # not a subgroup of S3


def test_subgroup_expectation_z3_inside_s3():
    g = group_table(symmetric_3_table())
    x = random_pol(g, g.labels)
    e = subgroup_expectation(g, {0, 3, 4}, x)  # the 3-cycles form Z3
    assert set(e.support) <= {0, 3, 4}


def test_module_action_group_convolution():
    g = group_table(symmetric_3_table())
    tbl = symmetric_3_table()
    rng = np.random.default_rng(5)
    a = random_finsupp(g, g.labels, rng)
    w = random_finsupp(g, g.labels, rng)
    out = module_action(g, a, w)
    for s in g.labels:
        want = sum(w.block(h0)[0, 0] * a.block(tbl[h0][s])[0, 0]
                   for h0 in g.labels)
        assert abs(out.block(s)[0, 0] - want) < 1e-12


def test_module_action_counit(table):
    a = random_finsupp(table, table.labels[:3])
    out = module_action(table, a, counit_functional(table))
    assert out.distance(a) < 1e-12


def test_module_action_central_mass():
    t = rep_s3_table()
    a = finsupp_central(t, {"std": 1.0})
    w = finsupp_central(t, {"std": 1.0})
    out = module_action(t, a, w)
    vals = out.central_values()
    # (a * w)^triv = w_std c_std N^std_{std,triv} dim(std)/dim(triv) = 2
    assert vals["triv"] == pytest.approx(2.0)
    assert set(out.support) == {"triv", "sgn", "std"}
    # counit consistency: eps-hat(a * w) = w(a) = sum_al w_al c_al dim(al)
    eps = out.central_values().get("triv", 0.0)
    want = sum(w.central_values().get(al, 0.0) * c * t.dims[al]
               for al, c in a.central_values().items())
    assert eps == pytest.approx(want)


def test_module_action_needs_fusion():
    t = corep.IrrTable(["e", "x"], {"e": 1, "x": 1}, {"e": [1.0], "x": [1.0]},
                       {"e": "e", "x": "x"})
    a = finsupp_central(t, {"x": 1.0})
    with pytest.raises(MissingFusionData):
        module_action(t, a, finsupp_central(t, {"x": 1.0}))


def test_module_action_noncentral_rejected():
    t = rep_s3_table()
    a = FinSupp(t, {"std": np.array([[1.0, 2.0], [0.0, 1.0]])})
    with pytest.raises(MissingFusionData):
        module_action(t, a, finsupp_central(t, {"std": 1.0}))


def test_module_action_truncation():
    t = suq2_table(0.8, 2)
    a = finsupp_central(t, {2: 1.0})
    w = finsupp_central(t, {1: 1.0})
    with pytest.raises(TruncationTooSmall):
        module_action(t, a, w)  # 1 (x) 2 contains label 3, outside the window
    inside = module_action(t, finsupp_central(t, {1: 1.0}),
                           finsupp_central(t, {1: 1.0}))
    assert set(inside.support) <= {0, 2}


def test_haar_pair(table):
    x = random_pol(table, table.labels)
    assert haar_pair(x) == pytest.approx(complex(x.block(table.unit)[0, 0]))
    one = PolElement(table, {table.unit: np.ones((1, 1))})
    assert haar_pair(one) == pytest.approx(1.0)


def test_schur_gram_kac(table):
    if not table.is_kac():
        return
    g = schur_gram(table, table.labels)
    rows = schur_index(table, table.labels)
    for r, (a, i, j) in enumerate(rows):
        assert g[r, r] == pytest.approx(1.0 / table.dims[a])
    assert np.allclose(g, np.diag(np.diag(g)))


def test_schur_gram_suq2():
    q = 0.8
    t = suq2_table(q, 3)
    g = schur_gram(t, [1])
    rows = schur_index(t, [1])
    for r, (a, i, j) in enumerate(rows):
        # diagonal (1/rho[i]) / dim_q with rho_1 = (1/q, q)
        assert g[r, r] == pytest.approx((q ** (1 - 2 * i)) / t.dim_q(1))
    assert np.all(np.linalg.eigvalsh(g) > 0)


def test_schur_index_order():
    t = rep_s3_table()
    rows = schur_index(t, ["std", "triv"])
    assert rows[0] == ("triv", 0, 0)
    assert rows[1:] == [("std", 0, 0), ("std", 0, 1), ("std", 1, 0),
                        ("std", 1, 1)]


def test_shape_errors():
    t = rep_s3_table()
    with pytest.raises(ShapeMismatch):
        FinSupp(t, {"std": np.eye(3)})
    with pytest.raises(ShapeMismatch):
        FinSupp(t, {"missing": np.eye(1)})
    other = rep_z2_table()
    with pytest.raises(ShapeMismatch):
        theta_apply(t, random_finsupp(t, ["triv"]),
                    random_pol(other, other.labels))


def test_noncentral_antipode_needs_data():
    t = corep.IrrTable(["e", "v"], {"e": 1, "v": 2},
                       {"e": [1.0], "v": [1.0, 1.0]}, {"e": "e", "v": "v"})
    a = FinSupp(t, {"v": np.array([[0.0, 1.0], [0.0, 0.0]])})
    with pytest.raises(MissingConjugationData):
        antipode(t, a)
    central = finsupp_central(t, {"v": 3.0})
    assert antipode(t, central).distance(central) < 1e-15

import numpy as np
import pytest

from qg.bridge import bridge_group_s3
from qg.category import (CatMultiplier, FusionRing, central_correspondence,
                         corner_multiply, corner_trace, mult_pair,
                         perron_dimensions, quantum_trace, tl_ring,
                         verify_fusion_ring, weighted_l1)
from qg.corep import (FinSupp, IrrTable, PolElement, finsupp_central,
                      finsupp_matrix_unit, finsupp_unit_blocks, group_table,
                      rep_s3_table, rep_z2_table, suq2_table, theta_apply)
from qg.errors import (AxiomViolation, KmsViolation, MissingFusionData,
                       ShapeMismatch)
from qg.hopf import cyclic_table, symmetric_3_table

RNG = np.random.default_rng(31)


def rand_corner(ring, nonzero=None):
    labels = nonzero if nonzero is not None else ring.labels
    return {a: complex(*RNG.normal(size=2)) for a in labels}


def rand_theta(ring):
    return CatMultiplier(rand_corner(ring))


# --- ring construction and verification --------------------------------


def test_construction_is_validation_free():
    # nonsense multiplicities must be storable; only verify complains
    ring = FusionRing(["e", "g"], {"e": "e", "g": "g"},
                      {("g", "g", "g"): 1}, {"e": 1.0, "g": 1.0})
    rep = verify_fusion_ring(ring)
    assert not rep.ok
    with pytest.raises(ShapeMismatch):
        FusionRing([], {}, {}, {})
    with pytest.raises(ShapeMismatch):
        FusionRing(["e", "e"], {"e": "e"}, {}, {"e": 1.0})
    with pytest.raises(ShapeMismatch):
        FusionRing(["e", "g"], {"e": "e"}, {}, {"e": 1.0, "g": 1.0})
    with pytest.raises(ShapeMismatch):
        FusionRing(["e"], {"e": "e"}, {("e", "e", "q"): 1}, {"e": 1.0})


def test_from_table_requires_fusion():
    t = IrrTable(["e"], {"e": 1}, {"e": [1.0]}, {"e": "e"})
    with pytest.raises(MissingFusionData):
        FusionRing.from_table(t)


def test_rep_z2_ring_passes():
    ring = FusionRing.from_table(rep_z2_table())
    rep = verify_fusion_ring(ring)
    assert rep.ok
    assert "associativity" in rep.checked
    assert ring.product(1, 1) == {0: 1}
    assert ring.dq[1] == 1.0


def test_rep_s3_and_group_rings_pass():
    for table in (rep_s3_table(), group_table(cyclic_table(4)),
                  group_table(symmetric_3_table())):
        ring = FusionRing.from_table(table)
        assert verify_fusion_ring(ring).ok, table.name
    ring = FusionRing.from_table(rep_s3_table())
    # 2 x 2 = 1 + 1 + 2 is the only non-grouplike product here
    assert ring.product("std", "std") == {"triv": 1, "sgn": 1, "std": 1}
    assert ring.dq["std"] == 2.0


@pytest.mark.parametrize("q", [1.0, 0.8])
def test_tl_rings_pass(q):
    for level in range(1, 5):
        ring = tl_ring(q, level)
        rep = verify_fusion_ring(ring)
        assert rep.ok, rep.violations
        assert ring.truncated
        # window edge: top label squares to the unit alone
        assert ring.product(level, level) == {0: 1}
        # interior recursion [2][n+1] = [n] + [n+2]
        for n in range(1, level):
            got = sum(m * ring.dq[k] for k, m in ring.product(1, n).items())
            assert abs(got - ring.dq[1] * ring.dq[n]) <= 1e-12
        # at the edge the window genuinely loses mass for level >= 1
        lost = ring.dq[level] ** 2 - sum(
            m * ring.dq[k] for k, m in ring.product(level, level).items())
        assert lost > 1e-6


def test_tl_multiplicities_match_window_rule():
    level = 4
    ring = tl_ring(1.0, level)
    for i in range(level + 1):
        for j in range(level + 1):
            for k in range(level + 1):
                want = int((i + j + k) % 2 == 0
                           and abs(i - j) <= k <= min(i + j,
                                                      2 * level - i - j))
                assert ring.mult(i, j, k) == want


def test_truncation_flag_is_what_lets_tl_pass():
    ring = tl_ring(0.8, 3)
    strict = FusionRing(ring.labels, ring.conj, ring.n, ring.dq,
                        truncated=False)
    rep = verify_fusion_ring(strict)
    assert not rep.ok
    assert rep.by_axiom("dq-homomorphism")
    assert not rep.by_axiom("associativity")


def test_broken_n_reports_frobenius():
    ring = FusionRing.from_table(rep_s3_table())
    del ring.n[("std", "std", "sgn")]
    rep = verify_fusion_ring(ring)
    assert not rep.ok
    assert rep.by_axiom("frobenius")
    assert "frobenius" in repr(rep) or "violations" in repr(rep)


def test_overshoot_is_flagged_even_when_truncated():
    # 1 x 1 = 0 + 2 is exactly full, so doubling a term must overshoot
    ring = tl_ring(0.8, 2)
    ring.n[(1, 1, 2)] = 2
    rep = verify_fusion_ring(ring)
    assert rep.by_axiom("dq-homomorphism")


def test_missing_multiplicities_reported_not_raised():
    ring = FusionRing(["e"], {"e": "e"}, None, {"e": 1.0})
    rep = verify_fusion_ring(ring)
    assert rep.by_axiom("multiplicities")
    with pytest.raises(MissingFusionData):
        ring.product("e", "e")


def test_perron_recomputes_dq_on_closed_rings():
    for table in (rep_z2_table(), rep_s3_table(),
                  group_table(cyclic_table(5)),
                  group_table(symmetric_3_table())):
        ring = FusionRing.from_table(table)
        got = perron_dimensions(ring)
        assert max(abs(got[a] - ring.dq[a]) for a in ring.labels) <= 1e-9
    # a truncated window recomputes to root-of-unity dimensions instead
    ring = tl_ring(0.8, 2)
    got = perron_dimensions(ring)
    assert all(v > 0 for v in got.values())
    assert abs(got[1] - 2.0 * np.cos(np.pi / 4.0)) <= 1e-9
    assert abs(got[1] - ring.dq[1]) > 1e-3


# --- quantum trace ------------------------------------------------------


def test_quantum_trace_of_identity_is_dimension():
    for table in (rep_s3_table(), suq2_table(0.8, 2)):
        one = finsupp_unit_blocks(table, table.labels)
        tr = quantum_trace(table, one)
        for a in table.labels:
            assert abs(tr[a] - table.dim_q(a)) <= 1e-12
    table = suq2_table(0.8, 2)
    tr = quantum_trace(table, finsupp_unit_blocks(table, [1]))
    assert abs(tr[1] - (0.8 + 1.25)) <= 1e-12


def test_quantum_trace_is_plain_trace_on_kac_tables():
    table = rep_s3_table()
    f = FinSupp(table, {"std": RNG.normal(size=(2, 2))
                        + 1j * RNG.normal(size=(2, 2))})
    tr = quantum_trace(table, f)
    assert abs(tr["std"] - np.trace(f.blocks["std"])) <= 1e-12


def test_quantum_trace_weighted_entry():
    q = 0.7
    table = IrrTable(["e", "x"], {"e": 1, "x": 2},
                     {"e": [1.0], "x": [q, 1.0 / q]},
                     {"e": "e", "x": "x"})
    f = finsupp_matrix_unit(table, "x", 0, 0)
    assert abs(quantum_trace(table, f)["x"] - q) <= 1e-15


def test_quantum_trace_twisted_traciality():
    table = suq2_table(0.8, 2)
    rho = {a: np.diag(table.rho[a]) for a in table.labels}
    f = FinSupp(table, {a: RNG.normal(size=(table.dims[a],) * 2)
                        + 1j * RNG.normal(size=(table.dims[a],) * 2)
                        for a in (1, 2)})
    g = FinSupp(table, {a: RNG.normal(size=(table.dims[a],) * 2)
                        for a in (1, 2)})
    tw = FinSupp(table, {a: np.linalg.inv(rho[a]) @ g.blocks[a] @ rho[a]
                         for a in (1, 2)})
    lhs = quantum_trace(table, f.mul(g))
    rhs = quantum_trace(table, tw.mul(f))
    for a in (1, 2):
        assert abs(lhs[a] - rhs[a]) <= 1e-12
    # plain traciality fails off the Kac case: swap a pair of matrix units
    e12 = finsupp_matrix_unit(table, 1, 0, 1)
    e21 = finsupp_matrix_unit(table, 1, 1, 0)
    a12 = quantum_trace(table, e12.mul(e21))[1]
    a21 = quantum_trace(table, e21.mul(e12))[1]
    assert abs(a12 - 1.25) <= 1e-12 and abs(a21 - 0.8) <= 1e-12
    # but it holds as soon as one factor commutes with rho
    c = finsupp_central(table, {1: 2.0 - 1.0j, 2: 0.5})
    lhs = quantum_trace(table, f.mul(c))
    rhs = quantum_trace(table, c.mul(f))
    for a in (1, 2):
        assert abs(lhs[a] - rhs[a]) <= 1e-12


def test_quantum_trace_guards():
    table = suq2_table(0.8, 1)
    with pytest.raises(ShapeMismatch):
        quantum_trace(table, PolElement(table, {}))
    with pytest.raises(ShapeMismatch):
        quantum_trace(table, finsupp_unit_blocks(suq2_table(0.8, 1), [0]))
    broken = suq2_table(0.8, 1)
    broken.rho[1][0] *= 3.0  # unbalances Tr(rho) against Tr(rho^-1)
    with pytest.raises(KmsViolation):
        quantum_trace(broken, finsupp_unit_blocks(broken, [1]))


# --- pairing ------------------------------------------------------------


def test_mult_pair_basics():
    ring = FusionRing.from_table(rep_s3_table())
    omega = {"triv": 0.5, "std": 1.0 - 2.0j}
    one = CatMultiplier({a: 1.0 for a in ring.labels})
    want = sum(ring.dq[k] * z for k, z in omega.items())
    assert abs(mult_pair(ring, one, omega) - want) <= 1e-12
    theta = rand_theta(ring)
    assert abs(mult_pair(ring, theta, {"triv": 1.0})
               - theta("triv")) <= 1e-12
    assert weighted_l1(ring, omega) == pytest.approx(0.5 + 2 * abs(1 - 2j))
    with pytest.raises(ShapeMismatch):
        mult_pair(ring, one, {"nope": 1.0})


def test_mult_pair_bilinear_and_bounded():
    ring = tl_ring(0.8, 4)
    for _ in range(100):
        th1, th2 = rand_theta(ring), rand_theta(ring)
        om1 = rand_corner(ring)
        om2 = rand_corner(ring)
        z1, z2 = complex(*RNG.normal(size=2)), complex(*RNG.normal(size=2))
        mix = {a: z1 * om1[a] + z2 * om2[a] for a in ring.labels}
        lhs = mult_pair(ring, th1, mix)
        rhs = z1 * mult_pair(ring, th1, om1) + z2 * mult_pair(ring, th1, om2)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))
        thmix = CatMultiplier({a: z1 * th1(a) + z2 * th2(a)
                               for a in ring.labels})
        lhs = mult_pair(ring, thmix, om1)
        rhs = z1 * mult_pair(ring, th1, om1) + z2 * mult_pair(ring, th2, om1)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))
        assert abs(mult_pair(ring, th1, om1)) <= (
            weighted_l1(ring, om1) * th1.sup_norm() + 1e-9)


def test_pairing_matches_corner_trace_form():
    # <theta, f (x) g> = Tr(g M_theta(f)) with M_theta(f) = theta(k) f(k),
    # against the rank-one functional omega(k) = f(k) g(conj k) / dq(k)
    for ring in (FusionRing.from_table(rep_s3_table()), tl_ring(0.8, 3)):
        for _ in range(20):
            f, g = rand_corner(ring), rand_corner(ring)
            theta = rand_theta(ring)
            scaled = {k: theta(k) * z for k, z in f.items()}
            via_corner = corner_trace(ring, corner_multiply(ring, g, scaled))
            omega = {k: f[k] * g[ring.conj[k]] / ring.dq[k]
                     for k in ring.labels}
            via_pair = mult_pair(ring, theta, omega)
            assert abs(via_corner - via_pair) <= 1e-10 * max(
                1.0, abs(via_corner))


# --- tube corner --------------------------------------------------------


def test_corner_unit_and_group_case():
    ring = FusionRing.from_table(rep_z2_table())
    f = rand_corner(ring)
    delta_e = {0: 1.0}
    assert corner_multiply(ring, delta_e, f) == pytest.approx(f)
    prod = corner_multiply(ring, {1: 1.0}, {1: 1.0})
    assert prod == {0: pytest.approx(1.0)}


def test_corner_tl_expansion():
    ring = tl_ring(0.8, 3)
    sq = corner_multiply(ring, {1: 1.0}, {1: 1.0})
    assert set(sq) == {0, 2}
    assert sq[0] == pytest.approx(1.0) and sq[2] == pytest.approx(1.0)
    assert corner_trace(ring, sq) == pytest.approx(1.0)


def test_corner_associative_and_tracial():
    for ring in (FusionRing.from_table(rep_s3_table()),
                 FusionRing.from_table(group_table(symmetric_3_table())),
                 tl_ring(1.0, 3)):
        for _ in range(10):
            f, g, h = (rand_corner(ring) for _ in range(3))
            lhs = corner_multiply(ring, corner_multiply(ring, f, g), h)
            rhs = corner_multiply(ring, f, corner_multiply(ring, g, h))
            for k in set(lhs) | set(rhs):
                assert abs(lhs.get(k, 0) - rhs.get(k, 0)) <= 1e-10
            tfg = corner_trace(ring, corner_multiply(ring, f, g))
            tgf = corner_trace(ring, corner_multiply(ring, g, f))
            assert abs(tfg - tgf) <= 1e-10 * max(1.0, abs(tfg))


def test_corner_guards():
    bare = FusionRing(["e"], {"e": "e"}, None, {"e": 1.0})
    with pytest.raises(MissingFusionData):
        corner_multiply(bare, {"e": 1.0}, {"e": 1.0})
    ring = tl_ring(1.0, 2)
    with pytest.raises(ShapeMismatch):
        corner_trace(ring, {7: 1.0})


# --- multiplier metadata ------------------------------------------------


def test_catmultiplier_metadata():
    theta = CatMultiplier({0: 1.0, 1: -2.0}, cb_upper=2.0)
    assert theta.sup_norm() == 2.0
    assert theta(5) == 0
    with pytest.raises(AxiomViolation):
        CatMultiplier({0: 3.0}, cb_upper=2.0)
    prod = theta.pointwise(CatMultiplier({1: 1.0j, 2: 9.0}, cb_upper=9.0,
                                         truncated=True))
    assert prod.values == {1: -2.0j}
    assert prod.cb_upper == 18.0 and prod.truncated
    assert CatMultiplier({}).sup_norm() == 0.0
    assert theta.pointwise(CatMultiplier({1: 1.0})).cb_upper is None


# --- central correspondence ---------------------------------------------


def test_central_correspondence_unit_support():
    table = rep_s3_table()
    theta = CatMultiplier({"triv": 1.0, "std": 1.0})
    out = central_correspondence(table, theta)
    assert out.distance(finsupp_unit_blocks(table, ["triv", "std"])) == 0.0
    assert out.is_central()


def test_central_correspondence_scales_blocks():
    table = rep_s3_table()
    theta = CatMultiplier({"std": 2.0 - 1.0j})
    a = central_correspondence(table, theta)
    x = PolElement(table, {al: RNG.normal(size=(table.dims[al],) * 2)
                           for al in table.labels})
    y = theta_apply(table, a, x)
    assert set(y.blocks) == {"std"}
    assert np.abs(y.blocks["std"]
                  - (2.0 - 1.0j) * x.blocks["std"]).max() <= 1e-12


def test_central_correspondence_is_algebra_map():
    table = suq2_table(0.8, 3)
    t1 = CatMultiplier({a: complex(*RNG.normal(size=2))
                        for a in table.labels})
    t2 = CatMultiplier({a: complex(*RNG.normal(size=2)) for a in (0, 1, 2)})
    lhs = central_correspondence(table, t1.pointwise(t2))
    rhs = central_correspondence(table, t1).mul(
        central_correspondence(table, t2))
    assert lhs.distance(rhs) <= 1e-12


def test_central_correspondence_window_rules():
    table = suq2_table(0.8, 1)
    wide = CatMultiplier({0: 1.0, 1: 1.0, 2: 1.0}, truncated=True)
    out = central_correspondence(table, wide)
    assert set(out.blocks) == {0, 1}
    with pytest.raises(ShapeMismatch):
        central_correspondence(rep_s3_table(), CatMultiplier({"huh": 1.0}))


def test_central_correspondence_engine_block_scalar():
    br = bridge_group_s3()
    table = br.table
    theta = CatMultiplier({a: complex(*RNG.normal(size=2))
                           for a in table.labels})
    a = central_correspondence(table, theta)
    t = br.theta_matrix(a)
    worst = 0.0
    for al in table.labels:
        for i in range(table.dims[al]):
            for j in range(table.dims[al]):
                v = br.coeffs[al][i, j]
                worst = max(worst,
                            np.abs(t @ v - theta(al) * v).max())
    assert worst <= 1e-10
    assert br.theta_pol_check(a, PolElement(
        table, {al: RNG.normal(size=(table.dims[al],) * 2)
                for al in table.labels})) <= 1e-10

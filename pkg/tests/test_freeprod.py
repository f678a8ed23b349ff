import itertools

import numpy as np
import pytest

from qg.corep import FinSupp, finsupp_unit_blocks, group_table, rep_s3_table, suq2_table
from qg.cbnorm import multiplier_cb_report
from qg.errors import AxiomViolation, MissingFusionData, ShapeMismatch
from qg.freeprod import (AlternatingWord, BoundedMultiplier, FreeProductTable,
                         enumerate_words, free_fusion, length_projection,
                         psi_d, tn_series)
from qg.hopf import cyclic_table, symmetric_3_table

RNG = np.random.default_rng(29)


def dual_z(n):
    return group_table(cyclic_table(n), name=f"dual Z{n}")


def test_word_validation():
    with pytest.raises(ShapeMismatch):
        AlternatingWord(((0, 1), (0, 2)))
    fp = FreeProductTable([dual_z(2), dual_z(3)])
    with pytest.raises(ShapeMismatch):
        fp.check_word(AlternatingWord(((2, 1),)))
    with pytest.raises(ShapeMismatch):
        fp.check_word(AlternatingWord(((0, 7),)))
    with pytest.raises(ShapeMismatch):
        fp.check_word(AlternatingWord(((0, 0),)))  # trivial letter
    with pytest.raises(ShapeMismatch):
        FreeProductTable([])
    with pytest.raises(ShapeMismatch):
        enumerate_words(fp, -1)


def test_enumeration_counts():
    fp = FreeProductTable([dual_z(3), dual_z(3)])
    assert enumerate_words(fp, 0) == [AlternatingWord()]
    # 2 starting factors, alternation forced, 2 nontrivial labels per slot
    ws = enumerate_words(fp, 3)
    assert sum(1 for w in ws if len(w) == 3) == 16
    assert sum(1 for w in ws if len(w) == 2) == 8

    # a trivial factor contributes no letters at all
    triv = group_table(cyclic_table(1), name="trivial")
    fp2 = FreeProductTable([dual_z(2), triv])
    ws2 = enumerate_words(fp2, 4)
    assert ws2 == [AlternatingWord(), AlternatingWord(((0, 1),))]


def test_enumeration_matches_bruteforce():
    z2, z3 = dual_z(2), dual_z(3)
    fp = FreeProductTable([z2, z3])
    letters = [(0, 1), (1, 1), (1, 2)]
    ws = enumerate_words(fp, 4)
    for ln in range(5):
        brute = set()
        for tup in itertools.product(letters, repeat=ln):
            if all(a[0] != b[0] for a, b in zip(tup, tup[1:])):
                brute.add(tup)
        got = {w.letters for w in ws if len(w) == ln}
        assert got == brute
    # deterministic order: by length, then (factor, label rank) tuples
    assert [w.letters for w in ws] == sorted(
        (w.letters for w in ws), key=lambda t: (len(t), t))


def test_fusion_unit_and_dihedral():
    fp = FreeProductTable([dual_z(2), dual_z(2)])
    e = AlternatingWord()
    g0 = AlternatingWord(((0, 1),))
    w = AlternatingWord(((0, 1), (1, 1)))
    assert free_fusion(fp, e, w) == {w: 1}
    assert free_fusion(fp, w, e) == {w: 1}
    # same-factor junction with trivial fusion recurses all the way down
    assert free_fusion(fp, g0, g0) == {e: 1}
    assert free_fusion(fp, w, fp.word_conj(w)) == {e: 1}
    # distinct-factor junction concatenates
    g1 = AlternatingWord(((1, 1),))
    assert free_fusion(fp, g0, g1) == {w: 1}

    nofus = group_table(cyclic_table(2))
    nofus.fusion = None
    with pytest.raises(MissingFusionData):
        free_fusion(FreeProductTable([nofus, nofus]), g0, g0)


def test_fusion_dimension_identity_random():
    fp = FreeProductTable([rep_s3_table(), dual_z(2)])
    ws = enumerate_words(fp, 3)
    for _ in range(200):
        a, b = RNG.choice(len(ws), 2)
        dec = free_fusion(fp, ws[a], ws[b])
        mass = sum(n * fp.word_dim(w) for w, n in dec.items())
        assert mass == fp.word_dim(ws[a]) * fp.word_dim(ws[b])


def combine(fp, dec1, right):
    out = {}
    for mid, n in dec1.items():
        for w, m in free_fusion(fp, mid, right).items():
            out[w] = out.get(w, 0) + n * m
    return out


def test_fusion_associative_on_short_words():
    fp = FreeProductTable([dual_z(2), rep_s3_table()])
    ws = enumerate_words(fp, 1)
    for w1 in ws:
        for w2 in ws:
            for w3 in ws:
                left = combine(fp, free_fusion(fp, w1, w2), w3)
                right = {}
                for mid, n in free_fusion(fp, w2, w3).items():
                    for w, m in free_fusion(fp, w1, mid).items():
                        right[w] = right.get(w, 0) + n * m
                assert left == right


def test_word_table_invariants():
    fp = FreeProductTable([rep_s3_table(), dual_z(2)])
    t = fp.table(2)
    assert t.truncated
    assert t.unit == AlternatingWord()
    w = AlternatingWord(((0, "std"), (1, 1)))
    assert t.dims[w] == 2
    assert np.allclose(t.rho[w], np.ones(2))
    assert t.conj[w] == AlternatingWord(((1, 1), (0, "std")))
    assert fp.table(2) is t  # memoized

    # length projections resolve the identity on the window
    total = length_projection(fp, 0, 2)
    for d in (1, 2):
        total = total.add(length_projection(fp, d, 2))
    assert total.distance(finsupp_unit_blocks(t, t.labels)) == 0.0


def test_length_projection():
    fp = FreeProductTable([dual_z(2), dual_z(2)])
    p0 = length_projection(fp, 0, 3)
    assert list(p0.blocks) == [AlternatingWord()]
    assert p0.cb_upper == 1.0
    p2 = length_projection(fp, 2, 3)
    assert p2.cb_upper == 8.0
    assert p2.is_central()
    assert not p2.mul(length_projection(fp, 1, 3)).blocks
    assert p2.mul(p2).distance(p2) == 0.0
    # derived elements drop the metadata claim
    assert p2.add(p0).cb_upper is None
    assert isinstance(p2.add(p0), BoundedMultiplier)
    with pytest.raises(ShapeMismatch):
        length_projection(fp, 4, 3)


def test_tn_series():
    fp = FreeProductTable([dual_z(2), dual_z(2)])
    assert tn_series(fp, 1, 4).distance(length_projection(fp, 0, 4)) == 0.0
    t4 = tn_series(fp, 4, 4)
    vals = t4.central_values()
    for w, v in vals.items():
        assert abs(v - 0.5 ** len(w)) < 1e-15
    assert any(len(w) == 2 and abs(v - 0.25) < 1e-15 for w, v in vals.items())
    assert abs(t4.norm_inf() - 1.0) < 1e-15
    assert t4.is_central()
    with pytest.raises(ShapeMismatch):
        tn_series(fp, 5, 4)
    with pytest.raises(ShapeMismatch):
        tn_series(fp, 0, 4)


def test_psi_identity_families_give_length_projection():
    z2, z3 = dual_z(2), dual_z(3)
    fp = FreeProductTable([z2, z3])
    fams = [(finsupp_unit_blocks(z2, z2.labels),
             finsupp_unit_blocks(z3, z3.labels))] * 2
    got = psi_d(fp, fams, 3)
    assert got.distance(length_projection(fp, 2, 3)) == 0.0
    # 4d(2d+1) with unit letter norms certified by the solver
    assert abs(got.cb_upper - 40.0) < 1e-6
    exact = psi_d(fp, fams, 3, bounds=[(1.0, 1.0)] * 2)
    assert exact.cb_upper == 40.0


def test_psi_blocks_are_kronecker():
    rs3, z2 = rep_s3_table(), dual_z(2)
    fp = FreeProductTable([rs3, z2])
    b_std = RNG.standard_normal((2, 2)) + 1j * RNG.standard_normal((2, 2))
    g1 = FinSupp(rs3, {"std": b_std, "sgn": np.array([[0.5]])})
    g2 = FinSupp(z2, {1: np.array([[2.0 - 1j]])})
    el = psi_d(fp, [(g1, g2), (g1, g2)], 2, bounds=[(3.0, 2.5)] * 2)
    w = AlternatingWord(((0, "std"), (1, 1)))
    assert np.abs(el.block(w) - np.kron(b_std, g2.blocks[1])).max() == 0.0
    assert all(len(w) == 2 for w in el.blocks)
    assert el.cb_upper == 4 * 2 * 5 * 9.0
    # words through unsupported letters get zero blocks
    assert AlternatingWord(((0, "triv"), (1, 1))) not in el.blocks

    single = psi_d(fp, [(g1, g2)], 2, bounds=[(3.0, 2.5)])
    assert np.abs(single.block(AlternatingWord(((0, "std"),))) - b_std).max() == 0.0
    assert single.cb_upper == 4 * 1 * 3 * 3.0


def test_psi_central_when_families_central():
    z2, z3 = dual_z(2), dual_z(3)
    fp = FreeProductTable([z2, z3])
    fams = []
    for _ in range(2):
        c2 = FinSupp(z2, {1: np.array([[RNG.standard_normal()]])})
        c3 = FinSupp(z3, {1: np.eye(1) * RNG.standard_normal(),
                          2: np.eye(1) * RNG.standard_normal()})
        fams.append((c2, c3))
    el = psi_d(fp, fams, 2, bounds=[(1.0, 1.0)] * 2)
    assert el.is_central()


def test_psi_validation():
    z2, z3 = dual_z(2), dual_z(3)
    fp = FreeProductTable([z2, z3])
    ones = (finsupp_unit_blocks(z2, z2.labels),
            finsupp_unit_blocks(z3, z3.labels))
    with pytest.raises(ShapeMismatch):
        psi_d(fp, [], 2)
    with pytest.raises(ShapeMismatch):
        psi_d(fp, [ones] * 3, 2)
    with pytest.raises(ShapeMismatch):
        psi_d(fp, [(ones[0],)], 2)
    with pytest.raises(ShapeMismatch):
        psi_d(fp, [(ones[1], ones[0])], 2)

    # no computable upper bound without caller values on a non-group table
    rs3 = rep_s3_table()
    fp2 = FreeProductTable([rs3, z2])
    g = FinSupp(rs3, {"std": np.eye(2) * 0.3})
    with pytest.raises(ShapeMismatch):
        psi_d(fp2, [(g, ones[0])], 2)


def test_metadata_dominates_computable_lower_bounds():
    fp = FreeProductTable([dual_z(2), dual_z(2)])
    t = fp.table(3)
    for d in range(4):
        pd = length_projection(fp, d, 3)
        rep = multiplier_cb_report(t, pd)
        assert rep.exact is None  # truncated window: bounds only
        assert rep.best_lower() <= pd.cb_upper + 1e-9

    z2, z3 = dual_z(2), dual_z(3)
    fp2 = FreeProductTable([z2, z3])
    fams = []
    for _ in range(2):
        fams.append((FinSupp(z2, {1: np.array([[1.5]])}),
                     FinSupp(z3, {1: np.array([[0.5 + 1j]])})))
    el = psi_d(fp2, fams, 2)
    rep = multiplier_cb_report(fp2.table(2), el)
    assert rep.best_lower() <= el.cb_upper + 1e-9


def test_truncated_factor_relaxes_mass_check():
    sq = suq2_table(0.8, 2)
    z2 = dual_z(2)
    fp = FreeProductTable([sq, z2])
    # 1 (x) 2 loses the spin-3 part outside the factor window
    dec = free_fusion(fp, AlternatingWord(((0, 1),)), AlternatingWord(((0, 2),)))
    mass = sum(n * fp.word_dim(w) for w, n in dec.items())
    assert mass < fp.word_dim(AlternatingWord(((0, 1),))) * fp.word_dim(
        AlternatingWord(((0, 2),)))
    t = fp.table(2)
    assert t.truncated
    w = AlternatingWord(((0, 1), (1, 1)))
    assert np.allclose(t.rho[w], sq.rho[1])
    assert abs(t.dim_q(w) - sq.dim_q(1)) < 1e-12

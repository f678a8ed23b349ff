import numpy as np
import time
from qg import hopf as H
from qg import doubles as D
from qg import _linalg as la

# drinfeld matching with BOTH g2 orientations, no double build yet


def make(h, flip_g2):
    real = H.realize(h)
    n = real.dim
    g1 = D.co_opposite(real.hopf)
    dual = real.dual
    g2 = D.co_opposite(dual.hopf) if flip_g2 else dual.hopf
    real2 = H.realize(g2)
    xi = H.counit_vector(real)
    u = np.stack([dual.ops[i] @ xi for i in range(n)], axis=1) @ real2.lam_inv
    print("  u unitary:", la.norm_inf(la.dagger(u) @ u - np.eye(n)))
    z = np.kron(np.eye(n), la.dagger(u)) @ real.w @ np.kron(np.eye(n), u)
    return g1, g2, real, real2, z


def test(hname, h, flip_g2):
    t0 = time.time()
    print(f"== {hname} flip_g2={flip_g2}")
    g1, g2, real1h, r2, z = make(h, flip_g2)
    r1 = H.realize(g1)
    n1, n2 = g1.dim, g2.dim
    n = n1 * n2
    try:
        m = D.Matching(g1, g2, z)
    except Exception as e:
        print("  Matching FAILED:", type(e).__name__, str(e)[:80])
        return
    bres = D.bicharacter_residuals(m)
    print("  bichar:", {k: f"{v:.1e}" for k, v in bres.items()})
    m4 = m.m_map.reshape(n1, n2, n1, n2)
    mult = np.einsum("ijk,abc->iajbkc", g1.mult, g2.mult).reshape(n, n, n)
    comult = np.einsum("ijk,abc,pqjb->iakqpc", g1.comult, g2.comult, m4,
                       optimize=True).reshape(n, n, n)
    antipode = m.m_inv_map @ np.kron(np.linalg.inv(g1.antipode), g2.antipode)
    dbl = H.HopfData(mult, comult, np.kron(g1.unit, g2.unit),
                     np.kron(g1.counit, g2.counit), antipode,
                     np.kron(g1.star, g2.star))
    try:
        H.validate_hopf(dbl)
    except Exception as e:
        print("  validate FAILED:", type(e).__name__, str(e)[:100])
        return
    real_m = H.realize(dbl)
    we = real_m.w
    print(f"  double valid ({time.time()-t0:.1f}s)")

    v1 = D.right_regular(r1)
    sig1 = la.swap_matrix(n1, n1)
    w1co = sig1 @ la.dagger(v1) @ sig1
    dims = [n1, n2, n1, n2]
    zd = la.dagger(z)
    lead = la.embed(w1co, dims, [0, 2])
    w2e = la.embed(r2.w, dims, [1, 3])
    z4 = z.reshape(n1, n2, n1, n2)
    # Z32: first z-leg on tensor leg 2 (H1'), second z-leg on tensor leg 1 (H2)
    z32 = z4.transpose(1, 0, 3, 2).reshape(n, n)  # operator on H2 (x) H1
    couplings = {
        "none": None,
        "Z34* . Z34": (la.embed(zd, dims, [2, 3]), la.embed(z, dims, [2, 3])),
        "Z34 . Z34*": (la.embed(z, dims, [2, 3]), la.embed(zd, dims, [2, 3])),
        "Z12* . Z12": (la.embed(zd, dims, [0, 1]), la.embed(z, dims, [0, 1])),
        "Z12 . Z12*": (la.embed(z, dims, [0, 1]), la.embed(zd, dims, [0, 1])),
        "Z32 . Z32*": (la.embed(z32, dims, [1, 2]), la.embed(la.dagger(z32), dims, [1, 2])),
        "Z32* . Z32": (la.embed(la.dagger(z32), dims, [1, 2]), la.embed(z32, dims, [1, 2])),
        "Z14 . Z14*": (la.embed(z, dims, [0, 3]), la.embed(zd, dims, [0, 3])),
        "Z14* . Z14": (la.embed(zd, dims, [0, 3]), la.embed(z, dims, [0, 3])),
    }
    for nm, pair in couplings.items():
        if pair is None:
            wf = lead @ w2e
        else:
            left, right = pair
            wf = lead @ left @ w2e @ right
        gap = la.norm_inf(wf - we)
        flag = "  <<<" if gap < 1e-9 else ""
        print(f"    {nm:14s} |wf-we| = {gap:.3e}{flag}")
    print(f"  ({time.time()-t0:.1f}s)")


test("C(Z3)", H.fn_algebra(H.cyclic_table(3)), False)
test("C[S3]", H.group_algebra(H.symmetric_3_table()), False)
test("C[S3]", H.group_algebra(H.symmetric_3_table()), True)
test("C(S3)", H.fn_algebra(H.symmetric_3_table()), False)
test("C(S3)", H.fn_algebra(H.symmetric_3_table()), True)

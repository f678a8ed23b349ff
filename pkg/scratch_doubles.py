import numpy as np
import time
from qg import hopf as H
from qg import doubles as D
from qg import _linalg as la

t0 = time.time()

# --- right regular on small cases
for mk, nm in [(lambda: H.fn_algebra(H.cyclic_table(2)), "C(Z2)"),
               (lambda: H.group_algebra(H.cyclic_table(3)), "C[Z3]"),
               (lambda: H.kac_paljutkin(), "KP")]:
    h = mk()
    v = D.right_regular(h)
    print(f"right_regular {nm}: ok ({time.time()-t0:.1f}s)")

# --- co_opposite sanity: same haar, valid hopf
h = H.kac_paljutkin()
co = D.co_opposite(h)
H.validate_hopf(co)
print("co_opposite KP valid, haar gap:",
      np.abs(H.haar_state(co).weights - H.haar_state(h).weights).max())

# W1^op = Sigma V1* Sigma equals engine W of co_opposite?
r = H.realize(h)
v1 = D.right_regular(r)
sig = la.swap_matrix(8, 8)
w1co = sig @ la.dagger(v1) @ sig
rco = H.realize(co)
print("W^coop gap:", la.norm_inf(w1co - rco.w))

# --- trivial matching: double == direct_product(coop(g1), g2)
g1 = H.fn_algebra(H.cyclic_table(3))
g2 = H.group_algebra(H.cyclic_table(3))
m = D.trivial_matching(g1, g2)
dbl = D.double_crossed(g1, g2, m)
ref = D.direct_product(D.co_opposite(H.realize(g1).hopf), H.realize(g2).hopf)
print("trivial matching vs direct product:", H.max_tensor_difference(dbl.hopf, ref))
print(f"({time.time()-t0:.1f}s)")

# --- gamma checks on the trivial double
rep = D.gamma_embeddings_check(dbl)
print("gamma residuals (trivial):", {k: f"{v:.2e}" for k, v in rep.residuals.items()})

# --- fourier on trivial double
u1 = la.random_complex((3,), seed=3)
u2 = la.random_complex((3,), seed=4)
ff = D.fourier_factorization(dbl, u1, u2)
print("fourier residual (trivial):", ff.residual)
ffe = D.fourier_factorization(dbl, dbl.match.g1.counit, u2)
print("eps1 left factor == 1:", la.norm_inf(ffe.left - np.eye(9)))

# --- Drinfeld double of Z2
t1 = time.time()
hz2 = H.fn_algebra(H.cyclic_table(2))
dm = D.drinfeld_matching(hz2)
print("drinfeld matching Z2 residuals:", {k: f"{v:.2e}" for k, v in dm.residuals.items()})
dz2 = D.double_crossed(dm.g1, dm.g2, dm)
print("D(Z2) dim:", dz2.hopf.dim, "commutative:", dz2.hopf.is_commutative(),
      "cocommutative:", dz2.hopf.is_cocommutative())
rep = D.gamma_embeddings_check(dz2)
print("gamma residuals D(Z2):", {k: f"{v:.2e}" for k, v in rep.residuals.items()})
u1 = la.random_complex((2,), seed=5)
u2 = la.random_complex((2,), seed=6)
ff = D.fourier_factorization(dz2, u1, u2)
print("fourier residual D(Z2):", ff.residual)
for side in (1, 2):
    u = la.random_complex((2,), seed=10 + side)
    repm = D.double_multiplier_formulas(dz2, u, side)
    print(f"multiplier side {side} residual:", repm.residual)
print(f"D(Z2) total {time.time()-t1:.1f}s")

# D(Z2) block structure: commutative+cocommutative of dim 4 -> C(Z2xZ2): blocks all 1
print("D(Z2) blocks:", H.block_structure(dz2.hopf))

# --- drinfeld_double wrapper with tags
from qg.corep import group_table
tbl = group_table(H.cyclic_table(2))
tags = {0: np.array([1.0, 0.0]), 1: np.array([0.0, 1.0])}
dd = D.drinfeld_double(hz2, table=tbl, tags=tags)
print("drinfeld_double(Z2) tags validated, dim:", dd.hopf.dim)

print(f"ALL OK in {time.time()-t0:.1f}s")

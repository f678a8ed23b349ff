import time

import numpy as np

import qg.hopf as H
from qg.doubles import (
    drinfeld_matching, drinfeld_double, _build_double, double_crossed,
    trivial_matching, gamma_embeddings_check, fourier_factorization,
    double_multiplier_formulas, co_opposite, direct_product,
)
from qg.corep import group_table

rng = np.random.default_rng(7)

for maker, label in [
    (lambda: H.fn_algebra(H.cyclic_table(2), name="C(Z2)"), "D(C(Z2))"),
    (lambda: H.fn_algebra(H.cyclic_table(3), name="C(Z3)"), "D(C(Z3))"),
    (lambda: H.fn_algebra(H.symmetric_3_table(), name="C(S3)"), "D(C(S3))"),
    (lambda: H.group_algebra(H.symmetric_3_table(), name="C[S3]"), "D(C[S3])"),
]:
    h = maker()
    t0 = time.time()
    match = drinfeld_matching(h)
    dbl, real_m, res = _build_double(match.g1, match.g2, match)
    dt = time.time() - t0
    print(f"{label}: dim {dbl.dim}  {res}  [{dt:.1f}s]")

print()
h = H.fn_algebra(H.cyclic_table(2), name="C(Z2)")
match = drinfeld_matching(h)
dbl = double_crossed(match.g1, match.g2, match)
rep = gamma_embeddings_check(dbl)
print("D(Z2) gamma:", {k: f"{v:.2e}" for k, v in rep.residuals.items()})
u1 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
u2 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
ff = fourier_factorization(dbl, u1, u2)
print("D(Z2) fourier residual:", f"{ff.residual:.2e}")
for side in (1, 2):
    u = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    rep2 = double_multiplier_formulas(dbl, u, side)
    print(f"D(Z2) multiplier side {side}:", f"{rep2.residual:.2e}")

print()
t0 = time.time()
h3 = H.group_algebra(H.symmetric_3_table(), name="C[S3]")
match3 = drinfeld_matching(h3)
dbl3 = double_crossed(match3.g1, match3.g2, match3)
print(f"D(S3-dual) built [{time.time() - t0:.1f}s]")
t0 = time.time()
ff = fourier_factorization(dbl3, rng.standard_normal(6), rng.standard_normal(6))
print(f"D(S3-dual) fourier residual: {ff.residual:.2e} [{time.time() - t0:.1f}s]")
t0 = time.time()
for side in (1, 2):
    u = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    rep2 = double_multiplier_formulas(dbl3, u, side)
    print(f"D(S3-dual) multiplier side {side}: {rep2.residual:.2e} "
          f"[{time.time() - t0:.1f}s]")
    t0 = time.time()

print()
t0 = time.time()
g1 = H.fn_algebra(H.cyclic_table(3), name="C(Z3)")
g2 = H.group_algebra(H.cyclic_table(3), name="C[Z3]")
triv = trivial_matching(g1, g2)
dblt = double_crossed(g1, g2, triv)
ref = direct_product(co_opposite(realizeable := triv.g1), triv.g2)
print("trivial C(Z3)xC[Z3]: coord gap",
      H.max_tensor_difference(dblt.hopf, ref), f"[{time.time() - t0:.1f}s]")
rept = gamma_embeddings_check(dblt)
print("trivial gamma:", {k: f"{v:.2e}" for k, v in rept.residuals.items()})
fft = fourier_factorization(dblt, rng.standard_normal(3), rng.standard_normal(3))
print("trivial fourier residual:", f"{fft.residual:.2e}")

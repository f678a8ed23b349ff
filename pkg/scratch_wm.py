import numpy as np
from qg import hopf as H
from qg import doubles as D
from qg import _linalg as la

h = H.fn_algebra(H.cyclic_table(2))
real = H.realize(h)
m = D.drinfeld_matching(h)
h1, h2 = m.g1, m.g2
r1, r2 = m.real1, m.real2
n1, n2 = h1.dim, h2.dim
n = n1 * n2
z = m.z
m4 = m.m_map.reshape(n1, n2, n1, n2)

mult = np.einsum("ijk,abc->iajbkc", h1.mult, h2.mult).reshape(n, n, n)
comult = np.einsum("ijk,abc,pqjb->iakqpc", h1.comult, h2.comult, m4,
                   optimize=True).reshape(n, n, n)
antipode = m.m_inv_map @ np.kron(np.linalg.inv(h1.antipode), h2.antipode)
dbl = H.HopfData(mult, comult, np.kron(h1.unit, h2.unit),
                 np.kron(h1.counit, h2.counit), antipode,
                 np.kron(h1.star, h2.star), name="D(Z2)")
H.validate_hopf(dbl)
real_m = H.realize(dbl)
we = real_m.w
print("engine W_m ok")

v1 = D.right_regular(r1)
sig1 = la.swap_matrix(n1, n1)
w1co = sig1 @ la.dagger(v1) @ sig1
print("|SV1*S - W^H| =", la.norm_inf(w1co - real.w))  # coop(coop(H)) = H

dims = [n1, n2, n1, n2]
zd = la.dagger(z)


def emb(op, legs):
    return la.embed(op, dims, legs)


def pent(w):
    td = [n, n, n]
    return la.norm_inf(
        la.embed(w, td, [0, 1]) @ la.embed(w, td, [0, 2]) @ la.embed(w, td, [1, 2])
        - la.embed(w, td, [1, 2]) @ la.embed(w, td, [0, 1]))


def implements(w, hopfd, rl):
    pis = np.array(rl._pi)
    worst = 0.0
    for i in range(hopfd.dim):
        lhs = la.dagger(w) @ np.kron(np.eye(hopfd.dim), rl._pi[i]) @ w
        rhs = np.einsum("jk,juv,kxy->uxvy", hopfd.coproduct(np.eye(hopfd.dim)[i]),
                        pis, pis, optimize=True).reshape(hopfd.dim ** 2, hopfd.dim ** 2)
        worst = max(worst, la.norm_inf(lhs - rhs))
    return worst


variants = {
    "paper  (SV1*S)13 Z34* W2_24 Z34": emb(w1co, [0, 2]) @ emb(zd, [2, 3]) @ emb(r2.w, [1, 3]) @ emb(z, [2, 3]),
    "swapZ  (SV1*S)13 Z34 W2_24 Z34*": emb(w1co, [0, 2]) @ emb(z, [2, 3]) @ emb(r2.w, [1, 3]) @ emb(zd, [2, 3]),
    "Z12    (SV1*S)13 Z12* W2_24 Z12": emb(w1co, [0, 2]) @ emb(zd, [0, 1]) @ emb(r2.w, [1, 3]) @ emb(z, [0, 1]),
    "Z12s   (SV1*S)13 Z12 W2_24 Z12*": emb(w1co, [0, 2]) @ emb(z, [0, 1]) @ emb(r2.w, [1, 3]) @ emb(zd, [0, 1]),
    "conj both": emb(zd, [2, 3]) @ emb(w1co, [0, 2]) @ emb(r2.w, [1, 3]) @ emb(z, [2, 3]),
}
for nm, w in variants.items():
    print(f"{nm}:  |w-we|={la.norm_inf(w - we):.3e}  pent={pent(w):.3e}  "
          f"impl={implements(w, dbl, real_m):.3e}")

# engine W_m expressed through factors? solve: what does we look like in legs
print("\nengine impl check:", implements(we, dbl, real_m))

"""Dictionary between corepresentation tables and the finite engine.

A CorepBridge holds a finite quantum group (hopf engine data), an IrrTable,
and for every label an explicit unitary corepresentation matrix whose entries
are coordinate vectors in the engine's basis.  The constructor checks that
the matrices really are unitary corepresentations, that their coefficients
span the algebra (Peter-Weyl completeness), and that their Haar Gram matrix
matches schur_gram.

The bridge then identifies

  PolElement  <->  algebra coordinates   via x = sum c^a_{ij} V^a_{ij}
  FinSupp     <->  canonical dual coordinates  via a^a_{ij} = <a-hat, V^a_{ij}>

and exposes residual checks for every identity that has both a coefficient
form and an engine form: the multiplier relation, the GNS implementation
Lambda(Theta^l(a) b) = S^{-1}(a) Lambda(b), the involution
Theta^l(S(a*)) = Theta^l(a)-dagger, Haar invariance of symmetrized
multipliers, and the averaging identity
Theta^l(A(a)) = Delta-sharp (id (x) Theta^l(a)) Delta.
"""

import itertools

import numpy as np

from . import _linalg as la
from .corep import (FinSupp, PolElement, antipode_inv, central_average,
                    group_table, rep_s3_table, schur_gram, schur_index,
                    theta_apply)
from .errors import AxiomViolation, EquivalenceViolation, ShapeMismatch
from .hopf import (fn_algebra, group_algebra, l2_implement, left_multiplier,
                   multiplier_relation_residual, realize, symmetric_3_table)


class CorepBridge:
    def __init__(self, h, table, coeffs, tol=1e-9):
        self.real = realize(h)
        self.hopf = self.real.hopf
        self.table = table
        self.tol = tol
        n = self.hopf.dim
        self.rows = schur_index(table, table.labels)
        if sum(table.dims[a] ** 2 for a in table.labels) != n:
            raise ShapeMismatch(
                "sum of squared dimensions does not match the algebra")
        self.coeffs = {}
        for a in table.labels:
            v = np.asarray(coeffs[a], dtype=complex)
            if v.shape != (table.dims[a], table.dims[a], n):
                raise ShapeMismatch(f"coefficients at {a!r} have shape {v.shape}")
            self.coeffs[a] = v
        # pairing matrix: row (a,i,j) holds the coordinates of U^a_{ij}
        self.m = np.stack([self.coeffs[a][i, j] for a, i, j in self.rows])
        self.residuals = self._validate()

    def _validate(self):
        h, n = self.hopf, self.hopf.dim
        res = {"corep": 0.0, "unitary": 0.0}
        for a in self.table.labels:
            d = self.table.dims[a]
            v = self.coeffs[a]
            for i in range(d):
                for j in range(d):
                    lhs = h.coproduct(v[i, j])
                    rhs = sum(np.outer(v[i, k], v[k, j]) for k in range(d))
                    res["corep"] = max(res["corep"], np.abs(lhs - rhs).max())
            for i in range(d):
                for j in range(d):
                    acc = sum(h.product(h.apply_star(v[k, i]), v[k, j])
                              for k in range(d))
                    want = h.unit if i == j else np.zeros(n)
                    res["unitary"] = max(res["unitary"], np.abs(acc - want).max())
        sv = np.linalg.svd(self.m, compute_uv=False)
        if sv[-1] < 1e-10 * max(1.0, sv[0]):
            raise AxiomViolation("corepresentation coefficients do not span")
        gram_engine = np.conj(self.m) @ self.real.haar.gram @ self.m.T
        res["schur"] = float(np.abs(
            gram_engine - schur_gram(self.table, self.table.labels)).max())
        worst = max(res.values())
        if worst > self.tol:
            raise AxiomViolation(f"corep table fails engine checks: {res}")
        return res

    # --- coordinate dictionaries -----------------------------------------

    def pol_to_coords(self, x):
        flat = np.array([x.block(a)[i, j] for a, i, j in self.rows])
        return self.m.T @ flat

    def coords_to_pol(self, v):
        flat = np.linalg.solve(self.m.T, np.asarray(v, dtype=complex))
        out = {}
        for val, (a, i, j) in zip(flat, self.rows):
            out.setdefault(a, np.zeros((self.table.dims[a],) * 2, dtype=complex))
            out[a][i, j] = val
        return PolElement(self.table, out)

    def dual_coords(self, a):
        flat = np.array([a.block(al)[i, j] for al, i, j in self.rows])
        return np.linalg.solve(self.m, flat)

    def finsupp_from_dual(self, c):
        flat = self.m @ np.asarray(c, dtype=complex)
        out = {}
        for val, (al, i, j) in zip(flat, self.rows):
            out.setdefault(al, np.zeros((self.table.dims[al],) * 2, dtype=complex))
            out[al][i, j] = val
        return FinSupp(self.table, out)

    # --- transported maps -------------------------------------------------

    def theta_matrix(self, a):
        """Engine matrix of Theta^l(a) on algebra coordinates."""
        return left_multiplier(self.real, self.dual_coords(a))

    def coefficient_theta_matrix(self, a):
        """The same map computed purely from the coefficient formula."""
        n = self.hopf.dim
        blocks = []
        for al in self.table.labels:
            d = self.table.dims[al]
            blocks.append(np.kron(a.block(al).T, np.eye(d)))
        tflat = np.zeros((n, n), dtype=complex)
        pos = 0
        for b in blocks:
            d = b.shape[0]
            tflat[pos:pos + d, pos:pos + d] = b
            pos += d
        minv = np.linalg.inv(self.m.T)
        return self.m.T @ tflat @ minv

    def multiplier_check(self, a):
        """Coefficient formula vs the engine relation (1 (x) a)W = (Th (x) 1)W."""
        c = self.dual_coords(a)
        theta = left_multiplier(self.real, c)
        r1 = multiplier_relation_residual(self.real, c, theta)
        r2 = la.norm_inf(theta - self.coefficient_theta_matrix(a))
        return max(float(r1), float(r2))

    def l2_check(self, a):
        """Lambda(Theta^l(a) b) = S^{-1}(a) Lambda(b), table route vs engine."""
        c = self.dual_coords(a)
        report = l2_implement(self.real, c)
        transported = self.real.dual.op(self.dual_coords(antipode_inv(self.table, a)))
        return max(float(report.residual),
                   float(la.norm_inf(report.t - transported)))

    def involution_check(self, a, a_sharp):
        """Theta^l(a-sharp) must be the conjugate map x -> Theta^l(a)(x*)*.

        On coordinate matrices the conjugate map is
        star @ conj(theta) @ conj(star), with star the coordinate matrix of
        the algebra involution."""
        st = self.hopf.star
        t = self.theta_matrix(a)
        ts = self.theta_matrix(a_sharp)
        return float(la.norm_inf(ts - st @ np.conj(t) @ np.conj(st)))

    def haar_invariance(self, a):
        """max(|h(Theta^l(a) x) - h(x)|) over basis x, for unital multipliers."""
        theta = self.theta_matrix(a)
        hvec = self.real.haar.weights
        return float(np.abs(theta.T @ hvec - hvec).max())

    def averaging_check(self, a, tol=1e-8):
        """Theta^l(A(a)) = Delta-sharp (id (x) Theta^l(a)) Delta on the engine.

        Delta-sharp is inverse-of-Delta composed with the averaging
        expectation E(U^a_{ij} (x) U^b_{kl}) = d_ab d_jk / dim(a) Delta(U^a_{il})."""
        h, n = self.hopf, self.hopf.dim
        dmat = h.comult.reshape(n, n * n).T  # coords of Delta(e_i) in column i
        nrows = len(self.rows)
        basis = np.zeros((n * n, nrows * nrows), dtype=complex)
        img = np.zeros((n * n, nrows * nrows), dtype=complex)
        for p, (a1, i, j) in enumerate(self.rows):
            for q, (a2, k, l) in enumerate(self.rows):
                col = p * nrows + q
                basis[:, col] = np.kron(self.m[p], self.m[q])
                if a1 == a2 and j == k:
                    img[:, col] = (dmat @ self.m[self.rows.index((a1, i, l))]
                                   / self.table.dims[a1])
        emat = img @ np.linalg.inv(basis)
        theta = self.theta_matrix(a)
        route = emat @ np.kron(np.eye(n), theta) @ dmat
        sol, rres, _, _ = np.linalg.lstsq(dmat, route, rcond=None)
        back = float(la.norm_inf(dmat @ sol - route))
        if back > tol:
            raise EquivalenceViolation(
                f"averaged map does not land in Delta(A), residual {back:.3e}")
        lhs = self.theta_matrix(central_average(self.table, a))
        return max(back, float(la.norm_inf(lhs - sol)))

    def theta_pol_check(self, a, x):
        """theta_apply vs the engine theta on a single coefficient element."""
        via_engine = self.theta_matrix(a) @ self.pol_to_coords(x)
        via_table = self.pol_to_coords(theta_apply(self.table, a, x))
        return float(np.abs(via_engine - via_table).max())


def s3_permutations():
    return sorted(itertools.permutations(range(3)))


def s3_two_dim_rep():
    """The 2-dimensional irreducible representation of S3, real orthogonal."""
    b = np.array([[1.0 / np.sqrt(2), 1.0 / np.sqrt(6)],
                  [-1.0 / np.sqrt(2), 1.0 / np.sqrt(6)],
                  [0.0, -2.0 / np.sqrt(6)]])
    mats = []
    for p in s3_permutations():
        perm = np.zeros((3, 3))
        for x in range(3):
            perm[p[x], x] = 1.0
        mats.append(b.T @ perm @ b)
    return mats


def _parity(p):
    flips = sum(1 for i in range(len(p)) for j in range(i + 1, len(p))
                if p[i] > p[j])
    return -1.0 if flips % 2 else 1.0


def bridge_group_algebra(mult_table, name=""):
    """Group algebra C[G] with the group-element table: V^g = e_g."""
    h = group_algebra(mult_table, name=name)
    table = group_table(mult_table, name=f"dual of {h.name or 'C[G]'}")
    n = h.dim
    coeffs = {g: np.eye(n)[g].reshape(1, 1, n) for g in range(n)}
    return CorepBridge(h, table, coeffs)


def bridge_fn_cyclic(n):
    """C(Z_n) with the character table: V^k(g) = exp(2 pi i k g / n)."""
    from .hopf import cyclic_table
    h = fn_algebra(cyclic_table(n), name=f"C(Z{n})")
    table = group_table(cyclic_table(n), name=f"dual of C(Z{n})")
    w = np.exp(2j * np.pi / n)
    coeffs = {k: np.array([w ** (k * g) for g in range(n)]).reshape(1, 1, n)
              for k in range(n)}
    return CorepBridge(h, table, coeffs)


def bridge_fn_s3():
    """C(S3) with the (triv, sgn, std) table; entries are coefficient functions."""
    h = fn_algebra(symmetric_3_table(), name="C(S3)")
    table = rep_s3_table()
    perms = s3_permutations()
    std = s3_two_dim_rep()
    coeffs = {
        "triv": np.ones((1, 1, 6)),
        "sgn": np.array([_parity(p) for p in perms]).reshape(1, 1, 6),
        "std": np.stack([m for m in std], axis=-1).reshape(2, 2, 6),
    }
    return CorepBridge(h, table, coeffs)


def bridge_group_s3():
    return bridge_group_algebra(symmetric_3_table(), name="C[S3]")

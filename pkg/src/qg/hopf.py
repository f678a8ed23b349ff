"""Finite quantum group engine.

A finite quantum group is stored as the full structure-constant package of a
finite dimensional Hopf *-algebra A over a fixed basis e_0 .. e_{n-1}:

    mult[i,j,k]     coefficient of e_k in e_i e_j
    comult[i,j,k]   coefficient of e_j (x) e_k in Delta(e_i)
    unit[i]         coordinates of 1
    counit[i]       eps(e_i)
    antipode[j,i]   coefficient of e_j in S(e_i)   (so S acts as antipode @ x)
    star[j,i]       coefficient of e_j in (e_i)*   (x* has coords star @ conj(x))

From these the module computes the Haar state, the GNS representation, the
multiplicative unitary W with

    W* (Lambda(b) (x) Lambda(x)) = (Lambda (x) Lambda)(Delta(x)(b (x) 1)),

the dual Hopf *-algebra spanned by the first-leg slices of W, multipliers and
their L2 implementations, and the biduality check. The dual basis is the set
of second legs Z_i of the expansion W = sum_i pi(e_i) (x) Z_i; the canonical
pairing <Z_i, e_j> is then the Kronecker delta, which makes the double dual
agree with the original data coordinatewise.
"""

import numpy as np

from . import _linalg as la
from .errors import (
    AxiomViolation,
    DimensionMismatch,
    EquivalenceViolation,
    InconsistentAntipode,
    IntertwiningFailure,
    NoInvariantState,
    NotPositive,
    NotUnitary,
    PentagonFailure,
    ShapeMismatch,
    SpanNotClosed,
)


class HopfData:
    """Structure constants of a finite dimensional Hopf *-algebra."""

    def __init__(self, mult, comult, unit, counit, antipode, star, name=""):
        self.mult = np.asarray(mult, dtype=complex)
        self.comult = np.asarray(comult, dtype=complex)
        self.unit = np.asarray(unit, dtype=complex)
        self.counit = np.asarray(counit, dtype=complex)
        self.antipode = np.asarray(antipode, dtype=complex)
        self.star = np.asarray(star, dtype=complex)
        self.name = name
        n = self.unit.shape[0]
        for field, shape in (("mult", (n, n, n)), ("comult", (n, n, n)),
                             ("unit", (n,)), ("counit", (n,)),
                             ("antipode", (n, n)), ("star", (n, n))):
            got = getattr(self, field).shape
            if got != shape:
                raise ShapeMismatch(f"{field} has shape {got}, expected {shape}")

    @property
    def dim(self):
        return self.unit.shape[0]

    def product(self, x, y):
        return np.einsum("i,j,ijk->k", x, y, self.mult)

    def coproduct(self, x):
        """Delta(x) as an (n, n) coordinate matrix over e_j (x) e_k."""
        return np.einsum("i,ijk->jk", x, self.comult)

    def left_mult_matrix(self, x):
        """Matrix of y -> x y on coordinates."""
        return np.einsum("i,ijk->kj", x, self.mult)

    def right_mult_matrix(self, y):
        """Matrix of x -> x y on coordinates."""
        return np.einsum("j,ijk->ki", y, self.mult)

    def apply_antipode(self, x):
        return self.antipode @ x

    def apply_star(self, x):
        return self.star @ np.conj(x)

    def apply_counit(self, x):
        return complex(self.counit @ x)

    def tensor_square_product(self, x2, y2):
        """Product of two elements of A (x) A given as (n, n) coord matrices."""
        return np.einsum("jk,pq,jpa,kqb->ab", x2, y2, self.mult, self.mult)

    def is_commutative(self, tol=1e-10):
        return la.norm_inf((self.mult - self.mult.transpose(1, 0, 2)).reshape(self.dim, -1)) <= tol

    def is_cocommutative(self, tol=1e-10):
        return la.norm_inf((self.comult - self.comult.transpose(0, 2, 1)).reshape(self.dim, -1)) <= tol


class ValidationReport:
    def __init__(self, residuals, tol):
        self.residuals = residuals
        self.tol = tol

    @property
    def max_residual(self):
        return max(self.residuals.values())

    @property
    def ok(self):
        return self.max_residual <= self.tol

    def worst(self):
        key = max(self.residuals, key=self.residuals.get)
        return key, self.residuals[key]

    def __repr__(self):
        key, val = self.worst()
        return f"ValidationReport(max={val:.3e} at {key}, ok={self.ok})"


def _tnorm(t):
    return float(np.max(np.abs(t))) if np.asarray(t).size else 0.0


def validate_hopf(h, tol=1e-9, raise_on_fail=True):
    """Check every Hopf *-algebra axiom on the structure constants.

    Returns a ValidationReport with one residual per axiom; raises
    AxiomViolation naming the worst failed axiom when raise_on_fail is set.
    """
    m, c = h.mult, h.comult
    n = h.dim
    eye = np.eye(n)
    r = {}
    r["associativity"] = _tnorm(np.einsum("ijp,pkl->ijkl", m, m)
                                - np.einsum("jkq,iql->ijkl", m, m))
    r["unit"] = max(_tnorm(np.einsum("i,ijk->kj", h.unit, m) - eye),
                    _tnorm(np.einsum("j,ijk->ki", h.unit, m) - eye))
    r["coassociativity"] = _tnorm(np.einsum("ipl,pjk->ijkl", c, c)
                                  - np.einsum("ijp,pkl->ijkl", c, c))
    r["counit"] = max(_tnorm(np.einsum("ijk,j->ik", c, h.counit) - eye),
                      _tnorm(np.einsum("ijk,k->ij", c, h.counit) - eye))
    r["comult_homomorphism"] = _tnorm(
        np.einsum("ijk,kab->ijab", m, c)
        - np.einsum("ipq,jrs,pra,qsb->ijab", c, c, m, m, optimize=True))
    r["comult_unit"] = _tnorm(np.einsum("i,ijk->jk", h.unit, c)
                              - np.outer(h.unit, h.unit))
    r["counit_homomorphism"] = _tnorm(np.einsum("ijk,k->ij", m, h.counit)
                                      - np.outer(h.counit, h.counit))
    r["counit_unit"] = abs(complex(h.counit @ h.unit) - 1.0)
    r["antipode_left"] = _tnorm(np.einsum("ijk,pj,pkl->il", c, h.antipode, m)
                                - np.outer(h.counit, h.unit))
    r["antipode_right"] = _tnorm(np.einsum("ijk,pk,jpl->il", c, h.antipode, m)
                                 - np.outer(h.counit, h.unit))
    r["star_involution"] = _tnorm(h.star @ np.conj(h.star) - eye)
    r["star_antimultiplicative"] = _tnorm(
        np.einsum("ijk,pk->ijp", np.conj(m), h.star)
        - np.einsum("aj,bi,abp->ijp", h.star, h.star, m))
    r["star_comultiplicative"] = _tnorm(
        np.einsum("pi,pjk->ijk", h.star, c)
        - np.einsum("iab,ja,kb->ijk", np.conj(c), h.star, h.star))
    r["unit_selfadjoint"] = _tnorm(h.star @ np.conj(h.unit) - h.unit)
    r["counit_star"] = _tnorm(h.counit @ h.star - np.conj(h.counit))
    sstar = h.antipode @ h.star
    r["antipode_star_squared"] = _tnorm(sstar @ np.conj(sstar) - eye)
    report = ValidationReport(r, tol)
    if raise_on_fail and not report.ok:
        key, val = report.worst()
        raise AxiomViolation(f"{h.name or 'hopf data'}: axiom '{key}' fails with residual {val:.3e}")
    return report


class HaarData:
    def __init__(self, weights, gram, nu, delta, tracial, residuals):
        self.weights = weights
        self.gram = gram
        self.nu = nu            # scaling constant, 1 in the finite (Kac) case
        self.delta = delta      # modular element coordinates, the unit here
        self.tracial = tracial
        self.residuals = residuals

    def value(self, x):
        return complex(self.weights @ x)


def haar_state(h, tol=1e-9):
    """Two-sided invariant state. The invariance equations

        (id (x) h)Delta(x) = h(x) 1 = (h (x) id)Delta(x)

    must cut out exactly a one dimensional solution space, which is then
    normalized by h(1) = 1 and checked for positivity and faithfulness.
    """
    n = h.dim
    eye = np.eye(n)
    m1 = h.comult.reshape(n * n, n) - np.einsum("j,ik->ijk", h.unit, eye).reshape(n * n, n)
    m2 = h.comult.transpose(0, 2, 1).reshape(n * n, n) - np.einsum("k,ij->ikj", h.unit, eye).reshape(n * n, n)
    ns = la.nullspace(np.concatenate([m1, m2], axis=0), tol=1e-10)
    if ns.shape[1] != 1:
        raise NoInvariantState(
            f"invariant functional space has dimension {ns.shape[1]}, expected 1")
    w = ns[:, 0]
    norm = complex(w @ h.unit)
    if abs(norm) < 1e-12:
        raise NoInvariantState("invariant functional vanishes on the unit")
    w = w / norm
    res = {
        "left_invariance": _tnorm(np.einsum("ijk,k->ij", h.comult, w) - np.outer(w, h.unit)),
        "right_invariance": _tnorm(np.einsum("ijk,j->ik", h.comult, w) - np.outer(w, h.unit)),
    }
    gram = np.einsum("pi,pjk,k->ij", h.star, h.mult, w)
    herm = la.norm_inf(gram - la.dagger(gram))
    res["gram_hermitian"] = herm
    if herm > tol:
        raise NotPositive(f"h(x* y) form is not hermitian, residual {herm:.3e}")
    evals = np.linalg.eigvalsh(0.5 * (gram + la.dagger(gram)))
    if evals[0] < -tol:
        raise NotPositive(f"haar state is not positive, min eigenvalue {evals[0]:.3e}")
    if evals[0] < tol:
        raise NotPositive(f"haar state is not faithful, min eigenvalue {evals[0]:.3e}")
    tr = np.einsum("ijk,k->ij", h.mult, w)
    res["traciality"] = _tnorm(tr - tr.T)
    if res["traciality"] > tol:
        raise AxiomViolation(
            f"haar state is not tracial (residual {res['traciality']:.3e}); "
            "finite quantum groups are of Kac type, so the input data is inconsistent")
    return HaarData(w, gram, 1.0, h.unit.copy(), True, res)


class Realization:
    """Haar GNS representation of the data, with cached W and dual."""

    def __init__(self, hopf, tol=1e-9):
        self.hopf = hopf
        self.tol = tol
        self.haar = haar_state(hopf, tol=tol)
        l = la.gram_cholesky(self.haar.gram)
        self.lam = la.dagger(l)              # Lambda(x) = lam @ x
        self.lam_inv = np.linalg.inv(self.lam)
        self.omega = self.lam @ hopf.unit    # cyclic vector Lambda(1)
        self._w = None
        self._z = None
        self._dual = None
        self._pi = [self.lam @ hopf.left_mult_matrix(np.eye(hopf.dim)[i]) @ self.lam_inv
                    for i in range(hopf.dim)]

    @property
    def dim(self):
        return self.hopf.dim

    def pi(self, x):
        return np.einsum("i,iuv->uv", np.asarray(x, dtype=complex), np.array(self._pi))

    @property
    def w(self):
        if self._w is None:
            self._w = multiplicative_unitary(self).w
        return self._w

    @property
    def first_leg_ops(self):
        """Z_i with W = sum_i pi(e_i) (x) Z_i; these span the dual algebra."""
        if self._z is None:
            n = self.dim
            p = np.stack([op.reshape(-1) for op in self._pi], axis=1)
            w4 = self.w.reshape(n, n, n, n)
            m = w4.transpose(0, 2, 1, 3).reshape(n * n, n * n)
            z, _, _, _ = np.linalg.lstsq(p, m, rcond=None)
            resid = la.norm_inf(p @ z - m)
            if resid > 1e-8:
                raise SpanNotClosed(f"first leg of W lies outside pi(A), residual {resid:.3e}")
            sv = np.linalg.svd(z, compute_uv=False)
            if sv[-1] < 1e-10 * max(1.0, sv[0]):
                raise SpanNotClosed("second legs of W are linearly dependent; dual degenerates")
            self._z = [z[i].reshape(n, n) for i in range(n)]
        return self._z

    @property
    def dual(self):
        if self._dual is None:
            self._dual = dual_hopf(self)
        return self._dual


def realize(h, tol=1e-9):
    return h if isinstance(h, Realization) else Realization(h, tol=tol)


class UnitaryTensor:
    def __init__(self, w, residuals):
        self.w = w
        self.residuals = residuals


def _pentagon_on_vectors(w, n, samples=8):
    """max_xi |(W12 W13 W23 - W23 W12) xi| / |xi| over random xi."""
    def on_legs(xi, legs):
        if legs == (0, 1):
            return (w @ xi.reshape(n * n, n)).reshape(n, n, n)
        if legs == (1, 2):
            return (xi.reshape(n, n * n) @ w.T).reshape(n, n, n)
        # legs (0, 2): move the middle factor out of the way
        y = (w @ xi.transpose(0, 2, 1).reshape(n * n, n)).reshape(n, n, n)
        return y.transpose(0, 2, 1)

    worst = 0.0
    for k in range(samples):
        xi = la.random_complex((n, n, n), seed=1000 + k)
        lhs = on_legs(on_legs(on_legs(xi, (1, 2)), (0, 2)), (0, 1))
        rhs = on_legs(on_legs(xi, (0, 1)), (1, 2))
        worst = max(worst, float(np.linalg.norm(lhs - rhs) / np.linalg.norm(xi)))
    return worst


def multiplicative_unitary(h, tol=1e-9):
    """W on H (x) H from W*(Lambda(b) (x) Lambda(x)) = LL(Delta(x)(b (x) 1)).

    Checked: unitarity, the pentagon W12 W13 W23 = W23 W12, and that W
    implements the comultiplication, Delta(x) = W*(1 (x) pi(x))W.
    """
    real = realize(h)
    h = real.hopf
    n = h.dim
    coords = np.einsum("xjc,jba->acbx", h.comult, h.mult).reshape(n * n, n * n)
    k = np.kron(real.lam, real.lam)
    wstar = k @ coords @ np.linalg.inv(k)
    w = la.dagger(wstar)
    res = {}
    res["unitary"] = la.norm_inf(la.dagger(w) @ w - np.eye(n * n))
    if res["unitary"] > tol:
        raise NotUnitary(f"W is not unitary, residual {res['unitary']:.3e}")
    if n <= 16:
        dims = [n, n, n]
        w12 = la.embed(w, dims, [0, 1])
        w13 = la.embed(w, dims, [0, 2])
        w23 = la.embed(w, dims, [1, 2])
        res["pentagon"] = la.norm_inf(w12 @ w13 @ w23 - w23 @ w12)
    else:
        # dense operators on the triple tensor power are out of reach here;
        # hit both sides of the pentagon with a batch of random vectors
        res["pentagon"] = _pentagon_on_vectors(w, n)
    if res["pentagon"] > tol:
        raise PentagonFailure(f"pentagon residual {res['pentagon']:.3e}")
    pis = np.array(real._pi)
    worst = 0.0
    for i in range(n):
        lhs = wstar @ np.kron(np.eye(n), real._pi[i]) @ w
        rhs = np.einsum("jk,juv,kxy->uxvy", h.coproduct(np.eye(n)[i]),
                        pis, pis, optimize=True).reshape(n * n, n * n)
        worst = max(worst, la.norm_inf(lhs - rhs))
    res["implements_comult"] = worst
    if worst > tol:
        raise AxiomViolation(f"W fails to implement Delta, residual {worst:.3e}")
    real._w = w
    return UnitaryTensor(w, res)


class DualData:
    """Dual Hopf *-algebra in the canonical slice basis Z_i."""

    def __init__(self, hopf, ops, realization):
        self.hopf = hopf
        self.ops = ops
        self.realization = realization

    def op(self, coords):
        return np.einsum("i,iuv->uv", np.asarray(coords, dtype=complex), np.array(self.ops))

    def coords(self, op, tol=1e-8):
        return la.expand_in_span(self.ops, op, tol=tol, what="dual element")


def dual_hopf(h, tol=1e-9):
    """Dual finite quantum group on the span of the first-leg slices of W.

    The basis is the canonical one (Z_i from W = sum pi(e_i) (x) Z_i), the
    coproduct is stored in the pairing orientation that makes the double dual
    coordinatewise equal to the original data, the counit is evaluation at
    the cyclic vector, the antipode comes from slicing W*, and * is the
    operator adjoint. The result is validated like any other Hopf data.
    """
    real = realize(h)
    hopf = real.hopf
    n = hopf.dim
    z = real.first_leg_ops
    zstack = np.stack([zi.reshape(-1) for zi in z], axis=1)
    zpinv = np.linalg.pinv(zstack)

    def expand(op, what):
        coeff = zpinv @ op.reshape(-1)
        resid = np.linalg.norm(zstack @ coeff - op.reshape(-1))
        if resid > tol * 10 * max(1.0, np.linalg.norm(op)):
            raise SpanNotClosed(f"{what} lies outside the dual algebra, residual {resid:.3e}")
        return coeff

    mult = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            mult[i, j] = expand(z[i] @ z[j], "product of dual elements")
    unit = expand(np.eye(n), "identity")
    star = np.zeros((n, n), dtype=complex)
    for k in range(n):
        star[:, k] = expand(la.dagger(z[k]), "adjoint of dual element")

    w = real.w
    sig = la.swap_matrix(n, n)
    what = sig @ la.dagger(w) @ sig
    comult = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        conj = la.dagger(what) @ np.kron(np.eye(n), z[i]) @ what
        # expand in z_j (x) z_k without forming the n^4 x n^2 tensor basis:
        # regrouping the entries as [(row1,col1),(row2,col2)] turns the
        # target into zstack @ coeff @ zstack.T
        mx = conj.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(n * n, n * n)
        coeff = (zpinv @ (zpinv @ mx).T).T
        resid = np.linalg.norm(zstack @ coeff @ zstack.T - mx)
        if resid > tol * 10 * max(1.0, np.linalg.norm(conj)):
            raise SpanNotClosed(f"dual coproduct not in the dual tensor square, residual {resid:.3e}")
        # flip to the canonical pairing orientation
        comult[i] = coeff.T

    counit = np.array([np.vdot(real.omega, z[i] @ real.omega) for i in range(n)])

    w4 = w.reshape(n, n, n, n)
    slice_mat = w4.transpose(1, 3, 0, 2).reshape(n * n, n * n)
    fs, _, _, _ = np.linalg.lstsq(slice_mat, zstack, rcond=None)
    antipode = np.zeros((n, n), dtype=complex)
    for k in range(n):
        f = fs[:, k]
        resid = np.linalg.norm(slice_mat @ f - z[k].reshape(-1))
        if resid > 1e-8:
            raise SpanNotClosed(f"dual element not a slice of W, residual {resid:.3e}")
        s_op = np.einsum("uv,vduc->cd", f.reshape(n, n), np.conj(w4))
        try:
            antipode[:, k] = expand(s_op, "antipode image")
        except SpanNotClosed as exc:
            raise InconsistentAntipode(str(exc)) from exc

    dual = HopfData(mult, comult, unit, counit, antipode, star,
                    name=f"dual({hopf.name})" if hopf.name else "dual")
    validate_hopf(dual, tol=1e-8)
    return DualData(dual, z, real)


def bidual_check(h, tol=1e-8, raise_on_fail=True):
    """Compare the double dual with the original data coordinatewise.

    In the canonical slice basis the evaluation map A -> A-hat-hat is the
    identity on coordinates, so the Hopf *-isomorphism of the biduality
    theorem is literally equality of all six structure tensors.
    """
    real = realize(h)
    d1 = real.dual
    d2 = dual_hopf(d1.hopf)
    a, b = real.hopf, d2.hopf
    diffs = {
        "mult": _tnorm(a.mult - b.mult),
        "comult": _tnorm(a.comult - b.comult),
        "unit": _tnorm(a.unit - b.unit),
        "counit": _tnorm(a.counit - b.counit),
        "antipode": _tnorm(a.antipode - b.antipode),
        "star": _tnorm(a.star - b.star),
    }
    worst = max(diffs.values())
    if raise_on_fail and worst > tol:
        key = max(diffs, key=diffs.get)
        raise EquivalenceViolation(
            f"double dual differs from the original in {key} by {diffs[key]:.3e}")
    return diffs


def antipode_from_w(h, tol=1e-9):
    """Recover S from S((id (x) om)W) = (id (x) om)W* and compare with the
    stored antipode tensor. Returns (matrix on coordinates, residual)."""
    real = realize(h)
    n = real.dim
    w4 = real.w.reshape(n, n, n, n)
    pis = np.array(real._pi)
    # second-leg slices (id (x) om_uv)W live in pi(A); slice[a,b] = w4[a,u,b,v]
    pstack = np.stack([p.reshape(-1) for p in pis], axis=1)
    sl_in = np.stack([w4[:, u, :, v].reshape(-1)
                      for u in range(n) for v in range(n)], axis=1)
    # (id (x) om_uv)(W*)[a,b] = conj(W[(b,v),(a,u)])
    sl_out = np.stack([np.conj(w4[:, v, :, u]).T.reshape(-1)
                       for u in range(n) for v in range(n)], axis=1)
    cin, _, _, _ = np.linalg.lstsq(pstack, sl_in, rcond=None)
    cout, _, _, _ = np.linalg.lstsq(pstack, sl_out, rcond=None)
    worst = max(float(np.linalg.norm(pstack @ cin - sl_in, axis=0).max()),
                float(np.linalg.norm(pstack @ cout - sl_out, axis=0).max()))
    if worst > 1e-8:
        raise SpanNotClosed(f"slices of W stray from pi(A), residual {worst:.3e}")
    smat, _, _, _ = np.linalg.lstsq(cin.T, cout.T, rcond=None)
    smat = smat.T
    solve_res = la.norm_inf(smat @ cin - cout)
    resid = max(la.norm_inf(smat - real.hopf.antipode), solve_res)
    if resid > tol * 100:
        raise InconsistentAntipode(
            f"antipode from W differs from stored tensor by {resid:.3e}")
    return smat, resid


def left_multiplier(h, a_coords, tol=1e-9):
    """Theta^l(a) on A from the defining relation (1 (x) a)W = (Theta (x) id)(W),
    where a is given in canonical dual coordinates. Returns the matrix theta
    with Theta(e_j) = sum_i theta[i,j] e_i."""
    real = realize(h)
    n = real.dim
    z = real.first_leg_ops
    a_op = np.einsum("i,iuv->uv", np.asarray(a_coords, dtype=complex), np.array(z))
    zstack = np.stack([zi.reshape(-1) for zi in z], axis=1)
    targets = np.stack([(a_op @ z[i]).reshape(-1) for i in range(n)], axis=1)
    rows, _, _, _ = np.linalg.lstsq(zstack, targets, rcond=None)
    theta = np.zeros((n, n), dtype=complex)
    worst = 0.0
    for i in range(n):
        worst = max(worst, float(np.linalg.norm(zstack @ rows[:, i] - targets[:, i])))
        theta[i, :] = rows[:, i]
    if worst > tol * 100:
        raise IntertwiningFailure(
            f"(1 (x) a)W does not factor through the first leg, residual {worst:.3e}")
    # matching coefficients of pi(e_j) in (1 (x) a)W = (Theta (x) id)W gives
    # a Z_j = sum_i theta_coords[j, i] Z_i, which is exactly the stored array
    return theta


def multiplier_relation_residual(h, a_coords, theta):
    """Residual of (1 (x) a)W = (Theta (x) id)(W) for a coordinate-level Theta."""
    real = realize(h)
    n = real.dim
    z = real.first_leg_ops
    a_op = np.einsum("i,iuv->uv", np.asarray(a_coords, dtype=complex), np.array(z))
    lhs = np.kron(np.eye(n), a_op) @ real.w
    rhs = sum(np.kron(real.pi(theta[:, i]), z[i]) for i in range(n))
    return la.norm_inf(lhs - rhs)


class L2Report:
    def __init__(self, t, expected, residual, theta):
        self.t = t
        self.expected = expected
        self.residual = residual
        self.theta = theta


def l2_implement(h, a_coords, tol=1e-8):
    """L2 implementation of Theta^l(a): the operator T with
    Lambda(Theta^l(a) b) = T Lambda(b), verified to equal S^{-1}(a) through
    the dual antipode."""
    real = realize(h)
    dual = real.dual
    theta = left_multiplier(real, a_coords)
    t = real.lam @ theta @ real.lam_inv
    s_inv_coords = np.linalg.solve(dual.hopf.antipode, np.asarray(a_coords, dtype=complex))
    expected = dual.op(s_inv_coords)
    residual = la.norm_inf(t - expected)
    if residual > tol:
        raise EquivalenceViolation(
            f"L2 implementation differs from S^{{-1}}(a) by {residual:.3e}")
    return L2Report(t, expected, residual, theta)


class Classification:
    def __init__(self, label, t, in_dual, in_commutant, left_residual,
                 right_residual, membership_residuals):
        self.label = label
        self.t = t
        self.in_dual = in_dual
        self.in_commutant = in_commutant
        self.in_center = in_dual and in_commutant
        self.left_residual = left_residual
        self.right_residual = right_residual
        self.membership_residuals = membership_residuals

    def __repr__(self):
        return f"Classification({self.label})"


def classify_l2_implementation(h, phi, tol=1e-8):
    """Classify a normal CB map Phi on A by where the L2 implementation of
    Phi-dagger(x) = Phi(x*)* lands:

        T in dual algebra        <->  Delta Phi = (Phi (x) id) Delta
        T in its commutant       <->  Delta Phi = (id (x) Phi) Delta
        T in the center          <->  both (Phi commutes with convolution)

    The membership tests and the comultiplication identities are computed
    independently and must agree; disagreement raises EquivalenceViolation.
    """
    real = realize(h)
    hopf = real.hopf
    n = real.dim
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (n, n):
        raise DimensionMismatch(f"phi must be {n} x {n}, got {phi.shape}")
    phi_dag = hopf.star @ np.conj(phi) @ np.conj(hopf.star)
    t = real.lam @ phi_dag @ real.lam_inv
    z = real.first_leg_ops
    scale = max(1.0, la.norm_inf(t))
    res_dual = la.span_residual(z, t) / scale
    comm = la.commutant_basis(z, n)
    res_comm = la.span_residual(comm, t) / scale
    left = _tnorm(np.einsum("pi,pjk->ijk", phi, hopf.comult)
                  - np.einsum("ipk,jp->ijk", hopf.comult, phi))
    right = _tnorm(np.einsum("pi,pjk->ijk", phi, hopf.comult)
                   - np.einsum("ijp,kp->ijk", hopf.comult, phi))
    in_dual = res_dual <= tol
    in_comm = res_comm <= tol
    if in_dual != (left <= tol) or in_comm != (right <= tol):
        raise EquivalenceViolation(
            "membership and convolution identities disagree: "
            f"dual {res_dual:.3e} / left {left:.3e}, "
            f"commutant {res_comm:.3e} / right {right:.3e}")
    if in_dual and in_comm:
        label = "central"
    elif in_dual:
        label = "left_centralizer"
    elif in_comm:
        label = "right_centralizer"
    else:
        label = "none"
    return Classification(label, t, in_dual, in_comm, left, right,
                          {"dual": res_dual, "commutant": res_comm})


def counit_vector(h, tol=1e-9):
    """Vector xi with pi(x) xi = eps(x) xi, phase fixed by <Omega, xi> > 0."""
    real = realize(h)
    n = real.dim
    rows = []
    for i in range(n):
        rows.append(real.pi(np.eye(n)[i]) - real.hopf.counit[i] * np.eye(n))
    ns = la.nullspace(np.concatenate(rows, axis=0), tol=tol)
    if ns.shape[1] != 1:
        raise NoInvariantState(f"counit eigenspace has dimension {ns.shape[1]}, expected 1")
    xi = ns[:, 0]
    phase = np.vdot(real.omega, xi)
    if abs(phase) < 1e-12:
        raise NoInvariantState("counit vector is orthogonal to the cyclic vector")
    xi = xi * (np.conj(phase) / abs(phase))
    return xi


def block_structure(h, tol=1e-8):
    """Sizes of the matrix blocks of the underlying C*-algebra, ascending."""
    real = realize(h)
    blocks = la.wedderburn(real._pi, tol=tol)
    return tuple(sorted(b["dim"] for b in blocks))


def max_tensor_difference(h1, h2):
    return max(_tnorm(h1.mult - h2.mult), _tnorm(h1.comult - h2.comult),
               _tnorm(h1.unit - h2.unit), _tnorm(h1.counit - h2.counit),
               _tnorm(h1.antipode - h2.antipode), _tnorm(h1.star - h2.star))


# ---------------------------------------------------------------------------
# constructors


def cyclic_table(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def symmetric_3_table():
    """S3 as permutations of {0,1,2} in lexicographic order, composed as
    (p q)(x) = p(q(x)). Index 0 is the identity."""
    from itertools import permutations
    perms = list(permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms]
    return table


def _inverses(table):
    n = len(table)
    inv = [None] * n
    for i in range(n):
        for j in range(n):
            if table[i][j] == 0:
                inv[i] = j
    return inv


def fn_algebra(table, name=""):
    """C(G): functions on the finite group with multiplication table `table`
    (table[i][j] = index of g_i g_j, identity at index 0)."""
    n = len(table)
    inv = _inverses(table)
    mult = np.zeros((n, n, n))
    comult = np.zeros((n, n, n))
    for i in range(n):
        mult[i, i, i] = 1.0
    for j in range(n):
        for k in range(n):
            comult[table[j][k], j, k] = 1.0
    unit = np.ones(n)
    counit = np.zeros(n)
    counit[0] = 1.0
    antipode = np.zeros((n, n))
    star = np.eye(n)
    for i in range(n):
        antipode[inv[i], i] = 1.0
    return HopfData(mult, comult, unit, counit, antipode, star, name=name or "C(G)")


def group_algebra(table, name=""):
    """C[G]: the group algebra, Delta(g) = g (x) g, g* = g^{-1}."""
    n = len(table)
    inv = _inverses(table)
    mult = np.zeros((n, n, n))
    comult = np.zeros((n, n, n))
    antipode = np.zeros((n, n))
    star = np.zeros((n, n))
    for i in range(n):
        comult[i, i, i] = 1.0
        antipode[inv[i], i] = 1.0
        star[inv[i], i] = 1.0
        for j in range(n):
            mult[i, j, table[i][j]] = 1.0
    unit = np.zeros(n)
    unit[0] = 1.0
    counit = np.ones(n)
    return HopfData(mult, comult, unit, counit, antipode, star, name=name or "C[G]")


def trivial_hopf():
    one = np.ones((1, 1, 1))
    return HopfData(one, one, np.ones(1), np.ones(1), np.ones((1, 1)),
                    np.ones((1, 1)), name="trivial")


def opposite_hopf(h):
    return HopfData(h.mult.transpose(1, 0, 2), h.comult, h.unit, h.counit,
                    np.linalg.inv(h.antipode), h.star,
                    name=f"op({h.name})" if h.name else "op")


def kac_paljutkin():
    """The 8-dimensional Kac-Paljutkin quantum group.

    Presentation: unitaries x, y, z with x^2 = y^2 = 1, xy = yx, zx = yz,
    zy = xz, z^2 = (1 + x + y - xy)/2, coproduct group-like on x, y and

        Delta(z) = (1 (x) 1 + 1 (x) x + y (x) 1 - y (x) x)/2 (z (x) z),

    eps = 1 on generators, S fixes x, y and swaps the x/y exponents in front
    of z, * is inversion on generators. The basis is x^a y^b z^c, index
    4a + 2b + c. All axioms are validated at construction; the result is
    the unique 8-dimensional Kac algebra that is neither commutative nor
    cocommutative (blocks (1,1,1,1,2)), which is asserted too."""
    def idx(a, b, c):
        return 4 * a + 2 * b + c

    def mul_words(w1, w2):
        a, b, c = w1
        ap, bp, cp = w2
        if c == 0:
            return {((a + ap) % 2, (b + bp) % 2, cp): 1.0}
        aa, bb = (a + bp) % 2, (b + ap) % 2     # z x = y z, z y = x z
        if cp == 0:
            return {(aa, bb, 1): 1.0}
        out = {}
        for (u, v), s in (((0, 0), 1.0), ((1, 0), 1.0), ((0, 1), 1.0), ((1, 1), -1.0)):
            w = ((aa + u) % 2, (bb + v) % 2, 0)   # z^2 = (1 + x + y - xy)/2
            out[w] = out.get(w, 0.0) + 0.5 * s
        return out

    n = 8
    mult = np.zeros((n, n, n))
    words = [(a, b, c) for a in range(2) for b in range(2) for c in range(2)]
    for w1 in words:
        for w2 in words:
            for w, coef in mul_words(w1, w2).items():
                mult[idx(*w1), idx(*w2), idx(*w)] += coef
    unit = np.zeros(n)
    unit[idx(0, 0, 0)] = 1.0
    counit = np.ones(n)
    antipode = np.zeros((n, n))
    star = np.zeros((n, n))
    for a in range(2):
        for b in range(2):
            antipode[idx(a, b, 0), idx(a, b, 0)] = 1.0
            antipode[idx(b, a, 1), idx(a, b, 1)] = 1.0
            star[idx(a, b, 0), idx(a, b, 0)] = 1.0
            # (x^a y^b z)* = z^3 y^b x^a = z^2 x^b y^a z
            for w, coef in mul_words((0, 0, 1), (0, 0, 1)).items():
                u, v, _ = w
                star[idx((u + b) % 2, (v + a) % 2, 1), idx(a, b, 1)] += coef
    # coproduct: build Delta on generators, extend multiplicatively
    comult = np.zeros((n, n, n), dtype=complex)
    stub = HopfData(mult, np.zeros((n, n, n)), unit, counit, np.eye(n), np.eye(n))
    dx = np.zeros((n, n))
    dx[idx(1, 0, 0), idx(1, 0, 0)] = 1.0
    dy = np.zeros((n, n))
    dy[idx(0, 1, 0), idx(0, 1, 0)] = 1.0
    j = np.zeros((n, n))
    e = lambda a, b: idx(a, b, 0)
    j[e(0, 0), e(0, 0)] = 0.5
    j[e(0, 0), e(1, 0)] = 0.5
    j[e(0, 1), e(0, 0)] = 0.5
    j[e(0, 1), e(1, 0)] = -0.5
    zz = np.zeros((n, n))
    zz[idx(0, 0, 1), idx(0, 0, 1)] = 1.0
    dz = stub.tensor_square_product(j, zz)
    for a in range(2):
        for b in range(2):
            for c in range(2):
                d = np.outer(unit, unit)
                for _ in range(a):
                    d = stub.tensor_square_product(d, dx)
                for _ in range(b):
                    d = stub.tensor_square_product(d, dy)
                for _ in range(c):
                    d = stub.tensor_square_product(d, dz)
                comult[idx(a, b, c)] = d
    out = HopfData(mult, comult, unit, counit, antipode, star, name="kac_paljutkin")
    validate_hopf(out, tol=1e-12)
    assert not out.is_commutative()
    assert not out.is_cocommutative()
    assert block_structure(out) == (1, 1, 1, 1, 2)
    return out

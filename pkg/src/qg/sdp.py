"""Dense primal-dual interior point solver for block semidefinite programs.

Problem data is given in standard conic form over a direct sum of complex
Hermitian matrix blocks:

    primal   min  <C, X>    s.t.  <A_k, X> = b_k  (k < m),   X >= 0
    dual     max  b.y       s.t.  S = C - sum_k y_k A_k >= 0

with <P, Q> = Re tr(PQ) on Hermitian blocks.  The caller must supply strictly
feasible starting points for both sides (every problem built in this package
has closed-form Slater points), which keeps the solver on the feasible path:
iterates satisfy A(X) = b and S = C - A*(y) exactly, so the duality gap is
always <X, S> and the reported primal/dual values are honest bounds.

The search direction is the HKM predictor-corrector step.  No sparsity is
exploited; problems here have a few hundred to a thousand constraints and
blocks of size at most a few dozen, where dense BLAS is fastest anyway.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _linalg as la
from .errors import ShapeMismatch, SolverDiverged


@dataclass
class SdpProblem:
    """Block SDP data.

    block_sizes: list of Hermitian block sizes.
    c: list of (s, s) Hermitian cost blocks.
    a: list of (m, s, s) arrays, a[blk][k] Hermitian; constraint k reads
       sum_blk Re tr(a[blk][k] X[blk]) = b[k].
    b: (m,) real right-hand side.
    x0, y0: strictly feasible starting points.
    """

    block_sizes: list
    c: list
    a: list
    b: np.ndarray
    x0: list
    y0: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=float)
        m = self.b.shape[0]
        for s, cb, ab, xb in zip(self.block_sizes, self.c, self.a, self.x0):
            if cb.shape != (s, s) or xb.shape != (s, s):
                raise ShapeMismatch(f"block data has shape {cb.shape}")
            if ab.shape != (m, s, s):
                raise ShapeMismatch(f"constraint tensor has shape {ab.shape}")
        if self.y0.shape != (m,):
            raise ShapeMismatch(f"y0 has shape {self.y0.shape}")


@dataclass
class SdpSolution:
    primal: float
    dual: float
    gap: float
    iterations: int
    x: list = field(repr=False, default_factory=list)
    y: np.ndarray = field(repr=False, default=None)
    s: list = field(repr=False, default_factory=list)


def _dagger_batch(m):
    return np.conj(np.swapaxes(m, -1, -2))


def _herm_batch(m):
    return 0.5 * (m + _dagger_batch(m))


def _apply_a(a_blocks, x_blocks):
    """A(X)_k = sum_blk Re tr(a[blk][k] x[blk])."""
    out = 0.0
    for ab, xb in zip(a_blocks, x_blocks):
        s = xb.shape[0]
        # tr(A X) = sum_{ij} A_ij X_ji; X Hermitian so X.T = conj(X)
        out = out + np.real(ab.reshape(-1, s * s) @ np.conj(xb).reshape(-1))
    return out


def _adjoint_a(a_blocks, y):
    """A*(y) = sum_k y_k A_k, per block."""
    return [np.einsum("k,kij->ij", y, ab) for ab in a_blocks]


def _chol(x):
    try:
        return np.linalg.cholesky(x)
    except np.linalg.LinAlgError:
        return None


def _max_step(x_blocks, d_blocks):
    """Largest alpha with X + alpha D >= 0 (inf -> 1e30)."""
    alpha = 1e30
    for xb, db in zip(x_blocks, d_blocks):
        l = _chol(xb)
        if l is None:
            # nearly singular block: factor a tiny ridge shift instead
            ridge = np.abs(np.linalg.eigvalsh(xb).min()) + 1e-14 * la.norm_inf(xb)
            l = _chol(xb + ridge * np.eye(xb.shape[0]))
            if l is None:
                raise SolverDiverged("iterate left the cone")
        li = np.linalg.inv(l)
        w = np.linalg.eigvalsh(la.herm(li @ db @ li.conj().T))
        lo = w.min()
        if lo < -1e-14:
            alpha = min(alpha, -1.0 / lo)
    return alpha


def _inner(x_blocks, s_blocks):
    return float(sum(np.real(np.sum(xb * np.conj(sb)))
                     for xb, sb in zip(x_blocks, s_blocks)))


def solve_sdp(prob, gap_tol=1e-9, feas_tol=1e-8, max_iter=200,
              accept_gap=1e-6):
    """Run the feasible-path HKM predictor-corrector method.

    Returns an SdpSolution whose gap field is |primal - dual|; raises
    SolverDiverged if the iteration cap is hit or the barrier parameter
    stagnates before the gap closes.  A stagnated run is still packaged
    as a solution when the tightest bracket seen has absolute duality
    gap at most accept_gap.
    """
    m = prob.b.shape[0]
    ntot = sum(prob.block_sizes)
    x = [la.herm(xb.astype(complex)) for xb in prob.x0]
    y = prob.y0.astype(float).copy()

    def slack(yv):
        return [la.herm(cb - ab_y) for cb, ab_y
                in zip(prob.c, _adjoint_a(prob.a, yv))]

    s = slack(y)
    r0 = np.abs(_apply_a(prob.a, x) - prob.b).max()
    if r0 > feas_tol:
        raise SolverDiverged(f"x0 infeasible, residual {r0:.3e}")
    for blk in x + s:
        if _chol(blk + 0j) is None:
            raise SolverDiverged("starting point is not interior")

    # flattened constraint tensors, one (m, s*s) matrix per block
    flat = [ab.reshape(m, -1) for ab in prob.a]
    # Gram matrix of the constraint map, used to project roundoff drift in
    # A(X) = b back out of the iterate (the drift otherwise compounds as
    # S approaches the boundary)
    gram = np.zeros((m, m))
    for fl in flat:
        gram += np.real(fl @ np.conj(fl).T)
    gram_inv = np.linalg.inv(gram)

    def restore(x_blocks, strict=True):
        rp = prob.b - _apply_a(prob.a, x_blocks)
        if np.abs(rp).max() <= 1e-14:
            return x_blocks
        corr = _adjoint_a(prob.a, np.linalg.solve(gram, rp))
        fixed = [la.herm(xb + cb) for xb, cb in zip(x_blocks, corr)]
        if strict:
            # mid-run iterates must stay strictly interior
            ok = all(_chol(blk) is not None for blk in fixed)
        else:
            # the final projection may graze the boundary by roundoff, which
            # the feasibility tolerance absorbs
            ok = min(np.linalg.eigvalsh(blk).min()
                     for blk in fixed) >= -0.1 * feas_tol
        return fixed if ok else x_blocks

    mu = _inner(x, s) / ntot
    best_mu = mu
    stall = 0
    # tightest feasible bracket seen so far; late steps near the boundary can
    # make the gap grow again, so stalls fall back on this iterate
    best = (_inner(x, s), x, y, s, 0)

    def settle():
        # a stalled run may still carry a bracket tight enough for the
        # caller; accept_gap is that absolute cutoff
        bgap, bx, by, bs, bit = best
        if bgap <= accept_gap:
            return _package(prob, restore(bx, strict=False), by, bs, bit,
                            feas_tol)
        return None

    for it in range(max_iter):
        gap = _inner(x, s)
        dual = float(prob.b @ y)
        if gap < best[0]:
            best = (gap, x, y, s, it)
        if gap <= gap_tol * max(1.0, abs(dual)):
            return _package(prob, restore(x, strict=False), y, s, it, feas_tol)

        try:
            x, y, s = _step(prob, x, y, s, flat, gram_inv, slack, restore,
                            ntot, gap)
        except SolverDiverged:
            got = settle()
            if got is not None:
                return got
            raise

        mu_new = _inner(x, s) / ntot
        if mu_new < 0.9 * best_mu:
            best_mu = mu_new
            stall = 0
        else:
            stall += 1
            if stall >= 15:
                got = settle()
                if got is not None:
                    return got
                raise SolverDiverged(
                    f"barrier parameter stagnated at {mu_new:.3e} "
                    f"after {it + 1} iterations")

    raise SolverDiverged(f"no convergence in {max_iter} iterations")


def _step(prob, x, y, s, flat, gram_inv, slack, restore, ntot, gap):
    """One HKM predictor-corrector step; returns the updated (x, y, s)."""
    m = prob.b.shape[0]
    sinv = [np.linalg.inv(sb) for sb in s]

    # Schur matrix H[k,l] = Re tr(A_k sym(S^-1 A_l X)), assembled per
    # block with one batched product and one BLAS gemm.
    h = np.zeros((m, m))
    for ab, fl, si, xb in zip(prob.a, flat, sinv, x):
        e = _herm_batch(si[None] @ ab @ xb[None])
        h += np.real(fl @ np.conj(e.reshape(m, -1)).T)

    def solve_h(rhs):
        try:
            return np.linalg.solve(h, rhs)
        except np.linalg.LinAlgError:
            ridge = 1e-13 * max(1.0, np.trace(h) / m)
            return np.linalg.solve(h + ridge * np.eye(m), rhs)

    def direction(tau, k_blocks):
        # rhs_k = a(X)_k + a(K S^-1)_k - tau a(S^-1)_k with a(M) = Re tr(A_k M)
        rhs = prob.b.copy()
        for fl, si, kb in zip(flat, sinv, k_blocks or [None] * len(s)):
            mat = -tau * si if kb is None else kb @ si - tau * si
            rhs += np.real(fl @ mat.T.reshape(-1))
        dy = solve_h(rhs)
        ds = [-dsb for dsb in _adjoint_a(prob.a, dy)]
        dx = []
        for xb, si, dsb, kb in zip(x, sinv, ds,
                                   k_blocks or [None] * len(s)):
            core = tau * si - xb - xb @ dsb @ si
            if kb is not None:
                core = core - kb @ si
            dx.append(la.herm(core))
        # cancellation noise in the core products leaks out of the null
        # space of A near the boundary; project it back so steps keep
        # A(X) = b to machine precision
        eps = _apply_a(prob.a, dx)
        corr = _adjoint_a(prob.a, gram_inv @ eps)
        dx = [la.herm(dxb - cb) for dxb, cb in zip(dx, corr)]
        return dy, dx, ds

    # predictor
    dy_a, dx_a, ds_a = direction(0.0, None)
    ap = min(1.0, 0.98 * _max_step(x, dx_a))
    ad = min(1.0, 0.98 * _max_step(s, ds_a))
    mu_aff = _inner([xb + ap * db for xb, db in zip(x, dx_a)],
                    [sb + ad * db for sb, db in zip(s, ds_a)]) / ntot
    mu = gap / ntot
    sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3))

    # corrector with Mehrotra cross term
    k_blocks = [dxb @ dsb for dxb, dsb in zip(dx_a, ds_a)]
    dy, dx, ds = direction(sigma * mu, k_blocks)
    ap = min(1.0, 0.98 * _max_step(x, dx))
    ad = min(1.0, 0.98 * _max_step(s, ds))

    x = restore([la.herm(xb + ap * db) for xb, db in zip(x, dx)])
    y = y + ad * dy
    return x, y, slack(y)


def _package(prob, x, y, s, iterations, feas_tol):
    primal = float(sum(np.real(np.sum(cb * np.conj(xb)))
                       for cb, xb in zip(prob.c, x)))
    dual = float(prob.b @ y)
    res = np.abs(_apply_a(prob.a, x) - prob.b).max()
    if res > feas_tol:
        raise SolverDiverged(f"final iterate infeasible, residual {res:.3e}")
    for blk in x + s:
        lo = np.linalg.eigvalsh(blk).min()
        if lo < -feas_tol:
            raise SolverDiverged(f"final iterate leaves the cone, {lo:.3e}")
    return SdpSolution(primal=primal, dual=dual, gap=abs(primal - dual),
                       iterations=iterations, x=x, y=y, s=s)


def herm_basis(p):
    """Orthonormal real basis of p x p Hermitian matrices, shape (p*p, p, p).

    Order: diagonal units first, then for r < s the real pair
    (E_rs + E_sr)/sqrt(2) followed by the imaginary pair i(E_rs - E_sr)/sqrt(2).
    """
    out = np.zeros((p * p, p, p), dtype=complex)
    k = 0
    for r in range(p):
        out[k, r, r] = 1.0
        k += 1
    inv = 1.0 / np.sqrt(2.0)
    for r in range(p):
        for t in range(r + 1, p):
            out[k, r, t] = inv
            out[k, t, r] = inv
            k += 1
            out[k, r, t] = 1j * inv
            out[k, t, r] = -1j * inv
            k += 1
    return out

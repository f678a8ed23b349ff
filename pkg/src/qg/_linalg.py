"""Dense linear algebra helpers used across the package.

Everything is plain numpy on complex128. Operators are 2d arrays, states are
1d arrays, and tensor legs follow the row-major kron convention, so the index
of e_{i} (x) e_{j} in C^{d1} (x) C^{d2} is i*d2 + j.
"""

import numpy as np

from .errors import NotPositive, ShapeMismatch, SpanNotClosed


def rng(seed=0):
    return np.random.default_rng(seed)


def dagger(m):
    return np.conj(np.asarray(m)).T


def norm_inf(m):
    """Operator (spectral) norm."""
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def herm(m):
    return 0.5 * (m + dagger(m))


def random_complex(shape, seed=0, scale=1.0):
    g = rng(seed)
    return scale * (g.standard_normal(shape) + 1j * g.standard_normal(shape))


def swap_matrix(d1, d2):
    """Sigma: C^{d1} (x) C^{d2} -> C^{d2} (x) C^{d1}, xi (x) eta -> eta (x) xi."""
    s = np.zeros((d2 * d1, d1 * d2))
    for i in range(d1):
        for j in range(d2):
            s[j * d1 + i, i * d2 + j] = 1.0
    return s


def embed(op, dims, legs):
    """Embed `op`, acting on the tensor factors listed in `legs`, into the
    full product of `dims` as identity on the remaining legs."""
    dims = list(dims)
    n = len(dims)
    legs = list(legs)
    dl = [dims[l] for l in legs]
    t = np.asarray(op, dtype=complex).reshape(dl + dl)
    out_idx = list(range(n))
    in_idx = list(range(n, 2 * n))
    args = [t, [out_idx[l] for l in legs] + [in_idx[l] for l in legs]]
    for m in range(n):
        if m not in legs:
            args.append(np.eye(dims[m], dtype=complex))
            args.append([out_idx[m], in_idx[m]])
    full = np.einsum(*args, out_idx + in_idx)
    big = int(np.prod(dims))
    return full.reshape(big, big)


def nullspace(a, tol=1e-10):
    """Orthonormal basis (columns) of the nullspace of a, by SVD."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    if a.shape[0] == 0:
        return np.eye(a.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(a)
    nnz = int(np.sum(s > tol * max(1.0, s[0] if len(s) else 1.0)))
    return dagger(vh)[:, nnz:]


def expand_in_span(mats, target, tol=1e-8, what="target"):
    """Least-squares expansion of `target` in the linear span of `mats`.

    Returns the coefficient vector; raises SpanNotClosed when the residual
    exceeds tol (relative to the target size).
    """
    cols = np.stack([np.asarray(m, dtype=complex).reshape(-1) for m in mats], axis=1)
    t = np.asarray(target, dtype=complex).reshape(-1)
    coeff, _, _, _ = np.linalg.lstsq(cols, t, rcond=None)
    res = np.linalg.norm(cols @ coeff - t)
    scale = max(1.0, np.linalg.norm(t))
    if res > tol * scale:
        raise SpanNotClosed(f"{what} lies outside the span, residual {res:.3e}")
    return coeff


def in_span(mats, target, tol=1e-8):
    try:
        expand_in_span(mats, target, tol=tol)
        return True
    except SpanNotClosed:
        return False


def span_residual(mats, target):
    cols = np.stack([np.asarray(m, dtype=complex).reshape(-1) for m in mats], axis=1)
    t = np.asarray(target, dtype=complex).reshape(-1)
    coeff, _, _, _ = np.linalg.lstsq(cols, t, rcond=None)
    return float(np.linalg.norm(cols @ coeff - t))


def orthonormal_span(mats, tol=1e-10):
    """Orthonormal basis (as matrices) of the span of `mats`, via SVD on the
    vectorized stack. Drops numerically dependent directions."""
    shape = np.asarray(mats[0]).shape
    stack = np.stack([np.asarray(m, dtype=complex).reshape(-1) for m in mats])
    u, s, vh = np.linalg.svd(stack, full_matrices=False)
    keep = s > tol * max(1.0, s[0])
    return [vh[i].reshape(shape) for i in range(len(s)) if keep[i]]


def gram_cholesky(g, tol=1e-12):
    """Cholesky factor of a positive definite Gram matrix, pivoting in input
    order (the basis is processed as given). Raises NotPositive when a pivot
    drops below tol, since every state we factor is expected faithful."""
    g = np.asarray(g, dtype=complex)
    n = g.shape[0]
    if g.shape != (n, n):
        raise ShapeMismatch(f"gram matrix must be square, got {g.shape}")
    if norm_inf(g - dagger(g)) > 1e-10 * max(1.0, norm_inf(g)):
        raise NotPositive("gram matrix is not hermitian")
    l = np.zeros((n, n), dtype=complex)
    for j in range(n):
        d = g[j, j].real - np.sum(np.abs(l[j, :j]) ** 2)
        if d < tol * max(1.0, abs(g[j, j].real)):
            raise NotPositive(f"gram pivot {j} is {d:.3e}; state not faithful on this basis")
        l[j, j] = np.sqrt(d)
        for i in range(j + 1, n):
            l[i, j] = (g[i, j].conj() - np.vdot(l[j, :j], l[i, :j]).conj()) / l[j, j]
    # convention: g = l @ l^dagger with l lower triangular
    assert norm_inf(l @ dagger(l) - g) < 1e-9 * max(1.0, norm_inf(g))
    return l


def commutant_basis(ops, dim, tol=1e-10):
    """Orthonormal basis of {x in B(C^dim) : [x, op] = 0 for all ops}."""
    eye = np.eye(dim, dtype=complex)
    rows = []
    for op in ops:
        op = np.asarray(op, dtype=complex)
        rows.append(np.kron(op, eye) - np.kron(eye, op.T))
    mat = np.concatenate(rows, axis=0)
    ns = nullspace(mat, tol=tol)
    return [ns[:, k].reshape(dim, dim) for k in range(ns.shape[1])]


def _eig_clusters(vals, tol=1e-7):
    order = np.argsort(vals)
    clusters = [[order[0]]]
    for idx in order[1:]:
        if vals[idx] - vals[clusters[-1][-1]] < tol:
            clusters[-1].append(idx)
        else:
            clusters.append([idx])
    return clusters


def wedderburn(basis_ops, tol=1e-8, seed=7):
    """Decompose the *-algebra spanned by basis_ops (unital, *-closed subalgebra
    of B(H)) into matrix blocks.

    Returns a list of dicts, one per central block, with keys
      projection : central minimal projection (matrix on H)
      dim        : size d of the block M_d
      mult       : multiplicity of the block in H
      units      : d x d nested list of matrix units e_ij as operators on H
    sorted by (dim, trace of projection).
    """
    basis_ops = [np.asarray(b, dtype=complex) for b in basis_ops]
    dim_h = basis_ops[0].shape[0]
    span = orthonormal_span(basis_ops)
    # center: x in span with [x, b] = 0 for all b
    rows = []
    for b in basis_ops:
        blk = np.stack([(s @ b - b @ s).reshape(-1) for s in span], axis=1)
        rows.append(blk)
    coeffs = nullspace(np.concatenate(rows, axis=0), tol=tol)
    center = [sum(coeffs[k, j] * span[k] for k in range(len(span)))
              for j in range(coeffs.shape[1])]
    n_blocks = len(center)
    g = rng(seed)

    def generic_split(ops, want, drop_kernel):
        # draw self-adjoint generic combinations until the nonzero spectrum
        # splits into `want` clusters
        for _ in range(25):
            z = sum((g.standard_normal() + 1j * g.standard_normal()) * c for c in ops)
            z = z + dagger(z)
            vals, vecs = np.linalg.eigh(z)
            if drop_kernel:
                keep = np.abs(vals) > 1e-6
                vals, vecs = vals[keep], vecs[:, keep]
            if vals.size == 0:
                continue
            cl = _eig_clusters(vals)
            if len(cl) == want:
                return vecs, cl
        raise AssertionError("generic element failed to separate blocks")

    vecs, clusters = generic_split(center, n_blocks, drop_kernel=False)
    blocks = []
    for cl in clusters:
        p = vecs[:, cl] @ dagger(vecs[:, cl])
        expand_in_span(span, p, tol=1e-7, what="central projection")
        corner = orthonormal_span([p @ s @ p for s in span])
        d2 = len(corner)
        d = int(round(np.sqrt(d2)))
        assert d * d == d2, f"corner dimension {d2} is not a square"
        mult = int(round(np.trace(p).real)) // d
        assert d * mult == int(round(np.trace(p).real))
        blocks.append({"projection": p, "dim": d, "mult": mult, "corner": corner})
    for blk in blocks:
        p, d, mult, corner = blk["projection"], blk["dim"], blk["mult"], blk["corner"]
        sub_vecs, sub_clusters = generic_split(corner, d, drop_kernel=True)
        qs = [sub_vecs[:, cl] @ dagger(sub_vecs[:, cl]) for cl in sub_clusters]
        units = [[None] * d for _ in range(d)]
        units[0][0] = qs[0]
        for j in range(1, d):
            wgt = None
            for c in corner:
                cand = qs[0] @ c @ qs[j]
                if np.linalg.norm(cand) > tol:
                    wgt = cand
                    break
            assert wgt is not None, "empty corner between minimal projections"
            scale = np.sqrt(np.trace(dagger(wgt) @ wgt).real / mult)
            units[0][j] = wgt / scale
        for i in range(1, d):
            for j in range(d):
                units[i][j] = dagger(units[0][i]) @ units[0][j]
        total = sum(units[i][i] for i in range(d))
        assert norm_inf(total - p) < 1e-7, "matrix units do not sum to the block projection"
        for i in range(d):
            for j in range(d):
                assert norm_inf(dagger(units[i][j]) - units[j][i]) < 1e-7
                for k in range(d):
                    for l in range(d):
                        prod = units[i][j] @ units[k][l]
                        want = units[i][l] if j == k else np.zeros_like(prod)
                        assert norm_inf(prod - want) < 1e-7
        blk["units"] = units
        del blk["corner"]
    blocks.sort(key=lambda b: (b["dim"], round(np.trace(b["projection"]).real)))
    return blocks


def block_coords(blocks, x):
    """Coordinates of x in the matrix-unit basis: list of d x d matrices."""
    out = []
    for blk in blocks:
        d, mult, units = blk["dim"], blk["mult"], blk["units"]
        m = np.zeros((d, d), dtype=complex)
        for i in range(d):
            for j in range(d):
                m[i, j] = np.trace(units[j][i] @ np.asarray(x, dtype=complex)) / mult
        out.append(m)
    return out


def block_assemble(blocks, coords):
    x = np.zeros_like(np.asarray(blocks[0]["projection"], dtype=complex))
    for blk, m in zip(blocks, coords):
        d, units = blk["dim"], blk["units"]
        for i in range(d):
            for j in range(d):
                x = x + m[i, j] * units[i][j]
    return x

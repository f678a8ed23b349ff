"""Multiplier calculus on irreducible-corepresentation tables.

A discrete quantum group is described here by counting data only: labels for
the irreducible corepresentations of the compact dual, their dimensions, the
positive diagonal matrices rho_alpha that drive the scaling and modular
groups, the conjugation involution on labels, and optionally fusion
multiplicities N^gamma_{alpha beta} and conjugation intertwiners T_alpha
with bar(U^alpha) = T_alpha U^{bar alpha} T_alpha^{-1}.

Two kinds of elements:

  FinSupp     finitely supported block matrix a = (a^alpha), an element of
              the direct sum of matrix algebras (the function side).
  PolElement  finitely supported coefficient array c = (c^alpha), standing
              for sum_{ij} c^alpha_{ij} U^alpha_{ij} (the coefficient side).

The left multiplier of a acts on coefficients by

    Theta^l(a)(U^alpha_{ij}) = sum_k a^alpha_{ik} U^alpha_{kj},

so block alpha of the output is (a^alpha)^T c^alpha.  The antipode on the
function side is S(a)^alpha = T_{bar alpha}^{-1} (a^{bar alpha})^T T_{bar alpha}
and its inverse is S^{-1}(a)^alpha = (T_alpha a^{bar alpha} T_alpha^{-1})^T;
both reduce to a label swap on central elements, and on Kac tables the two
coincide.  The orientation of S on non-central blocks is the one that makes
Theta^l(S(a*)) the conjugate map x -> Theta^l(a)(x*)* exactly, blockwise,
which is the only coordinate-free handle on it; with this choice
S^2 = Ad(rho^{-1}).  The scaling group acts on
coefficients by the phases rho_i^{it} rho_j^{-it} and on blocks by
rho^{-it} a rho^{it} (the relative sign is pinned by the covariance
Theta^l(tau_t(a)) = tau_t Theta^l(a) tau_{-t}, tested below).  The modular
group of the Haar state multiplies coefficients by rho_i^{it} rho_j^{it}.

Everything is exact linear algebra on the supplied finite supports.  When a
table is a finite window of an infinite theory (truncated=True), operations
that would need labels outside the window raise TruncationTooSmall instead
of silently dropping mass.
"""

import numpy as np

from .errors import (AxiomViolation, DegenerateUnitCoefficient,
                     InconsistentAntipode, KmsViolation, MissingConjugationData,
                     MissingFusionData, NotASubcategory, ShapeMismatch,
                     TruncationTooSmall)


class IrrTable:
    """Counting data for the irreducible corepresentations of a compact dual.

    labels[0] is the trivial corepresentation.  rho maps each label to the
    diagonal of the positive matrix rho_alpha (Kac tables have all ones).
    fusion, when present, is a dict (alpha, beta, gamma) -> N^gamma_{alpha beta}
    with omitted triples read as zero.  conj_intertwiners, when present, maps
    labels to the invertible T_alpha; consistency with rho is enforced through
    the antipode-squared relation (T_alpha^{-1})^T T_{bar alpha} = c rho_alpha.
    """

    def __init__(self, labels, dims, rho, conj, fusion=None,
                 conj_intertwiners=None, name="", truncated=False, tol=1e-10):
        self.labels = list(labels)
        if not self.labels:
            raise AxiomViolation("table has no labels")
        if len(set(self.labels)) != len(self.labels):
            raise AxiomViolation("duplicate labels")
        self.unit = self.labels[0]
        self.name = name
        self.truncated = bool(truncated)
        self.dims = {}
        for a in self.labels:
            d = int(dims[a])
            if d <= 0:
                raise AxiomViolation(f"dim({a!r}) = {d} must be positive")
            self.dims[a] = d
        if self.dims[self.unit] != 1:
            raise AxiomViolation("trivial label must have dimension 1")
        self.rho = {}
        for a in self.labels:
            v = np.asarray(rho[a], dtype=float).reshape(-1)
            if v.shape != (self.dims[a],):
                raise ShapeMismatch(f"rho({a!r}) has length {v.shape[0]}, "
                                    f"expected {self.dims[a]}")
            if np.any(v <= 0):
                raise AxiomViolation(f"rho({a!r}) must be positive")
            self.rho[a] = v
            # quantum dimension is well defined only when Tr rho = Tr rho^-1
            gap = abs(v.sum() - (1.0 / v).sum())
            if gap > tol * max(1.0, v.sum()):
                raise AxiomViolation(
                    f"rho({a!r}) trace {v.sum():.6g} differs from inverse "
                    f"trace {(1.0 / v).sum():.6g}")
        if abs(self.rho[self.unit][0] - 1.0) > tol:
            raise AxiomViolation("rho at the trivial label must be 1")
        self.conj = dict(conj)
        for a in self.labels:
            ab = self.conj.get(a)
            if ab not in self.dims:
                raise AxiomViolation(f"conj({a!r}) missing or unknown")
            if self.conj.get(ab) != a:
                raise AxiomViolation(f"conj is not an involution at {a!r}")
            if self.dims[ab] != self.dims[a]:
                raise AxiomViolation(f"dim(conj({a!r})) != dim({a!r})")
        if self.conj[self.unit] != self.unit:
            raise AxiomViolation("conj must fix the trivial label")
        self.fusion = None
        if fusion is not None:
            self.fusion = {}
            for (a, b, g), n in fusion.items():
                n = int(n)
                if n < 0:
                    raise AxiomViolation(f"N^{g!r}_{{{a!r},{b!r}}} = {n} < 0")
                if n:
                    self.fusion[(a, b, g)] = n
            self._check_fusion(tol)
        self.intertwiners = None
        if conj_intertwiners is not None:
            self.intertwiners = {a: np.asarray(t, dtype=complex)
                                 for a, t in conj_intertwiners.items()}
            self._check_intertwiners(tol)

    def _check_fusion(self, tol):
        for b in self.labels:
            for g in self.labels:
                want = 1 if b == g else 0
                if self.fusion_n(self.unit, b, g) != want:
                    raise AxiomViolation(f"unit fusion law fails at ({b!r},{g!r})")
        for a in self.labels:
            for b in self.labels:
                for g in self.labels:
                    if self.fusion_n(a, b, g) != self.fusion_n(self.conj[a], g, b):
                        raise AxiomViolation(
                            f"Frobenius reciprocity fails at ({a!r},{b!r},{g!r})")
        for a in self.labels:
            for b in self.labels:
                mass = sum(self.fusion_n(a, b, g) * self.dims[g]
                           for g in self.labels)
                want = self.dims[a] * self.dims[b]
                if mass > want or (mass != want and not self.truncated):
                    raise AxiomViolation(
                        f"fusion mass {mass} at ({a!r},{b!r}) vs dim product "
                        f"{want}")

    def _check_intertwiners(self, tol):
        for a in list(self.intertwiners):
            if self.conj[a] not in self.intertwiners:
                raise MissingConjugationData(
                    f"intertwiner for conj({a!r}) = {self.conj[a]!r} missing")
            t = self.intertwiners[a]
            d = self.dims[a]
            if t.shape != (d, d):
                raise ShapeMismatch(f"T({a!r}) has shape {t.shape}")
            if np.linalg.matrix_rank(t) < d:
                raise InconsistentAntipode(f"T({a!r}) is singular")
            # S^2 = Ad(rho^-1) forces (T_a^{-1})^T T_{bar a} proportional to rho_a
            m = np.linalg.inv(t).T @ self.intertwiners[self.conj[a]]
            scale = m[0, 0] / self.rho[a][0]
            if abs(scale) < tol:
                raise InconsistentAntipode(f"T({a!r}) consistency scalar vanishes")
            gap = np.abs(m - scale * np.diag(self.rho[a])).max()
            if gap > 1e-8 * max(1.0, abs(scale)):
                raise InconsistentAntipode(
                    f"(T^-1)^T T_bar at {a!r} is not proportional to rho, "
                    f"gap {gap:.3e}")
            # involutivity of the coefficient star forces conj(T_a) T_bar a
            # to be a scalar
            s = np.conj(t) @ self.intertwiners[self.conj[a]]
            gap = np.abs(s - s[0, 0] * np.eye(d)).max()
            if abs(s[0, 0]) < tol or gap > 1e-8 * max(1.0, abs(s[0, 0])):
                raise InconsistentAntipode(
                    f"conj(T) T_bar at {a!r} is not scalar, gap {gap:.3e}")

    def dim_q(self, a):
        return float(self.rho[a].sum())

    def is_kac(self, tol=1e-12):
        return all(np.abs(self.rho[a] - 1.0).max() <= tol for a in self.labels)

    def fusion_n(self, a, b, g):
        if self.fusion is None:
            raise MissingFusionData(f"table {self.name!r} carries no fusion data")
        return self.fusion.get((a, b, g), 0)

    def intertwiner(self, a):
        if self.intertwiners is None or a not in self.intertwiners:
            raise MissingConjugationData(
                f"no conjugation intertwiner for label {a!r}")
        return self.intertwiners[a]

    def order(self, labels):
        marked = set(labels)
        return tuple(a for a in self.labels if a in marked)

    def __repr__(self):
        kind = "truncated window" if self.truncated else "table"
        return f"IrrTable({self.name or len(self.labels)}, {kind})"


class _Blocks:
    kind = "blocks"

    def __init__(self, table, blocks):
        self.table = table
        self.blocks = {}
        for a, m in blocks.items():
            if a not in table.dims:
                raise ShapeMismatch(f"unknown label {a!r}")
            m = np.asarray(m, dtype=complex)
            d = table.dims[a]
            if m.shape != (d, d):
                raise ShapeMismatch(
                    f"block at {a!r} has shape {m.shape}, expected {(d, d)}")
            self.blocks[a] = m

    def block(self, a):
        if a in self.blocks:
            return self.blocks[a]
        d = self.table.dims[a]
        return np.zeros((d, d), dtype=complex)

    @property
    def support(self):
        return self.table.order(self.blocks)

    def add(self, other):
        out = {a: self.block(a) + other.block(a)
               for a in set(self.blocks) | set(other.blocks)}
        return type(self)(self.table, out)

    def sub(self, other):
        return self.add(other.scale(-1.0))

    def scale(self, z):
        return type(self)(self.table, {a: z * m for a, m in self.blocks.items()})

    def norm_inf(self):
        if not self.blocks:
            return 0.0
        return max(np.linalg.norm(m, 2) for m in self.blocks.values())

    def distance(self, other):
        return self.sub(other).norm_inf()


class FinSupp(_Blocks):
    """Finitely supported element of the block algebra sum_alpha M_dim(alpha)."""

    kind = "finsupp"

    def mul(self, other):
        out = {a: self.blocks[a] @ other.blocks[a]
               for a in set(self.blocks) & set(other.blocks)}
        return FinSupp(self.table, out)

    def star(self):
        return FinSupp(self.table,
                       {a: m.conj().T for a, m in self.blocks.items()})

    def is_central(self, tol=1e-10):
        for a, m in self.blocks.items():
            d = self.table.dims[a]
            c = np.trace(m) / d
            if np.abs(m - c * np.eye(d)).max() > tol * max(1.0, abs(c)):
                return False
        return True

    def central_values(self):
        return {a: complex(np.trace(m) / self.table.dims[a])
                for a, m in self.blocks.items()}


class PolElement(_Blocks):
    """Finitely supported coefficient array for sum c^alpha_{ij} U^alpha_{ij}."""

    kind = "pol"


def finsupp_unit_blocks(table, labels):
    """The central projection p_F onto a finite label set."""
    return FinSupp(table, {a: np.eye(table.dims[a]) for a in labels})


def finsupp_central(table, values):
    return FinSupp(table, {a: c * np.eye(table.dims[a])
                           for a, c in values.items()})


def finsupp_matrix_unit(table, a, i, j):
    m = np.zeros((table.dims[a], table.dims[a]), dtype=complex)
    m[i, j] = 1.0
    return FinSupp(table, {a: m})


def counit_functional(table):
    """Evaluation at the trivial block, as a trace-paired functional."""
    return FinSupp(table, {table.unit: np.ones((1, 1))})


def _same_table(*elements):
    t = elements[0].table
    for e in elements[1:]:
        if e.table is not t:
            raise ShapeMismatch("elements belong to different tables")
    return t


def theta_apply(table, a, x):
    """Coefficient action of the left multiplier Theta^l(a) on x.

    Output block alpha is (a^alpha)^T c^alpha; labels outside support(a)
    are dropped.  The assignment a -> Theta^l(a) is an antihomomorphism for
    the blockwise product: theta_apply(a.mul(b), x) equals
    theta_apply(b, theta_apply(a, x)).
    """
    _same_table(a, x)
    out = {}
    for al in set(a.blocks) & set(x.blocks):
        out[al] = a.blocks[al].T @ x.blocks[al]
    return PolElement(table, out)


def antipode(table, a):
    """S(a)^alpha = T_{bar alpha}^{-1} (a^{bar alpha})^T T_{bar alpha}.

    The orientation (this form rather than its inverse) is what makes
    multiplier_involution satisfy its conjugate-map contract on non-Kac
    tables; both forms agree on Kac tables and on central elements."""
    central = a.is_central()
    out = {}
    for b, m in a.blocks.items():
        al = table.conj[b]
        if central:
            out[al] = m.copy()
        else:
            t = table.intertwiner(b)
            out[al] = np.linalg.inv(t) @ m.T @ t
    return FinSupp(table, out)


def antipode_inv(table, a):
    """S^{-1}(a)^alpha = (T_alpha a^{bar alpha} T_alpha^{-1})^T."""
    central = a.is_central()
    out = {}
    for b, m in a.blocks.items():
        al = table.conj[b]
        if central:
            out[al] = m.copy()
        else:
            t = table.intertwiner(al)
            out[al] = (t @ m @ np.linalg.inv(t)).T
    return FinSupp(table, out)


def l2_implement(table, a):
    """The operator implementing Theta^l(a) on the GNS space, namely S^{-1}(a).

    For central a = sum c_alpha p_alpha this is sum c_alpha p_{bar alpha};
    in general it needs the conjugation intertwiners.
    """
    return antipode_inv(table, a)


def multiplier_involution(table, a):
    """a-sharp = S(a*); theta_apply(a_sharp, x) = theta_apply(a, x*)*."""
    return antipode(table, a.star())


def pol_star(table, x):
    """Coefficient star: (x*)^{bar alpha} = T_alpha^T conj(c^alpha) (T_alpha^{-1})^T.

    Involutive because conj(T) T_bar is scalar (checked at table build)."""
    out = {}
    for al, m in x.blocks.items():
        t = table.intertwiner(al)
        out[table.conj[al]] = t.T @ np.conj(m) @ np.linalg.inv(t).T
    return PolElement(table, out)


def _rho_phase(v, z):
    return np.power(np.asarray(v, dtype=complex), z)


def scaling_modular_action(table, t, target, which="tau"):
    """Scaling group tau and modular groups of the Haar weights.

    On coefficients: tau multiplies c_{ij} by rho_i^{it} rho_j^{-it},
    sigma_phi by rho_i^{it} rho_j^{it}, sigma_psi by rho_i^{-it} rho_j^{-it}.
    On blocks the maps are the conjugations Ad(rho^{-it}), Ad(rho^{it}) and
    Ad(rho^{-it}): tau on blocks carries the opposite exponent so that
    Theta^l(tau_t(a)) = tau_t Theta^l(a) tau_{-t} holds on coefficients.
    Complex t is allowed (analytic continuation; rho > 0)."""
    if which not in ("tau", "sigma_phi", "sigma_psi"):
        raise ShapeMismatch(f"unknown one-parameter group {which!r}")
    out = {}
    if target.kind == "pol":
        for a, m in target.blocks.items():
            r = table.rho[a]
            if which == "tau":
                left, right = _rho_phase(r, 1j * t), _rho_phase(r, -1j * t)
            elif which == "sigma_phi":
                left, right = _rho_phase(r, 1j * t), _rho_phase(r, 1j * t)
            else:
                left, right = _rho_phase(r, -1j * t), _rho_phase(r, -1j * t)
            out[a] = left[:, None] * m * right[None, :]
        return PolElement(table, out)
    for a, m in target.blocks.items():
        r = table.rho[a]
        if which == "sigma_phi":
            u, uinv = _rho_phase(r, 1j * t), _rho_phase(r, -1j * t)
        else:
            u, uinv = _rho_phase(r, -1j * t), _rho_phase(r, 1j * t)
        out[a] = u[:, None] * m * uinv[None, :]
    return FinSupp(table, out)


def tau_fixed_part(table, a):
    """Exact average over the scaling group: kill entries with rho_i != rho_j.

    Each entry moves by a single phase under tau, so the mean over t of
    tau_t(a) is entrywise either the entry itself or zero."""
    out = {}
    for al, m in a.blocks.items():
        r = table.rho[al]
        mask = np.isclose(r[:, None], r[None, :], rtol=1e-9, atol=0.0)
        out[al] = np.where(mask, m, 0.0)
    return FinSupp(table, out)


def symmetrize_ap_net(table, a, tol=1e-12):
    """Make a multiplier scaling-invariant, star-preserving and unital.

    Pipeline: project onto the tau-fixed part, average with S(b*) (well
    defined there since S^2 is trivial on tau-fixed entries), then rescale so
    the trivial-block entry is 1, which makes Theta^l(out) unital and Haar
    preserving.  Raises DegenerateUnitCoefficient when the trivial-block
    coefficient vanishes after symmetrization."""
    b = tau_fixed_part(table, a)
    c = b.add(antipode(table, b.star())).scale(0.5)
    alpha = complex(c.block(table.unit)[0, 0])
    # the e-entry of c is (z + conj z)/2, so real
    if abs(alpha) <= tol:
        raise DegenerateUnitCoefficient(
            "trivial-block coefficient vanishes after symmetrization")
    return c.scale(1.0 / alpha.real)


def central_average(table, a):
    """Blockwise normalized trace: A(a)^alpha = (Tr a^alpha / dim alpha) 1."""
    return FinSupp(table, {al: (np.trace(m) / table.dims[al]) * np.eye(table.dims[al])
                           for al, m in a.blocks.items()})


def subgroup_expectation(table, sub, x):
    """Zero all coefficient blocks with label outside sub.

    sub must contain the trivial label, be conjugation closed, and be fusion
    closed when fusion data is present; these are the conditions for the cut
    to be the conditional expectation onto a quantum subgroup's coefficient
    algebra."""
    sub = set(sub)
    unknown = sub - set(table.labels)
    if unknown:
        raise NotASubcategory(f"labels {sorted(map(repr, unknown))} not in table")
    if table.unit not in sub:
        raise NotASubcategory("sub must contain the trivial label")
    for a in sub:
        if table.conj[a] not in sub:
            raise NotASubcategory(f"sub is not conjugation closed at {a!r}")
    if table.fusion is not None:
        for a in sub:
            for b in sub:
                for g in table.labels:
                    if g not in sub and table.fusion_n(a, b, g):
                        raise NotASubcategory(
                            f"fusion leaks out of sub at ({a!r},{b!r}) -> {g!r}")
    return PolElement(table, {a: m for a, m in x.blocks.items() if a in sub})


def module_action(table, a, omega):
    """a * omega = (omega (x) id) Delta(a), blockwise from fusion counts.

    omega is a finitely supported functional, stored as blocks and paired by
    the plain trace.  Counting data suffices when a and omega are central
    (each block a scalar); the label-gamma isotypic projection in
    H_alpha (x) H_beta has partial trace N^gamma_{alpha beta} dim(gamma)/dim(beta)
    over the first leg.  Tables with all dimensions 1 (group duals) are
    automatically central, where the formula is plain convolution:
    (a * omega)(g) = sum_h omega(h) a(hg).
    """
    _same_table(a, omega)
    if set(omega.blocks) <= {table.unit}:
        # (eps (x) id) Delta = id needs no fusion data
        return a.scale(complex(omega.block(table.unit)[0, 0]))
    if table.fusion is None:
        raise MissingFusionData("module action needs fusion multiplicities")
    if not (a.is_central() and omega.is_central()):
        raise MissingFusionData(
            "non-central module action needs intertwiner data beyond "
            "fusion counts")
    avals = a.central_values()
    wvals = omega.central_values()
    out = {}
    for al, w in wvals.items():
        for g, c in avals.items():
            mass = sum(table.fusion_n(al, b, g) * table.dims[b]
                       for b in table.labels)
            want = table.dims[al] * table.dims[g]
            if mass > want:
                raise AxiomViolation(
                    f"fusion mass at ({al!r},{g!r}) exceeds dim product")
            if mass < want:
                raise TruncationTooSmall(
                    f"decomposition of bar({al!r}) (x) {g!r} leaves the window")
            for b in table.labels:
                n = table.fusion_n(al, b, g)
                if n == 0:
                    continue
                val = w * c * n * table.dims[g] / table.dims[b]
                out[b] = out.get(b, 0.0) + val
    return finsupp_central(table, out)


def haar_pair(x):
    """Haar integral of a coefficient element: the trivial-block entry."""
    return complex(x.block(x.table.unit)[0, 0])


def schur_index(table, support):
    """Row order (alpha, i, j) used by schur_gram, in table label order."""
    rows = []
    for a in table.order(support):
        d = table.dims[a]
        rows.extend((a, i, j) for i in range(d) for j in range(d))
    return rows


def schur_gram(table, support):
    """Gram matrix of the GNS vectors of the coefficients U^alpha_{ij}.

    Orthogonality gives h((U^alpha_{ij})* U^beta_{kl}) =
    delta delta delta (rho_alpha^{-1})_i / dim_q(alpha); the placement of
    rho^{-1} on the row index is forced by the KMS identity
    h(x y) = h(y sigma_{-i}(x)) together with unitarity of the
    corepresentations, both of which are rechecked here."""
    rows = schur_index(table, support)
    diag = []
    for a, i, j in rows:
        diag.append((1.0 / table.rho[a][i]) / table.dim_q(a))
    for a in table.order(support):
        r, dq = table.rho[a], table.dim_q(a)
        # row sums h(u u*) and column sums h(u* u) must both give h(1) = 1
        if abs(r.sum() / dq - 1.0) > 1e-9 or abs((1.0 / r).sum() / dq - 1.0) > 1e-9:
            raise KmsViolation(f"unitarity row/column sums fail at {a!r}")
        for i in range(table.dims[a]):
            for j in range(table.dims[a]):
                direct = r[j] / dq
                via_kms = r[i] * r[j] * ((1.0 / r[i]) / dq)
                if abs(direct - via_kms) > 1e-12 * max(1.0, abs(direct)):
                    raise KmsViolation(f"KMS identity fails at {a!r}[{i},{j}]")
    return np.diag(np.array(diag, dtype=float))


def group_table(mult_table, name=""):
    """Dual of a finite group G: labels are group elements, all dims 1."""
    table = [list(map(int, row)) for row in mult_table]
    n = len(table)
    for i in range(n):
        if table[0][i] != i or table[i][0] != i:
            raise AxiomViolation("index 0 must be the group identity")
    inv = {}
    for i in range(n):
        js = [j for j in range(n) if table[i][j] == 0]
        if len(js) != 1:
            raise AxiomViolation(f"element {i} has no unique inverse")
        inv[i] = js[0]
    labels = list(range(n))
    fusion = {(i, j, table[i][j]): 1 for i in range(n) for j in range(n)}
    return IrrTable(labels, {i: 1 for i in labels}, {i: [1.0] for i in labels},
                    inv, fusion=fusion,
                    conj_intertwiners={i: np.eye(1) for i in labels},
                    name=name or f"group({n})")


def rep_z2_table():
    from .hopf import cyclic_table
    return group_table(cyclic_table(2), name="Rep(Z2)")


def rep_s3_table():
    """Character data of S3: trivial, sign, and the 2-dim representation."""
    labels = ["triv", "sgn", "std"]
    dims = {"triv": 1, "sgn": 1, "std": 2}
    rho = {"triv": [1.0], "sgn": [1.0], "std": [1.0, 1.0]}
    conj = {a: a for a in labels}
    fusion = {}
    for a in labels:
        fusion[("triv", a, a)] = 1
        fusion[(a, "triv", a)] = 1
    fusion[("sgn", "sgn", "triv")] = 1
    fusion[("sgn", "std", "std")] = 1
    fusion[("std", "sgn", "std")] = 1
    fusion[("std", "std", "triv")] = 1
    fusion[("std", "std", "sgn")] = 1
    fusion[("std", "std", "std")] = 1
    tees = {a: np.eye(dims[a]) for a in labels}
    return IrrTable(labels, dims, rho, conj, fusion=fusion,
                    conj_intertwiners=tees, name="Rep(S3)")


def suq2_table(q, max_label):
    """Window 0..max_label of the SU_q(2) dual, 0 < q <= 1.

    Label n has dimension n+1, rho_n = diag(q^{-n}, q^{-n+2}, ..., q^n),
    quantum dimension [n+1]_q, and the antidiagonal conjugation intertwiner
    (T_n)_{k, n-k} = (-1)^k q^{-k}.  Fusion inside the window follows the
    Clebsch-Gordan rule N^k_{ij} = 1 for |i-j| <= k <= i+j with i+j+k even;
    the table is marked truncated, so operations whose fusion mass leaves the
    window raise TruncationTooSmall."""
    if not (0 < q <= 1):
        raise AxiomViolation(f"q = {q} outside (0, 1]")
    labels = list(range(max_label + 1))
    dims = {n: n + 1 for n in labels}
    rho = {n: q ** np.arange(-n, n + 1, 2, dtype=float) for n in labels}
    conj = {n: n for n in labels}
    fusion = {}
    for i in labels:
        for j in labels:
            for k in labels:
                if (i + j + k) % 2 == 0 and abs(i - j) <= k <= i + j:
                    fusion[(i, j, k)] = 1
    tees = {}
    for n in labels:
        t = np.zeros((n + 1, n + 1))
        for k in range(n + 1):
            t[k, n - k] = (-1.0) ** k * q ** (-k)
        tees[n] = t
    return IrrTable(labels, dims, rho, conj, fusion=fusion,
                    conj_intertwiners=tees, name=f"SUq2(q={q})",
                    truncated=True)

"""Fusion rings, quantum traces, and multipliers at the categorical level.

The fusion ring of a semisimple rigid tensor category lives on its
irreducible labels: a conjugation, sparse product multiplicities, and one
positive quantum dimension per label.  A categorical multiplier is a scalar
function on the same labels.  This module keeps both as small concrete
containers and wires them to the rest of the toolkit three ways:

  * the quantum-dimension weighted ell^1 pairing mult_pair, which realizes
    finitely supported functions as functionals on multipliers,
  * the unit corner of the tube algebra, modelled as finitely supported
    functions under the fusion convolution, whose trace reproduces the
    pairing for rank-one functionals,
  * central_correspondence, which turns a multiplier into the central
    element of the block algebra acting blockwise by theta(alpha).

Ring construction never validates the axioms; verify_fusion_ring runs every
check and collects violations into a report, so deliberately broken data can
be inspected rather than rejected at the door.
"""

import numpy as np

from .corep import FinSupp, finsupp_central
from .errors import (AxiomViolation, KmsViolation, MissingFusionData,
                     ShapeMismatch)

__all__ = [
    "CatMultiplier", "FusionReport", "FusionRing", "central_correspondence",
    "corner_multiply", "corner_trace", "mult_pair", "perron_dimensions",
    "quantum_trace", "tl_ring", "verify_fusion_ring", "weighted_l1",
]


class FusionRing:
    """Labels with unit, conjugation, multiplicities N, and dimensions dq.

    labels[0] is the unit.  n maps (a, b, g) to the multiplicity of g in
    a x b, with omitted triples read as zero; n may be None when only the
    label data is known, in which case the corner operations refuse to run.
    No axiom is checked here; see verify_fusion_ring.
    """

    def __init__(self, labels, conj, n, dq, name="", truncated=False):
        self.labels = list(labels)
        if not self.labels:
            raise ShapeMismatch("ring has no labels")
        if len(set(self.labels)) != len(self.labels):
            raise ShapeMismatch("duplicate labels")
        self.unit = self.labels[0]
        known = set(self.labels)
        missing = [a for a in self.labels if a not in conj or a not in dq]
        if missing:
            raise ShapeMismatch(f"conj or dq missing at {missing!r}")
        self.conj = {a: conj[a] for a in self.labels}
        self.dq = {a: float(dq[a]) for a in self.labels}
        self.n = None
        if n is not None:
            self.n = {}
            for key, mult in n.items():
                if len(key) != 3 or any(x not in known for x in key):
                    raise ShapeMismatch(f"bad multiplicity key {key!r}")
                self.n[key] = mult
        self.name = name
        self.truncated = bool(truncated)

    @classmethod
    def from_table(cls, table):
        if table.fusion is None:
            raise MissingFusionData(
                f"table {table.name or table!r} carries no fusion data")
        return cls(table.labels, table.conj, dict(table.fusion),
                   {a: table.dim_q(a) for a in table.labels},
                   name=table.name, truncated=table.truncated)

    def mult(self, a, b, g):
        if self.n is None:
            raise MissingFusionData(f"ring {self.name!r} has no multiplicities")
        return self.n.get((a, b, g), 0)

    def product(self, a, b):
        """Expansion of a x b as {label: multiplicity}, zeros omitted."""
        if self.n is None:
            raise MissingFusionData(f"ring {self.name!r} has no multiplicities")
        out = {}
        for (i, j, k), m in self.n.items():
            if i == a and j == b and m:
                out[k] = out.get(k, 0) + m
        return out

    def __repr__(self):
        tag = ", truncated" if self.truncated else ""
        return (f"FusionRing({self.name or 'unnamed'}: "
                f"{len(self.labels)} labels{tag})")


class FusionReport:
    """Outcome of verify_fusion_ring: per-axiom violation entries."""

    def __init__(self, ring, checked, violations):
        self.ring = ring
        self.checked = list(checked)
        self.violations = list(violations)

    @property
    def ok(self):
        return not self.violations

    def by_axiom(self, axiom):
        return [msg for ax, msg in self.violations if ax == axiom]

    def __repr__(self):
        state = "ok" if self.ok else f"{len(self.violations)} violations"
        return f"FusionReport({self.ring.name or 'ring'}: {state})"


def _frobenius_orbit(ring, a, b, g):
    # N^g_{ab} = N^b_{conj(a) g} = N^a_{g conj(b)}
    return [(a, b, g), (ring.conj[a], g, b), (g, ring.conj[b], a)]


def verify_fusion_ring(ring, tol=1e-9):
    """Check every fusion-ring axiom; violations are collected, not raised.

    Exact integer identities (unit law, Frobenius reciprocity,
    associativity) are compared exactly; the dimension identities use tol.
    A truncated ring is a window onto a larger ring, so its dimension
    homomorphism is only required not to overshoot: the windowed mass
    sum_k N^k_{ij} dq(k) may fall short of dq(i) dq(j) but never exceed it.
    """
    bad = []
    checked = ["labels", "conj-involution", "dq-positive", "dq-unit",
               "dq-conj"]
    for a in ring.labels:
        ab = ring.conj[a]
        if ab not in ring.dq:
            bad.append(("conj-involution", f"conj({a!r}) = {ab!r} unknown"))
        elif ring.conj[ab] != a:
            bad.append(("conj-involution", f"conj not involutive at {a!r}"))
    if ring.conj[ring.unit] != ring.unit:
        bad.append(("conj-involution", "conj moves the unit"))
    for a in ring.labels:
        if not ring.dq[a] > 0:
            bad.append(("dq-positive", f"dq({a!r}) = {ring.dq[a]:.6g}"))
    if abs(ring.dq[ring.unit] - 1.0) > tol:
        bad.append(("dq-unit", f"dq(unit) = {ring.dq[ring.unit]:.6g}"))
    for a in ring.labels:
        ab = ring.conj[a]
        if ab in ring.dq and abs(ring.dq[a] - ring.dq[ab]) > tol:
            bad.append(("dq-conj",
                        f"dq({a!r}) = {ring.dq[a]:.6g} differs from "
                        f"dq({ab!r}) = {ring.dq[ab]:.6g}"))
    if ring.n is None:
        bad.append(("multiplicities", "no multiplicity data"))
        return FusionReport(ring, checked + ["multiplicities"], bad)

    checked += ["multiplicities", "unit", "frobenius", "associativity",
                "dq-homomorphism"]
    for key, m in ring.n.items():
        if m != int(m) or m < 0:
            bad.append(("multiplicities", f"N{key!r} = {m!r}"))
    for b in ring.labels:
        for g in ring.labels:
            want = 1 if b == g else 0
            if ring.mult(ring.unit, b, g) != want:
                bad.append(("unit", f"N^{g!r}_{{unit,{b!r}}} = "
                            f"{ring.mult(ring.unit, b, g)}, want {want}"))
            if ring.mult(b, ring.unit, g) != want:
                bad.append(("unit", f"N^{g!r}_{{{b!r},unit}} = "
                            f"{ring.mult(b, ring.unit, g)}, want {want}"))
    seen = set()
    for (a, b, g) in list(ring.n):
        orbit = _frobenius_orbit(ring, a, b, g)
        if orbit[0] in seen:
            continue
        seen.update(orbit)
        vals = [ring.mult(*key) for key in orbit]
        if len(set(vals)) != 1:
            bad.append(("frobenius",
                        f"orbit of N^{g!r}_{{{a!r},{b!r}}} takes values "
                        f"{vals}"))
    for a in ring.labels:
        for b in ring.labels:
            ab = ring.product(a, b)
            for c in ring.labels:
                for g in ring.labels:
                    left = sum(m * ring.mult(k, c, g) for k, m in ab.items())
                    right = sum(ring.mult(b, c, k) * ring.mult(a, k, g)
                                for k in ring.labels)
                    if left != right:
                        bad.append((
                            "associativity",
                            f"(({a!r} {b!r}) {c!r} | {g!r}) = {left} but "
                            f"({a!r} ({b!r} {c!r}) | {g!r}) = {right}"))
    for a in ring.labels:
        for b in ring.labels:
            mass = sum(m * ring.dq[k] for k, m in ring.product(a, b).items())
            want = ring.dq[a] * ring.dq[b]
            scale = tol * max(1.0, want)
            if mass > want + scale or (abs(mass - want) > scale
                                       and not ring.truncated):
                bad.append(("dq-homomorphism",
                            f"dq({a!r}) dq({b!r}) = {want:.9g} but the "
                            f"expansion carries {mass:.9g}"))
    return FusionReport(ring, checked, bad)


def perron_dimensions(ring, tol=1e-9):
    """Recompute dq as the Perron eigenvector of the total fusion matrix.

    Row j, column k of the matrix is sum_i N^k_{ij}, which sends the dq
    vector to (sum_i dq(i)) dq.  On an exactly closed ring this matrix is
    irreducible and nonnegative, so the positive eigenvector is unique up
    to scale and normalizing the unit entry to 1 recovers dq.  Truncated
    rings generally recompute to different (root-of-unity type) dimensions.
    """
    if ring.n is None:
        raise MissingFusionData(f"ring {ring.name!r} has no multiplicities")
    idx = {a: t for t, a in enumerate(ring.labels)}
    m = np.zeros((len(ring.labels), len(ring.labels)))
    for (i, j, k), mult in ring.n.items():
        m[idx[j], idx[k]] += mult
    vals, vecs = np.linalg.eig(m)
    v = vecs[:, np.argmax(vals.real)]
    piv = v[idx[ring.unit]]
    if abs(piv) < tol:
        raise AxiomViolation("Perron eigenvector vanishes at the unit")
    v = v / piv
    if np.abs(v.imag).max() > tol or v.real.min() <= 0:
        raise AxiomViolation("leading eigenvector is not positive; the "
                             "fusion matrix is not irreducible nonnegative")
    return {a: float(v[idx[a]].real) for a in ring.labels}


class CatMultiplier:
    """Scalar function on the labels, the data of a categorical multiplier.

    values holds the finite support; truncated flags a window onto an
    infinitely supported function.  cb_upper is optional caller metadata
    and must dominate the sup norm, which is the only inequality between
    the two that holds in general.
    """

    kind = "catmult"

    def __init__(self, values, cb_upper=None, truncated=False, name=""):
        self.values = {a: complex(z) for a, z in values.items()}
        self.truncated = bool(truncated)
        self.name = name
        self.cb_upper = None if cb_upper is None else float(cb_upper)
        if self.cb_upper is not None:
            sup = self.sup_norm()
            if sup > self.cb_upper * (1.0 + 1e-12) + 1e-15:
                raise AxiomViolation(
                    f"sup norm {sup:.9g} exceeds the attached cb bound "
                    f"{self.cb_upper:.9g}")

    def __call__(self, a):
        return self.values.get(a, 0j)

    @property
    def support(self):
        return list(self.values)

    def sup_norm(self):
        if not self.values:
            return 0.0
        return float(max(abs(z) for z in self.values.values()))

    def pointwise(self, other):
        """Pointwise product; composition of the associated multipliers.

        cb bounds multiply when both factors carry one (the space of CB
        multipliers is a Banach algebra) and are dropped otherwise.
        """
        vals = {a: self.values[a] * other.values[a]
                for a in set(self.values) & set(other.values)}
        cb = None
        if self.cb_upper is not None and other.cb_upper is not None:
            cb = self.cb_upper * other.cb_upper
        return CatMultiplier(vals, cb_upper=cb,
                             truncated=self.truncated or other.truncated)

    def __repr__(self):
        bits = [f"{len(self.values)} labels"]
        if self.cb_upper is not None:
            bits.append(f"cb<={self.cb_upper:.6g}")
        if self.truncated:
            bits.append("truncated")
        return f"CatMultiplier({self.name or 'theta'}: {', '.join(bits)})"


def quantum_trace(table, f, tol=1e-9):
    """Blockwise rho-weighted trace {alpha: Tr(rho_alpha f^alpha)}.

    The weight is the positive diagonal of the table, so the trace of an
    identity block is dim_q(alpha).  The balance Tr(rho) = Tr(rho^{-1}) is
    re-checked on every block touched: it is what stands in for a standard
    solution of the conjugate equations in this realization, and with it
    the trace satisfies the twisted trace identity
    Tr_q(f g) = Tr_q((rho^{-1} g rho) f), which collapses to plain
    traciality whenever either argument commutes with rho.
    """
    if not isinstance(f, FinSupp):
        raise ShapeMismatch(f"expected a FinSupp, got {type(f).__name__}")
    if f.table is not table:
        raise ShapeMismatch("element belongs to a different table")
    out = {}
    for a in f.support:
        r = table.rho[a]
        if abs(r.sum() - (1.0 / r).sum()) > tol * max(1.0, r.sum()):
            raise KmsViolation(
                f"rho({a!r}) is unbalanced: trace {r.sum():.9g} vs inverse "
                f"trace {(1.0 / r).sum():.9g}")
        out[a] = complex((r * np.diagonal(f.blocks[a])).sum())
    return out


def weighted_l1(ring, omega):
    """Quantum-dimension weighted ell^1 norm sum_k dq(k) |omega(k)|."""
    _check_supported(ring, omega)
    return float(sum(ring.dq[k] * abs(z) for k, z in omega.items()))


def mult_pair(ring, theta, omega):
    """Predual pairing sum_k dq(k) omega(k) theta(k).

    omega is a finitely supported {label: value} dict; the pairing is
    bilinear and bounded by weighted_l1(omega) * theta.sup_norm().
    """
    _check_supported(ring, omega)
    return complex(sum(ring.dq[k] * z * theta(k)
                       for k, z in omega.items()))


def _check_supported(ring, f):
    for k in f:
        if k not in ring.dq:
            raise ShapeMismatch(f"unknown label {k!r}")


def corner_multiply(ring, f, g):
    """Convolution product on the unit corner of the tube algebra.

    Corner elements are finitely supported functions on the labels; the
    corner is canonically the fusion algebra, so the product expands
    (f g)(k) = sum_{i,j} f(i) g(j) N^k_{ij}.  Exact zeros are dropped.
    """
    _check_supported(ring, f)
    _check_supported(ring, g)
    out = {}
    for i, zi in f.items():
        for j, zj in g.items():
            for k, m in ring.product(i, j).items():
                out[k] = out.get(k, 0j) + zi * zj * m
    return {k: v for k, v in out.items() if v != 0}


def corner_trace(ring, f):
    """Tube trace restricted to the unit corner: the value at the unit.

    The trace kills every component sitting over a nontrivial label and
    weights the unit one by dq(unit) = 1, so on rank-one products it
    reproduces the weighted ell^1 pairing.
    """
    _check_supported(ring, f)
    return complex(f.get(ring.unit, 0.0))


def central_correspondence(table, theta):
    """The central element sum_alpha theta(alpha) p_alpha as a FinSupp.

    theta_apply of the output multiplies the alpha coefficient block of a
    PolElement by theta(alpha) and kills blocks outside the support, so
    the multiplier action of the output is block-scalar.  Labels outside
    the table are rejected unless theta or the table is truncated, in
    which case the values are read through the window.
    """
    vals = {}
    for a, z in theta.values.items():
        if a not in table.dims:
            if theta.truncated or table.truncated:
                continue
            raise ShapeMismatch(f"label {a!r} is not in the table")
        vals[a] = z
    return finsupp_central(table, vals)


def _q_int(q, n):
    # [n]_q = (q^-n - q^n) / (q^-1 - q), read as n at q = 1
    if q == 1.0:
        return float(n)
    return (q ** -n - q ** n) / (q ** -1 - q)


def tl_ring(q, level):
    """Temperley-Lieb fusion on labels 0..level with [n+1]_q dimensions.

    N^k_{ij} = 1 when |i-j| <= k <= min(i+j, 2 level - i - j) and i+j+k is
    even.  These multiplicities close exactly (the ring is associative for
    every level), but for the dimensions [n+1]_q at generic q the window
    edge loses mass: dq(level)^2 expands to dq(0) alone.  The ring is
    therefore marked truncated so its dimension homomorphism is checked
    one-sidedly.
    """
    if not (0 < q <= 1):
        raise AxiomViolation(f"q = {q} outside (0, 1]")
    if level < 0:
        raise ShapeMismatch(f"negative level {level}")
    labels = list(range(level + 1))
    n = {}
    for i in labels:
        for j in labels:
            for k in labels:
                if (i + j + k) % 2 == 0 and abs(i - j) <= k <= min(
                        i + j, 2 * level - i - j):
                    n[(i, j, k)] = 1
    dq = {m: _q_int(q, m + 1) for m in labels}
    return FusionRing(labels, {m: m for m in labels}, n, dq,
                      name=f"TL(q={q}, level={level})", truncated=True)

"""Free products of discrete duals at the counting level.

Irreducibles of a free product are alternating words in the nontrivial
irreducibles of the factors, graded by length.  This module enumerates
the words, fuses them by the junction recursion, and builds the
multipliers used in approximation arguments: the length projections p_d,
tensor-form block maps supported on length-d words, and the series T_n.

CB-norm upper bounds ride along as metadata on the returned elements and
are never asserted as equalities; the only internal oracle is exact
integer dimension bookkeeping of the fusion recursion.
"""

from collections import Counter

import numpy as np

from .cbnorm import multiplier_cb_report
from .corep import FinSupp, IrrTable
from .errors import AxiomViolation, MissingFusionData, ShapeMismatch


class AlternatingWord:
    """Tuple of (factor index, label) letters with adjacent factors distinct.

    The empty word is the trivial label of the free product.  Instances
    are immutable and hashable, so they serve directly as table labels.
    """

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        self.letters = tuple((int(i), a) for i, a in letters)
        for (i, _), (j, _) in zip(self.letters, self.letters[1:]):
            if i == j:
                raise ShapeMismatch(f"adjacent letters share factor {i}")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        return (isinstance(other, AlternatingWord)
                and self.letters == other.letters)

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        if not self.letters:
            return "e"
        return "".join(f"({i}:{a})" for i, a in self.letters)


class FreeProductTable:
    """Factor tables plus the derived word combinatorics.

    Words carry multiplicative dimension data: dim is the product and rho
    the Kronecker product over letters, so every windowed word table
    satisfies the IrrTable invariants wordwise.  Word tables are memoized
    per window length; construction is pure, so sharing is safe.
    """

    def __init__(self, factors, name=""):
        self.factors = list(factors)
        if not self.factors:
            raise ShapeMismatch("free product needs at least one factor")
        for i, t in enumerate(self.factors):
            if not isinstance(t, IrrTable):
                raise ShapeMismatch(f"factor {i} is not an IrrTable")
        self.name = name or " * ".join(
            t.name or f"factor{i}" for i, t in enumerate(self.factors))
        self._rank = [{a: r for r, a in enumerate(t.labels)}
                      for t in self.factors]
        self._tables = {}

    def check_word(self, w):
        if not isinstance(w, AlternatingWord):
            w = AlternatingWord(w)
        for i, a in w.letters:
            if not 0 <= i < len(self.factors):
                raise ShapeMismatch(f"word uses unknown factor {i}")
            t = self.factors[i]
            if a not in t.dims:
                raise ShapeMismatch(f"factor {i} has no label {a!r}")
            if a == t.unit:
                raise ShapeMismatch(f"trivial letter in factor {i}")
        return w

    def sort_key(self, w):
        return (len(w), tuple((i, self._rank[i][a]) for i, a in w.letters))

    def word_dim(self, w):
        out = 1
        for i, a in w.letters:
            out *= self.factors[i].dims[a]
        return out

    def word_rho(self, w):
        out = np.ones(1)
        for i, a in w.letters:
            out = np.kron(out, self.factors[i].rho[a])
        return out

    def word_conj(self, w):
        return AlternatingWord((i, self.factors[i].conj[a])
                               for i, a in reversed(w.letters))

    def table(self, max_len):
        """Truncated IrrTable over all words of length <= max_len."""
        got = self._tables.get(max_len)
        if got is not None:
            return got
        ws = enumerate_words(self, max_len)
        fusion = None
        if all(t.fusion is not None for t in self.factors):
            keep = set(ws)
            fusion = {}
            for a in ws:
                for b in ws:
                    for w, n in free_fusion(self, a, b).items():
                        if w in keep:
                            fusion[(a, b, w)] = n
        table = IrrTable(ws,
                         {w: self.word_dim(w) for w in ws},
                         {w: self.word_rho(w) for w in ws},
                         {w: self.word_conj(w) for w in ws},
                         fusion=fusion, name=self.name, truncated=True)
        self._tables[max_len] = table
        return table

    def __repr__(self):
        return f"FreeProductTable({self.name}, {len(self.factors)} factors)"


class BoundedMultiplier(FinSupp):
    """FinSupp carrying a cb-norm upper bound as metadata.

    The bound asserts nothing beyond domination; arithmetic on the
    element drops it (derived elements get cb_upper None), since generic
    operations do not preserve such estimates.
    """

    kind = "bounded"

    def __init__(self, table, blocks, cb_upper=None):
        super().__init__(table, blocks)
        self.cb_upper = None if cb_upper is None else float(cb_upper)


def enumerate_words(fp, max_len):
    """All alternating words of length <= max_len, ordered by length then
    letters (factor index, then the factor's own label order)."""
    if max_len < 0:
        raise ShapeMismatch(f"max_len = {max_len} must be >= 0")
    out = [AlternatingWord()]
    layer = [()]
    for _ in range(max_len):
        grown = []
        # extending sorted prefixes in (factor, label rank) order keeps
        # each layer lexicographically sorted
        for tup in layer:
            last = tup[-1][0] if tup else -1
            for i, t in enumerate(fp.factors):
                if i == last:
                    continue
                for a in t.labels:
                    if a != t.unit:
                        grown.append(tup + ((i, a),))
        layer = grown
        out.extend(AlternatingWord(t) for t in grown)
    return out


def free_fusion(fp, w1, w2):
    """Decompose the product of two words into a multiset {word: mult}.

    Junction letters from distinct factors concatenate; letters from the
    same factor fuse by that factor's rules, with the trivial label
    recursing further inward.  The exact integer identity
    dim(w1) dim(w2) = sum mult * dim(word) is checked on every call;
    factors that are themselves truncated windows can only lose mass at
    the junction, so for them the check relaxes to <=.
    """
    w1 = fp.check_word(w1)
    w2 = fp.check_word(w2)
    for i, t in enumerate(fp.factors):
        if t.fusion is None:
            raise MissingFusionData(f"factor {i} carries no fusion data")
    out = Counter()
    _junction(fp, w1.letters, w2.letters, 1, out)
    mass = sum(n * fp.word_dim(w) for w, n in out.items())
    want = fp.word_dim(w1) * fp.word_dim(w2)
    windowed = any(t.truncated for t in fp.factors)
    if mass > want or (mass != want and not windowed):
        raise AxiomViolation(
            f"fusion of {w1!r} and {w2!r} has dimension mass {mass}, "
            f"expected {want}")
    return dict(out)


def _junction(fp, l1, l2, mult, out):
    if not l1 or not l2:
        out[AlternatingWord(l1 + l2)] += mult
        return
    (i, a), (j, b) = l1[-1], l2[0]
    if i != j:
        out[AlternatingWord(l1 + l2)] += mult
        return
    t = fp.factors[i]
    for g in t.labels:
        n = t.fusion_n(a, b, g)
        if not n:
            continue
        if g == t.unit:
            _junction(fp, l1[:-1], l2[1:], mult * n, out)
        else:
            out[AlternatingWord(l1[:-1] + ((i, g),) + l2[1:])] += mult * n


def length_projection(fp, d, max_len):
    """The central projection p_d with identity blocks on length-d words.

    Metadata cb_upper = max(4d, 1), the length-projection estimate; the
    element itself is exact within the window.
    """
    if not 0 <= d <= max_len:
        raise ShapeMismatch(f"need 0 <= d <= max_len, got {d} and {max_len}")
    t = fp.table(max_len)
    blocks = {w: np.eye(t.dims[w]) for w in t.labels if len(w) == d}
    return BoundedMultiplier(t, blocks, cb_upper=float(max(4 * d, 1)))


def _family_bound(table, gi):
    rep = multiplier_cb_report(table, gi)
    if rep.exact is not None:
        return float(rep.exact)
    if rep.upper:
        return float(min(rep.upper.values()))
    raise ShapeMismatch(
        f"no computable cb upper bound over table {table.name!r}; "
        "pass bounds= explicitly")


def psi_d(fp, g, max_len, bounds=None):
    """Tensor-form multiplier supported on length-d words.

    g lists d letter families, each one FinSupp per factor; the block at
    word a_1 ... a_d is the Kronecker product of the letter blocks, and
    everything off length d is zero.  Blocks the families hold at trivial
    labels never enter (letters are nontrivial by construction).

    Metadata cb_upper = 4d(2d+1) prod_k max_i b_{i,k}.  Per-letter bounds
    b_{i,k} are taken from bounds[k][i] when supplied, otherwise from the
    cb report of the family (the exact value when available, else its
    best upper bound); families over tables where no upper bound is
    computable require explicit bounds.
    """
    d = len(g)
    if d < 1:
        raise ShapeMismatch("need at least one letter family")
    if d > max_len:
        raise ShapeMismatch(f"d = {d} exceeds max_len = {max_len}")
    fams = []
    for k, fam in enumerate(g):
        fam = list(fam)
        if len(fam) != len(fp.factors):
            raise ShapeMismatch(
                f"family {k} has {len(fam)} entries for "
                f"{len(fp.factors)} factors")
        for i, gi in enumerate(fam):
            t = fp.factors[i]
            if not isinstance(gi, FinSupp):
                raise ShapeMismatch(f"family {k} entry {i} is not a FinSupp")
            if gi.table is not t and (list(gi.table.labels) != list(t.labels)
                                      or gi.table.dims != t.dims):
                raise ShapeMismatch(
                    f"family {k} entry {i} lives over a different table")
        fams.append(fam)

    t = fp.table(max_len)
    blocks = {}
    for w in t.labels:
        if len(w) != d:
            continue
        mat = np.ones((1, 1), dtype=complex)
        for k, (i, a) in enumerate(w.letters):
            blk = fams[k][i].blocks.get(a)
            if blk is None:
                mat = None
                break
            mat = np.kron(mat, blk)
        if mat is not None:
            blocks[w] = mat

    cb = float(4 * d * (2 * d + 1))
    for k, fam in enumerate(fams):
        per = []
        for i, gi in enumerate(fam):
            given = None if bounds is None else bounds[k][i]
            per.append(float(given) if given is not None
                       else _family_bound(fp.factors[i], gi))
        cb *= max(per)
    return BoundedMultiplier(t, blocks, cb_upper=cb)


def tn_series(fp, n, max_len):
    """T_n: coefficient (1 - 1/sqrt(n))^d on every word of length d <= n.

    Central, with sup norm 1 attained at the empty word; n = 1 collapses
    to the projection onto length 0.
    """
    if not 1 <= n <= max_len:
        raise ShapeMismatch(f"need 1 <= n <= max_len, got {n} and {max_len}")
    t = fp.table(max_len)
    c = 1.0 - 1.0 / np.sqrt(n)
    blocks = {}
    for w in t.labels:
        if len(w) > n:
            continue
        coeff = c ** len(w)
        if coeff != 0.0:
            blocks[w] = coeff * np.eye(t.dims[w])
    return FinSupp(t, blocks)

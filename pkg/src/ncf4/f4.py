"""Noncommutative F4: ambiguities, symbolic preprocessing, matrix reduction, basis update.

Basis elements are addressed by their position in ``F4.basis`` (0-based);
the polynomials themselves live in a :class:`PolynomialStore`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import IntEnum

from .arena import PolynomialStore
from .field import RationalField
from .linalg.q import rref_multimodular
from .linalg.zp import SparseMatrix, SparseRow, rref_mod_p
from .proof import Certificate, expand_to_input, input_certificate, simplify
from .trie import PrefixTree

log = logging.getLogger(__name__)

PROOF_MODES = ("none", "incremental", "full")


class Kind(IntEnum):
    """Which overlap/containment configuration produced an ambiguity."""

    LEFT_OVERLAP = 1  # a*lm(f) = lm(g)*d
    RIGHT_OVERLAP = 2  # lm(f)*b = c*lm(g)
    G_CONTAINS_F = 3  # a*lm(f)*b = lm(g)
    F_CONTAINS_G = 4  # lm(f) = c*lm(g)*d


@dataclass(frozen=True)
class Ambiguity:
    kind: Kind
    a: int
    b: int
    c: int
    d: int
    f: int
    g: int
    degree: int


def word_ambiguities(F: tuple, G: tuple, same: bool) -> list[tuple]:
    """All ``(kind, a, b, c, d)`` word tuples for leading words ``F`` (of f) and ``G`` (of g).

    Tuples that satisfy several cases are reported once, under the first case.
    For ``same`` (f is g) only the first overlap form is produced.
    """
    out = {}
    nf, ng = len(F), len(G)
    for la in range(max(1, ng - nf), ng):
        ov = ng - la
        if G[la:] == F[:ov]:
            out.setdefault((G[:la], (), (), F[ov:]), Kind.LEFT_OVERLAP)
    if same:
        return [(k, *w) for w, k in out.items()]
    for lb in range(max(1, ng - nf), ng):
        ov = ng - lb
        if F[nf - ov:] == G[:ov]:
            out.setdefault(((), G[ov:], F[:nf - ov], ()), Kind.RIGHT_OVERLAP)
    for s in range(ng - nf + 1):
        if G[s:s + nf] == F:
            out.setdefault((G[:s], G[s + nf:], (), ()), Kind.G_CONTAINS_F)
    for s in range(nf - ng + 1):
        if F[s:s + ng] == G:
            out.setdefault(((), (), F[:s], F[s + ng:]), Kind.F_CONTAINS_G)
    return [(k, *w) for w, k in out.items()]


@dataclass
class GBConfig:
    degree_bound: int | None = None
    max_iterations: int | None = None
    gm_filter: bool = False
    proof_mode: str = "none"
    thread_count: int = 1
    tracer_enabled: bool = True

    def __post_init__(self):
        if self.proof_mode not in PROOF_MODES:
            raise ValueError(f"proof_mode must be one of {PROOF_MODES}")


@dataclass
class GBResult:
    basis: list[int]
    status: str
    certificates: list[Certificate] | None = None
    stats: dict = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return self.status == "complete"


class PairQueue:
    """Pending ambiguities bucketed by degree, insertion order within a bucket."""

    def __init__(self, degree_bound: int | None = None):
        self.degree_bound = degree_bound
        self._buckets: dict[int, list[Ambiguity]] = {}
        self.discarded = 0

    def __len__(self):
        return sum(map(len, self._buckets.values()))

    def push(self, amb: Ambiguity) -> bool:
        if self.degree_bound is not None and amb.degree > self.degree_bound:
            self.discarded += 1
            return False
        self._buckets.setdefault(amb.degree, []).append(amb)
        return True

    def min_degree(self) -> int | None:
        return min(self._buckets) if self._buckets else None

    def pop_min(self) -> list[Ambiguity]:
        deg = min(self._buckets)
        return self._buckets.pop(deg)


class F4:
    def __init__(self, polys: PolynomialStore, config: GBConfig | None = None):
        self.polys = polys
        self.monos = polys.monomials
        self.field = polys.field
        self.config = config or GBConfig()
        self.basis: list[int] = []
        self.trie = PrefixTree()
        self.queue = PairQueue(self.config.degree_bound)
        self.certificates: list[Certificate] = []
        self._full_certs: dict[int, Certificate] = {}
        self._kept: set = set()
        self.stats = {"iterations": 0, "matrices": [], "gm_removed": 0}

    # ambiguities and S-polynomials

    def lm_word(self, i: int) -> tuple:
        return self.monos.word(self.polys.lm(self.basis[i]))

    def ambiguities(self, i: int, j: int) -> list[Ambiguity]:
        F, G = self.lm_word(i), self.lm_word(j)
        intern = self.monos.intern
        out = []
        for kind, a, b, c, d in word_ambiguities(F, G, i == j):
            out.append(Ambiguity(kind, intern(a), intern(b), intern(c), intern(d), i, j,
                                 len(a) + len(F) + len(b)))
        return out

    def ambiguity_word(self, amb: Ambiguity) -> tuple:
        return self.monos.word(self.monos.multiply(amb.a, self.polys.lm(self.basis[amb.f]), amb.b))

    def s_polynomial(self, amb: Ambiguity) -> list[tuple]:
        """Terms ``[(coeff, monomial)]`` of ``afb/lc(f) - cgd/lc(g)`` in descending order."""
        P, fld = self.polys, self.field
        acc: dict[int, object] = {}
        for poly, left, right, sign in ((amb.f, amb.a, amb.b, 1), (amb.g, amb.c, amb.d, -1)):
            p = self.basis[poly]
            scale = fld.inv(P.lc(p)) if sign > 0 else fld.neg(fld.inv(P.lc(p)))
            q = P.multiple(p, left, right)
            for coeff, m in P.terms(q):
                acc[m] = fld.add(acc.get(m, fld.zero), fld.mul(scale, coeff))
        key = self.monos.key
        return sorted(((c, m) for m, c in acc.items() if c != 0), key=lambda t: key(t[1]), reverse=True)

    # symbolic preprocessing and matrix construction

    def symbolic_preprocess(self, batch: list[tuple[int, int, int]]) -> list[tuple[tuple, int]]:
        """Close ``batch`` of ``(left, basis index, right)`` under reducer selection.

        Returns ``[((left, g, right), polynomial index)]`` in row order.
        """
        P, M = self.polys, self.monos
        rows: dict[tuple, int] = {}
        done: set[int] = set()
        pending: list[int] = []

        def add(key):
            if key in rows:
                return
            left, g, right = key
            q = P.multiple(self.basis[g], left, right)
            rows[key] = q
            pending.append(q)

        for key in batch:
            add(key)
        for q in rows.values():
            done.add(P.lm(q))
        k = 0
        while k < len(pending):
            q = pending[k]
            k += 1
            for m in P.monomials_of(q):
                if m in done:
                    continue
                done.add(m)
                w = M.word(m)
                hit = self.trie.find_divisor(w)
                if hit is None:
                    continue
                g, pos = hit
                n = M.length(self.polys.lm(self.basis[g]))
                add((M.intern(w[:pos]), g, M.intern(w[pos + n:])))
        return list(rows.items())

    def build_matrix(self, rows: list[tuple[tuple, int]]) -> tuple[SparseMatrix, list[int]]:
        """Sparse matrix with columns = all monomials in strictly descending order."""
        P = self.polys
        mons = set()
        for _, q in rows:
            mons.update(P.monomials_of(q))
        key = self.monos.key
        columns = sorted(mons, key=key, reverse=True)
        colmap = {m: j for j, m in enumerate(columns)}
        srows = [SparseRow(tuple(colmap[m] for m in P.monomials_of(q)), P.coeffs(q)) for _, q in rows]
        return SparseMatrix(len(columns), srows), columns

    def reduce_matrix(self, matrix: SparseMatrix, want_transform: bool):
        cfg = self.config
        if isinstance(self.field, RationalField):
            return rref_multimodular(matrix, cfg.thread_count, cfg.tracer_enabled, want_transform)
        return rref_mod_p(matrix, self.field.p, cfg.thread_count, want_transform)

    # basis update

    def _add_element(self, q: int, cert: Certificate | None) -> int:
        idx = len(self.basis)
        self.basis.append(q)
        self.trie.insert(self.monos.word(self.polys.lm(q)), idx)
        if cert is not None:
            if self.config.proof_mode == "full":
                cert = expand_to_input(cert, self._full_certs, self.field)
                self._full_certs[cert.index] = cert
            else:
                self._full_certs[cert.index] = cert
            self.certificates.append(cert)
        return idx

    def _enqueue_ambiguities(self, new: list[int]) -> None:
        cands = []
        for i in new:
            for j in range(i + 1):
                cands.extend(self.ambiguities(i, j))
        if self.config.gm_filter:
            cands = self.gm_filter(cands)
        for amb in cands:
            self.queue.push(amb)

    def update_basis(self, rref: SparseMatrix, columns: list[int], transforms=None, row_keys=None) -> list[int]:
        """Append every row whose leading monomial has no divisor among the current basis."""
        P, M = self.polys, self.monos
        accepted = []
        for i, (cols, vals) in enumerate(rref.rows):
            if not cols:
                continue
            lm = columns[cols[0]]
            if self.trie.find_divisor(M.word(lm)) is not None:
                continue
            accepted.append(i)
        new = []
        for i in accepted:
            cols, vals = rref.rows[i]
            q = P.intern_sorted([columns[c] for c in cols], vals)
            cert = None
            if transforms is not None:
                terms = []
                for r, t in zip(*transforms[i]):
                    left, g, right = row_keys[r]
                    terms.append((t, M.word(left), ("g", g + 1), M.word(right)))
                cert = Certificate(len(self.basis) + 1, simplify(terms, self.field))
            new.append(self._add_element(q, cert))
        self._enqueue_ambiguities(new)
        return new

    # Gebauer-Moeller style redundancy filter

    def _amb_key(self, amb: Ambiguity):
        w = self.monos.multiply(amb.a, self.polys.lm(self.basis[amb.f]), amb.b)
        M = self.monos
        return (w, frozenset({(amb.f, M.length(amb.a)), (amb.g, M.length(amb.c))}))

    def gm_filter(self, candidates: list[Ambiguity]) -> list[Ambiguity]:
        """Drop ambiguities whose S-polynomial splits into already-covered pieces.

        For an ambiguity on word W with occurrences o1 (of f) and o2 (of g), look
        for a third occurrence o3 of some basis leading monomial inside W such
        that both pairs (o1, o3) and (o3, o2) are covered: their spans are
        disjoint, or their union is a proper subword of W (lower degree), or the
        ambiguity they form on W is already queued or processed.
        """
        M, P = self.monos, self.polys
        lens = {}

        def span_len(h):
            if h not in lens:
                lens[h] = M.length(P.lm(self.basis[h]))
            return lens[h]

        kept = []
        for amb in candidates:
            key = self._amb_key(amb)
            w = key[0]
            n = M.length(w)
            o1 = (amb.f, M.length(amb.a))
            o2 = (amb.g, M.length(amb.c))

            def covered(x, y):
                xs, xe = x[1], x[1] + span_len(x[0])
                ys, ye = y[1], y[1] + span_len(y[0])
                if xe <= ys or ye <= xs:
                    return True
                if max(xe, ye) - min(xs, ys) < n:
                    return True
                return (w, frozenset({x, y})) in self._kept

            redundant = False
            if o1 != o2:
                for o3 in self.trie.find_all_divisors(M.word(w)):
                    if o3 == o1 or o3 == o2:
                        continue
                    if covered(o1, o3) and covered(o3, o2):
                        redundant = True
                        break
            if redundant:
                self.stats["gm_removed"] += 1
                continue
            kept.append(amb)
            self._kept.add(key)
        return kept

    # main loop

    def add_inputs(self, inputs: list[int]) -> None:
        P = self.polys
        track = self.config.proof_mode != "none"
        new = []
        for j, f in enumerate(inputs):
            if P.length(f) == 0:
                raise ValueError(f"input polynomial {j + 1} is zero")
            cert = input_certificate(len(self.basis) + 1, j + 1, P.lc(f), self.field) if track else None
            new.append(self._add_element(P.monic(f), cert))
        self._enqueue_ambiguities(new)

    def step(self) -> list[int]:
        batch = self.queue.pop_min()
        degree = batch[0].degree
        keys = []
        for amb in batch:
            keys.append((amb.a, amb.f, amb.b))
            keys.append((amb.c, amb.g, amb.d))
        rows = self.symbolic_preprocess(keys)
        matrix, columns = self.build_matrix(rows)
        want = self.config.proof_mode != "none"
        rref, transforms = self.reduce_matrix(matrix, want)
        new = self.update_basis(rref, columns, transforms, [k for k, _ in rows])
        self.stats["iterations"] += 1
        self.stats["matrices"].append((matrix.nrows, matrix.ncols))
        log.debug("degree %d: %d ambiguities, %dx%d matrix, %d new", degree, len(batch),
                  matrix.nrows, matrix.ncols, len(new))
        return new

    def run(self) -> str:
        limit = self.config.max_iterations
        while len(self.queue):
            if limit is not None and self.stats["iterations"] >= limit:
                return "truncated"
            self.step()
        return "truncated" if self.queue.discarded else "complete"


def compute_gb(polys: PolynomialStore, inputs: list[int], config: GBConfig | None = None) -> GBResult:
    """Groebner basis (possibly partial) of the two-sided ideal generated by ``inputs``."""
    engine = F4(polys, config)
    engine.add_inputs(inputs)
    status = engine.run()
    certs = engine.certificates if engine.config.proof_mode != "none" else None
    engine.stats["discarded"] = engine.queue.discarded
    return GBResult(list(engine.basis), status, certs, engine.stats)

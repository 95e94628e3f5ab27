"""Quivers with potential: premutation, reduction (splitting) and mutation.

The splitting algorithm normalizes the degree-2 part of the potential into
distinct opposite pairs by exact Gaussian elimination on the pairing matrix,
then repeatedly absorbs every cycle that still touches a trivial arrow into
the trivial part, one chosen occurrence per cycle per pass.  Each pass raises
the minimal degree of the remaining coupling terms, so at most N passes run.
The output is never trusted: a SplitResult carries a certificate verifying
all of its defining properties, including that the accumulated substitution
carries reduced + trivial part back to the input potential up to cyclic
equivalence modulo m^(N+1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .cycles import Potential, cyclic_derivative, cyclic_normalize, cyclically_equivalent
from .errors import (
    CertificateError,
    InvariantError,
    MutationNotDefined,
    TruncationTooSmall,
)
from .jets import JetPoly, JetSpace
from .linalg import Mat
from .quiver import Arrow, Path, Quiver, rotations
from .subst import (
    ArrowSubstitution,
    apply_substitution,
    compose_substitutions,
    identity_substitution,
    invert_substitution,
    substitution_from_images,
)


@dataclass(frozen=True)
class QP:
    """A quiver with potential, at a fixed truncation order and field."""

    quiver: Quiver
    potential: Potential

    def __post_init__(self):
        if self.potential.space.quiver != self.quiver:
            raise InvariantError("potential lives over a different quiver")
        for p in self.potential.terms():
            if p.length < 2:
                raise InvariantError("potential terms must have length >= 2")

    @property
    def space(self) -> JetSpace:
        return self.potential.space

    @property
    def order(self) -> int:
        return self.space.order

    @property
    def field(self):
        return self.space.field

    def __eq__(self, other):
        return (
            isinstance(other, QP)
            and other.quiver == self.quiver
            and other.potential == self.potential
        )


def zero_qp(quiver: Quiver, order: int, fld) -> QP:
    space = JetSpace(quiver, order, fld)
    return QP(quiver, Potential(space.zero()))


def _require_admissible(q: Quiver, k: int) -> None:
    if k not in q.vertices:
        raise InvariantError(f"no vertex {k}")
    if q.has_two_cycle_at(k):
        raise MutationNotDefined(f"vertex {k} lies on a 2-cycle")


def composite_name(b: str, a: str) -> str:
    return f"[{b}{a}]"


def star_name(c: str) -> str:
    return c + "*"


def premutate_quiver(q: Quiver, k: int) -> Quiver:
    """Steps 1 and 2: add a composite arrow for every hook through k, then
    reverse every arrow incident to k (as c*)."""
    _require_admissible(q, k)
    arrows: list[Arrow] = []
    for a in q.arrows:
        if a.head == k or a.tail == k:
            arrows.append(Arrow(star_name(a.id), a.head, a.tail))
        else:
            arrows.append(a)
    for b in q.arrows_out_of(k):
        for a in q.arrows_into(k):
            arrows.append(Arrow(composite_name(b.id, a.id), a.tail, b.head))
    ids = [a.id for a in arrows]
    if len(set(ids)) != len(ids):
        raise InvariantError("arrow naming collision during premutation")
    return Quiver(q.vertices, tuple(arrows))


def mutate_quiver(q: Quiver, k: int) -> Quiver:
    """Premutate, then drop a maximal disjoint set of 2-cycles (Step 3),
    chosen greedily in lexicographic order of the id pairs."""
    qt = premutate_quiver(q, k)
    used: set[str] = set()
    for u, v in qt.two_cycle_pairs():
        if u not in used and v not in used:
            used.add(u)
            used.add(v)
    return qt.without_arrows(used)


def _rotate_off_vertex(q: Quiver, p: Path, k: int) -> Path:
    """Lexicographically minimal rotation of a cycle whose base point is not k."""
    cands = [r for r in rotations(q, p) if q.tail(r.arrows[-1]) != k]
    if not cands:
        raise InvariantError("cycle lives entirely at one vertex")  # impossible, loop-free
    return min(cands, key=lambda r: r.arrows)


def bracket_substitute(s: Potential, k: int, target: JetSpace) -> Potential:
    """[S]: replace each passage through k (a consecutive hook pair) by the
    corresponding composite arrow; result is supported away from k."""
    src_q = s.space.quiver
    acc: dict[Path, object] = {}
    for p, c in s.jet.terms.items():
        if all(src_q.tail(a) != k and src_q.head(a) != k for a in p.arrows):
            word = p.arrows
        else:
            rot = _rotate_off_vertex(src_q, p, k)
            w = rot.arrows
            word_l: list[str] = []
            i = 0
            while i < len(w):
                if i + 1 < len(w) and src_q.tail(w[i]) == k == src_q.head(w[i + 1]):
                    word_l.append(composite_name(w[i], w[i + 1]))
                    i += 2
                else:
                    word_l.append(w[i])
                    i += 1
            word = tuple(word_l)
        tq = target.quiver
        new = Path(word, tq.tail(word[-1]), tq.head(word[0]))
        acc[new] = acc.get(new, target.field.zero) + c
    return cyclic_normalize(JetPoly(target, {p: c for p, c in acc.items() if c}))


def premutate_qp(qp: QP, k: int) -> QP:
    """The premutation: bracketed potential plus one correction cycle
    b* [ba] a* for every hook through k."""
    _require_admissible(qp.quiver, k)
    qt = premutate_quiver(qp.quiver, k)
    space = JetSpace(qt, qp.order, qp.field)
    pot = bracket_substitute(qp.potential, k, space)
    corr = space.zero()
    for b in qp.quiver.arrows_out_of(k):
        for a in qp.quiver.arrows_into(k):
            corr = corr + space.path(
                (star_name(b.id), composite_name(b.id, a.id), star_name(a.id))
            )
    return QP(qt, pot + cyclic_normalize(corr))


@dataclass
class SplitReport:
    ok: bool
    checks: list[tuple[str, bool]] = dc_field(default_factory=list)

    def note(self, name: str, passed: bool):
        self.checks.append((name, passed))
        if not passed:
            self.ok = False


@dataclass
class SplitResult:
    reduced: QP
    trivial: QP
    splitting: ArrowSubstitution  # on the full quiver; splitting(S_red + S_triv) ~cyc S
    certificate: SplitReport


def _degree2_pairing(qp: QP):
    """Group the degree-2 terms into pairing matrices between opposite
    parallel-arrow classes; returns {(i, j): (A_ids, B_ids, Mat)} with i < j."""
    q = qp.quiver
    fld = qp.field
    classes: dict[tuple[int, int], tuple[list[str], list[str]]] = {}
    for p, _ in qp.potential.degree2_part().terms().items():
        x, y = p.arrows
        i, j = sorted((q.tail(x), q.head(x)))
        if (i, j) not in classes:
            a_ids = sorted(a.id for a in q.arrows if (a.tail, a.head) == (i, j))
            b_ids = sorted(a.id for a in q.arrows if (a.tail, a.head) == (j, i))
            classes[(i, j)] = (a_ids, b_ids)
    pair_mats = {}
    for (i, j), (a_ids, b_ids) in classes.items():
        m = Mat.zero(fld, len(a_ids), len(b_ids))
        pair_mats[(i, j)] = (a_ids, b_ids, m)
    for p, c in qp.potential.degree2_part().terms().items():
        x, y = p.arrows
        i, j = sorted((q.tail(x), q.head(x)))
        a_ids, b_ids, m = pair_mats[(i, j)]
        if q.tail(x) == i:  # x in the A class, word (x, y)
            m.data[a_ids.index(x)][b_ids.index(y)] += c
        else:
            m.data[a_ids.index(y)][b_ids.index(x)] += c
    return pair_mats


def _pivot_normal_form(c: Mat):
    """Invertible X, Y with X @ c @ Y having a single 1 at each pivot position
    and zeros elsewhere; pivots are chosen row-major, keeping their indices."""
    fld = c.field
    m, n = c.rows, c.cols
    d = c.copy()
    x = Mat.identity(fld, m)
    y = Mat.identity(fld, n)
    used_rows: set[int] = set()
    used_cols: set[int] = set()
    pivots: list[tuple[int, int]] = []
    for i in range(m):
        if i in used_rows:
            continue
        j = next((jj for jj in range(n) if jj not in used_cols and d.data[i][jj]), None)
        if j is None:
            continue
        inv = fld.one / d.data[i][j]
        d.data[i] = [v * inv for v in d.data[i]]
        x.data[i] = [v * inv for v in x.data[i]]
        for r in range(m):
            if r != i and d.data[r][j]:
                f = d.data[r][j]
                d.data[r] = [v - f * w for v, w in zip(d.data[r], d.data[i])]
                x.data[r] = [v - f * w for v, w in zip(x.data[r], x.data[i])]
        for cc in range(n):
            if cc != j and d.data[i][cc]:
                f = d.data[i][cc]
                for r in range(m):
                    d.data[r][cc] = d.data[r][cc] - f * d.data[r][j]
                for r in range(n):
                    y.data[r][cc] = y.data[r][cc] - f * y.data[r][j]
        used_rows.add(i)
        used_cols.add(j)
        pivots.append((i, j))
    return x, y, d, pivots


def _linear_normalization(qp: QP):
    """Step 3 of the reduction: a degree-preserving substitution making the
    degree-2 part a sum of distinct opposite pairs; returns (subst, pairs)."""
    space = qp.space
    fld = qp.field
    images: dict[str, JetPoly] = {}
    pairs: list[tuple[str, str]] = []
    nontrivial_sub = False
    for (_, _), (a_ids, b_ids, c) in sorted(_degree2_pairing(qp).items()):
        x, y, _, pivots = _pivot_normal_form(c)
        pairs.extend((a_ids[i], b_ids[j]) for i, j in pivots)
        if x != Mat.identity(fld, len(a_ids)) or y != Mat.identity(fld, len(b_ids)):
            nontrivial_sub = True
            # psi(u_i) = sum_i' X[i'][i] u_i',  psi(v_j) = sum_j' Y[j][j'] v_j'
            for idx, aid in enumerate(a_ids):
                img = space.zero()
                for idx2, aid2 in enumerate(a_ids):
                    if x.data[idx2][idx]:
                        img = img + space.arrow(aid2).scale(x.data[idx2][idx])
                images[aid] = img
            for jdx, bid in enumerate(b_ids):
                img = space.zero()
                for jdx2, bid2 in enumerate(b_ids):
                    if y.data[jdx][jdx2]:
                        img = img + space.arrow(bid2).scale(y.data[jdx][jdx2])
                images[bid] = img
    sub = substitution_from_images(space, images) if nontrivial_sub else identity_substitution(space)
    return sub, pairs


def split_reduce(qp: QP) -> SplitResult:
    """Split a QP into reduced and trivial parts with an explicit splitting
    substitution, verified by certificate."""
    space = qp.space
    q = qp.quiver
    n = qp.order
    s0 = qp.potential

    if s0.degree2_part().is_zero():
        triv_quiver = q.restricted_to_arrows(set())
        empty_triv = QP(
            triv_quiver, Potential(JetSpace(triv_quiver, n, qp.field).zero())
        )
        cert = SplitReport(ok=True)
        cert.note("reduced part has zero degree-2 component", True)
        cert.note("trivial part is trivial", True)
        cert.note("arrow sets split the quiver", True)
        cert.note("splitting carries the split potential to the input", True)
        return SplitResult(qp, empty_triv, identity_substitution(space), cert)

    lin_sub, pairs = _linear_normalization(qp)
    cur = cyclic_normalize(apply_substitution(lin_sub, s0.jet))
    s1 = cur  # the linearly normalized potential; the splitting targets it

    u_of = {u: v for u, v in pairs}   # A-side pivot -> partner
    v_of = {v: u for u, v in pairs}
    trivial_ids = set(u_of) | set(v_of)

    s_triv_jet = space.zero()
    for u, v in pairs:
        s_triv_jet = s_triv_jet + space.path((u, v))
    s_triv = cyclic_normalize(s_triv_jet)

    if not cyclic_normalize(cur.degree2_part().jet - s_triv.jet).is_zero():
        raise CertificateError("degree-2 normalization failed")

    for _ in range(n + 1):
        corrections: dict[str, JetPoly] = {}
        found = False
        for p, c in cur.terms().items():
            if p.length < 3 or not (set(p.arrows) & trivial_ids):
                continue
            found = True
            rots = [
                r for r in rotations(q, p) if r.arrows[0] in trivial_ids
            ]
            chosen = min(rots, key=lambda r: r.arrows)
            lead = chosen.arrows[0]
            rest = chosen.arrows[1:]
            piece = Path(rest, q.tail(rest[-1]), q.head(rest[0]))
            partner = v_of.get(lead) or u_of.get(lead)
            prev = corrections.get(partner, space.zero())
            corrections[partner] = prev + JetPoly(space, {piece: c})
        if not found:
            break
        images = {
            aid: space.arrow(aid) - corr for aid, corr in corrections.items()
        }
        psi = substitution_from_images(space, images)
        cur = cyclic_normalize(apply_substitution(psi, cur.jet))
    else:
        raise CertificateError("coupling terms survived the degree budget")

    s_red = cur - s_triv
    reduced_quiver = q.without_arrows(trivial_ids)
    trivial_quiver = q.restricted_to_arrows(trivial_ids)
    red_space = JetSpace(reduced_quiver, n, qp.field)
    red_pot = _retype_potential(s_red, red_space)
    triv_space = JetSpace(trivial_quiver, n, qp.field)
    triv_pot = _retype_potential(s_triv, triv_space)

    # Build the splitting forward, degree by degree: corrections on the
    # trivial arrows absorb the discrepancy between the split potential and
    # the linearly normalized input.  Every minimal-degree discrepancy term
    # touches a trivial arrow (differences of trivial-only substitutions
    # applied to the trivial 2-cycles are spanned by one-sided corrections),
    # so each round strictly raises the discrepancy degree.
    chi = substitution_from_images(space, {})
    split_jet = (s_red + s_triv).jet
    for _ in range(n + 1):
        delta = cyclic_normalize(s1.jet - apply_substitution(chi, split_jet))
        if delta.is_zero():
            break
        d = min(p.length for p in delta.terms())
        additions: dict[str, JetPoly] = {}
        for p, c in delta.terms().items():
            if p.length != d:
                continue
            rots = [r for r in rotations(q, p) if r.arrows[0] in trivial_ids]
            if not rots:
                raise CertificateError("discrepancy term avoids the trivial arrows")
            chosen = min(rots, key=lambda r: r.arrows)
            lead = chosen.arrows[0]
            rest = chosen.arrows[1:]
            piece = Path(rest, q.tail(rest[-1]), q.head(rest[0]))
            partner = v_of.get(lead) or u_of.get(lead)
            prev = additions.get(partner, space.zero())
            additions[partner] = prev + JetPoly(space, {piece: c})
        chi = substitution_from_images(
            space,
            {
                aid: chi.images[aid] + corr
                for aid, corr in additions.items()
            }
            | {
                aid: img
                for aid, img in chi.images.items()
                if aid not in additions
            },
        )
    else:
        raise CertificateError("splitting construction exceeded the degree budget")
    phi = compose_substitutions(invert_substitution(lin_sub), chi)

    cert = SplitReport(ok=True)
    cert.note("reduced part has zero degree-2 component", red_pot.degree2_part().is_zero())
    cert.note("trivial part is trivial", _is_trivial_qp(QP(trivial_quiver, triv_pot)))
    cert.note(
        "arrow sets split the quiver",
        set(a.id for a in q.arrows)
        == {a.id for a in reduced_quiver.arrows} | {a.id for a in trivial_quiver.arrows}
        and not ({a.id for a in reduced_quiver.arrows} & {a.id for a in trivial_quiver.arrows}),
    )
    recombined = apply_substitution(phi, (s_red + s_triv).jet)
    cert.note(
        "splitting carries the split potential to the input",
        cyclically_equivalent(recombined, s0.jet),
    )
    if not cert.ok:
        raise CertificateError(f"split_reduce certificate failed: {cert.checks}")
    return SplitResult(QP(reduced_quiver, red_pot), QP(trivial_quiver, triv_pot), phi, cert)


def _retype_potential(s: Potential, target: JetSpace) -> Potential:
    """Move a potential onto a subquiver's jet space (arrows must all exist)."""
    tq = target.quiver
    acc: dict[Path, object] = {}
    for p, c in s.jet.terms.items():
        for a in p.arrows:
            if not tq.has_arrow(a):
                raise InvariantError(f"potential uses arrow {a!r} outside the subquiver")
        acc[Path(p.arrows, p.tail, p.head)] = c
    return Potential(JetPoly(target, acc))


def _is_trivial_qp(qp: QP) -> bool:
    """Degree exactly 2, and the cyclic derivatives span the arrow space."""
    pot = qp.potential
    if pot.is_zero():
        return not qp.quiver.arrows
    if any(p.length != 2 for p in pot.terms()):
        return False
    fld = qp.field
    ids = [a.id for a in qp.quiver.arrows]
    index = {aid: i for i, aid in enumerate(ids)}
    cols = []
    for a in qp.quiver.arrows:
        d = cyclic_derivative(pot, a.id)
        if any(p.length != 1 for p in d.terms):
            continue
        vec = [fld.zero] * len(ids)
        for p, c in d.terms.items():
            vec[index[p.arrows[0]]] = vec[index[p.arrows[0]]] + c
        cols.append(vec)
    span = (
        Mat(fld, [[col[i] for col in cols] for i in range(len(ids))])
        if cols
        else Mat.zero(fld, len(ids), 0)
    )
    return span.rank() == len(ids)


def mutate_qp(qp: QP, k: int) -> tuple[QP, ArrowSubstitution, QP]:
    """Mutation: the reduced part of the premutation, with the splitting
    substitution and trivial part returned alongside."""
    need = max(3, qp.potential.max_length() + 1)
    if qp.order < need:
        raise TruncationTooSmall(f"truncation order {qp.order} < required {need}")
    sr = split_reduce(premutate_qp(qp, k))
    return sr.reduced, sr.splitting, sr.trivial


@dataclass
class NondegeneracyReport:
    qp_vertices: tuple[int, ...]
    depth: int
    trials: int
    seed: int
    witnesses: list[list[int]]

    @property
    def degenerate(self) -> bool:
        return bool(self.witnesses)


def probe_nondegeneracy(qp: QP, depth: int, trials: int, seed: int) -> NondegeneracyReport:
    """Run seeded random mutation sequences, reporting any that reach a
    non-2-acyclic reduced quiver."""
    if not qp.quiver.is_2_acyclic():
        return NondegeneracyReport(qp.quiver.vertices, depth, trials, seed, [[]])
    rng = random.Random(seed)
    witnesses: list[list[int]] = []
    for _ in range(trials):
        cur = qp
        seq: list[int] = []
        for _ in range(depth):
            k = rng.choice(sorted(cur.quiver.vertices))
            cur = mutate_qp(cur, k)[0]
            seq.append(k)
            if not cur.quiver.is_2_acyclic():
                witnesses.append(seq[:])
                break
    return NondegeneracyReport(qp.quiver.vertices, depth, trials, seed, witnesses)

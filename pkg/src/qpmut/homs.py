"""Intertwiner spaces and a certified isomorphism test.

``is_isomorphic`` returns YES only with an exactly re-verified invertible
intertwiner, NO only with a concrete obstruction, and UNDECIDED otherwise.
The search draws seeded random combinations of a Hom-space basis, so
identical inputs and seeds reproduce identical answers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import ContextError
from .linalg import Mat
from .reps import DecRep

YES = "YES"
NO = "NO"
UNDECIDED = "UNDECIDED"


@dataclass
class HomSpace:
    basis: list[dict[int, Mat]]

    @property
    def dim(self) -> int:
        return len(self.basis)


def hom_space(m: DecRep, n: DecRep) -> HomSpace:
    """Solve the intertwining equations g_head . a_M = a_N . g_tail exactly."""
    if not m.same_context(n):
        raise ContextError("modules live over different QPs")
    fld = m.field
    verts = list(m.qp.quiver.vertices)
    offsets = {}
    total = 0
    for v in verts:
        offsets[v] = total
        total += n.dims[v] * m.dims[v]

    rows: list[list] = []
    for a in m.qp.quiver.arrows:
        am, an = m.maps[a.id], n.maps[a.id]
        h, t = a.head, a.tail
        for p in range(n.dims[h]):
            for q in range(m.dims[t]):
                row = [fld.zero] * total
                # (g_h @ am)[p][q] = sum_r g_h[p][r] am[r][q]
                for r in range(m.dims[h]):
                    coeff = am.data[r][q]
                    if coeff:
                        row[offsets[h] + p * m.dims[h] + r] += coeff
                # -(an @ g_t)[p][q] = -sum_s an[p][s] g_t[s][q]
                for s in range(n.dims[t]):
                    coeff = an.data[p][s]
                    if coeff:
                        row[offsets[t] + s * m.dims[t] + q] -= coeff
                rows.append(row)

    system = Mat(fld, rows) if rows else Mat.zero(fld, 0, total)
    kernel = system.kernel_basis()
    basis = []
    for j in range(kernel.cols):
        blocks = {}
        for v in verts:
            g = Mat.zero(fld, n.dims[v], m.dims[v])
            for p in range(n.dims[v]):
                for q in range(m.dims[v]):
                    g.data[p][q] = kernel.data[offsets[v] + p * m.dims[v] + q][j]
            blocks[v] = g
        basis.append(blocks)
    return HomSpace(basis)


@dataclass
class IsoResult:
    verdict: str
    certificate: dict[int, Mat] | None = None
    obstruction: str | None = None
    seed: int = 0

    def __bool__(self):
        return self.verdict == YES


def _verify_iso(m: DecRep, n: DecRep, g: dict[int, Mat]) -> bool:
    for a in m.qp.quiver.arrows:
        if g[a.head] @ m.maps[a.id] != n.maps[a.id] @ g[a.tail]:
            return False
    return all(g[v].is_invertible() for v in m.qp.quiver.vertices)


def is_isomorphic(m: DecRep, n: DecRep, seed: int = 0, tries: int = 64) -> IsoResult:
    """Certified decorated-module isomorphism test."""
    if not m.same_context(n):
        raise ContextError("modules live over different QPs")
    if m.dims != n.dims:
        return IsoResult(NO, obstruction="dimension vectors differ", seed=seed)
    if m.dec_dims != n.dec_dims:
        return IsoResult(NO, obstruction="decoration vectors differ", seed=seed)

    hom_mn = hom_space(m, n)
    if m.total_dim() == 0:
        return IsoResult(YES, certificate={v: Mat.zero(m.field, 0, 0) for v in m.qp.quiver.vertices}, seed=seed)
    if hom_mn.dim == 0:
        return IsoResult(NO, obstruction="no nonzero intertwiners", seed=seed)
    hom_nm = hom_space(n, m)
    if hom_mn.dim != hom_nm.dim:
        return IsoResult(NO, obstruction="hom spaces have different dimensions", seed=seed)
    if hom_space(m, m).dim != hom_space(n, n).dim:
        return IsoResult(NO, obstruction="endomorphism algebras have different dimensions", seed=seed)

    fld = m.field
    verts = list(m.qp.quiver.vertices)
    rng = random.Random(seed)

    def combine(coeffs):
        g = {}
        for v in verts:
            acc = Mat.zero(fld, n.dims[v], m.dims[v])
            for c, b in zip(coeffs, hom_mn.basis):
                if c:
                    acc = acc + b[v].scale(c)
            g[v] = acc
        return g

    # deterministic first attempts: single basis elements
    for b in hom_mn.basis:
        if all(b[v].is_invertible() for v in verts):
            g = b
            if _verify_iso(m, n, g):
                return IsoResult(YES, certificate=g, seed=seed)

    for trial in range(tries):
        bound = 1 + trial // 8
        coeffs = [fld.of(rng.randint(-bound, bound)) for _ in hom_mn.basis]
        g = combine(coeffs)
        if all(g[v].is_invertible() for v in verts) and _verify_iso(m, n, g):
            return IsoResult(YES, certificate=g, seed=seed)
    return IsoResult(UNDECIDED, seed=seed)

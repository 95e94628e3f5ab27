"""Decorated representations and the three-map triangle at a vertex.

A DecRep stores per-vertex dimensions, per-arrow exact matrices (shape
dim_head x dim_tail; matrices act on column vectors, rightmost arrow first)
and decoration dimensions.  Valid modules are nilpotent and annihilated by
every cyclic derivative of the potential.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .cycles import cyclic_derivative, second_derivative
from .errors import ContextError, InvariantError, ShapeError, TruncationTooSmall
from .jets import JetPoly
from .linalg import (
    Mat,
    coords_in,
    hstack,
    independent_columns,
    intersect_column_spaces,
    subspace_package,
    vstack,
)
from .qp import QP


@dataclass
class DecRep:
    qp: QP
    dims: dict[int, int]
    maps: dict[str, Mat]
    dec_dims: dict[int, int]

    def __post_init__(self):
        q = self.qp.quiver
        self.dims = dict(self.dims)
        self.dec_dims = dict(self.dec_dims)
        self.maps = dict(self.maps)
        for v in q.vertices:
            self.dims.setdefault(v, 0)
            self.dec_dims.setdefault(v, 0)
            if self.dims[v] < 0 or self.dec_dims[v] < 0:
                raise InvariantError("negative dimension")
        for a in q.arrows:
            m = self.maps.setdefault(
                a.id, Mat.zero(self.qp.field, self.dims[a.head], self.dims[a.tail])
            )
            if (m.rows, m.cols) != (self.dims[a.head], self.dims[a.tail]):
                raise ShapeError(
                    f"map for {a.id!r} has shape {m.rows}x{m.cols}, "
                    f"expected {self.dims[a.head]}x{self.dims[a.tail]}"
                )
        self._nilpotency_index: int | None = None

    @property
    def field(self):
        return self.qp.field

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dim_vector(self) -> dict[int, int]:
        return dict(self.dims)

    def same_context(self, other: "DecRep") -> bool:
        return self.qp == other.qp

    def nilpotency_index(self) -> int:
        """Smallest d such that every path of length d acts as zero; raises
        if the representation is not nilpotent."""
        if self._nilpotency_index is not None:
            return self._nilpotency_index
        q = self.qp.quiver
        fld = self.field
        spans = {v: Mat.identity(fld, self.dims[v]) for v in q.vertices}
        d = 0
        while any(m.cols for m in spans.values()):
            total = sum(m.cols for m in spans.values())
            new: dict[int, list[Mat]] = {v: [] for v in q.vertices}
            for a in q.arrows:
                src = spans[a.tail]
                if src.cols:
                    new[a.head].append(self.maps[a.id] @ src)
            spans = {
                v: independent_columns(hstack(fld, ms, rows=self.dims[v]))
                if ms
                else Mat.zero(fld, self.dims[v], 0)
                for v, ms in new.items()
            }
            d += 1
            if sum(m.cols for m in spans.values()) >= total and total > 0:
                raise InvariantError("representation is not nilpotent")
        self._nilpotency_index = d
        return d

    def is_nilpotent(self) -> bool:
        try:
            self.nilpotency_index()
            return True
        except InvariantError:
            return False


def path_matrix(rep: DecRep, word: tuple[str, ...], tail: int, head: int) -> Mat:
    """Action of a single path (word order: rightmost arrow first)."""
    fld = rep.field
    if not word:
        return Mat.identity(fld, rep.dims[tail])
    acc = None
    for aid in reversed(word):
        m = rep.maps[aid]
        acc = m if acc is None else m @ acc
    return acc


def component_action(rep: DecRep, u: JetPoly, head: int, tail: int) -> Mat:
    """Matrix of e_head . u . e_tail acting M_tail -> M_head."""
    fld = rep.field
    out = Mat.zero(fld, rep.dims[head], rep.dims[tail])
    for p, c in u.terms.items():
        if p.tail != tail or p.head != head:
            continue
        out = out + path_matrix(rep, p.arrows, tail, head).scale(c)
    return out


def path_action(rep: DecRep, u: JetPoly) -> Mat:
    """Block map on the total space (vertex blocks in vertex order)."""
    if u.space.quiver != rep.qp.quiver:
        raise ContextError("jet over a different quiver")
    idx = rep.nilpotency_index()
    if u.space.order < idx:
        raise TruncationTooSmall(
            f"jet order {u.space.order} < nilpotency index {idx}"
        )
    fld = rep.field
    verts = list(rep.qp.quiver.vertices)
    blocks = [
        [component_action(rep, u, h, t) for t in verts]
        for h in verts
    ]
    return vstack(fld, [hstack(fld, row, rows=rep.dims[h]) for h, row in zip(verts, blocks)],
                  cols=sum(rep.dims[t] for t in verts))


@dataclass
class ModuleReport:
    ok: bool
    nilpotent: bool
    failures: list[str] = dc_field(default_factory=list)


def check_module(rep: DecRep) -> ModuleReport:
    """Verify nilpotency and that every cyclic derivative acts as zero."""
    try:
        rep.nilpotency_index()
    except InvariantError:
        return ModuleReport(ok=False, nilpotent=False, failures=["not nilpotent"])
    failures = []
    for a in rep.qp.quiver.arrows:
        d = cyclic_derivative(rep.qp.potential, a.id)
        m = component_action(rep, d, a.tail, a.head)
        if not m.is_zero():
            failures.append(f"derivative along {a.id!r} acts nontrivially")
    return ModuleReport(ok=not failures, nilpotent=True, failures=failures)


@dataclass
class TrianglePack:
    """Everything the mutation constructions need at one vertex.

    Bases are column matrices in ambient coordinates; retraction/projection
    maps are written in the displayed coordinate systems:

      rho      : M_out -> ker gamma coords        (rho @ ker_gamma = I)
      coker_p  : M_out -> coker beta coords       (coker_p @ coker_sec = I)
      pi1      : ker gamma coords -> (ker gamma / im beta) coords
      pi2      : ker alpha coords -> (ker alpha / im gamma) coords
      sigma    : section of pi2
      s1       : section of pi1
    """

    k: int
    in_arrows: list[str]
    out_arrows: list[str]
    in_dims: list[int]
    out_dims: list[int]
    alpha: Mat
    beta: Mat
    gamma: Mat
    ker_alpha: Mat
    ker_gamma: Mat
    rho: Mat
    im_beta: Mat
    im_gamma: Mat
    im_gamma_in_keralpha: Mat
    gamma_in_keralpha: Mat
    gamma_in_imgamma: Mat
    coker_p: Mat
    coker_sec: Mat
    pi1: Mat
    s1: Mat
    pi2: Mat
    sigma: Mat
    s_section: Mat  # im gamma coords -> M_out, gamma @ s_section = im_gamma
    ker_beta: Mat
    kerbeta_cap_imalpha: Mat

    @property
    def d_in(self) -> int:
        return self.alpha.cols

    @property
    def d_out(self) -> int:
        return self.beta.rows

    @property
    def dim_kergamma_mod_imbeta(self) -> int:
        return self.pi1.rows

    @property
    def dim_imgamma(self) -> int:
        return self.im_gamma.cols

    @property
    def dim_keralpha(self) -> int:
        return self.ker_alpha.cols

    @property
    def dim_keralpha_mod_imgamma(self) -> int:
        return self.pi2.rows

    @property
    def dim_cokerbeta(self) -> int:
        return self.coker_p.rows

    @property
    def dim_new_decoration(self) -> int:
        return self.ker_beta.cols - self.kerbeta_cap_imalpha.cols


def build_triangle(rep: DecRep, k: int) -> TrianglePack:
    """Assemble the incoming/outgoing/second-derivative triangle at k and all
    derived subspace data, with exact rank-nullity bookkeeping."""
    q = rep.qp.quiver
    fld = rep.field
    ins = [a.id for a in q.arrows_into(k)]
    outs = [a.id for a in q.arrows_out_of(k)]
    in_dims = [rep.dims[q.tail(a)] for a in ins]
    out_dims = [rep.dims[q.head(a)] for a in outs]
    dk = rep.dims[k]
    d_in = sum(in_dims)
    d_out = sum(out_dims)

    alpha = hstack(fld, [rep.maps[a] for a in ins], rows=dk) if ins else Mat.zero(fld, dk, 0)
    beta = vstack(fld, [rep.maps[b] for b in outs], cols=dk) if outs else Mat.zero(fld, 0, dk)
    gamma_blocks = [
        [
            component_action(
                rep, second_derivative(rep.qp.potential, b, a), q.tail(a), q.head(b)
            )
            for b in outs
        ]
        for a in ins
    ]
    gamma = (
        vstack(
            fld,
            [hstack(fld, row, rows=in_dims[i]) for i, row in enumerate(gamma_blocks)],
            cols=d_out,
        )
        if ins
        else Mat.zero(fld, 0, d_out)
    )

    if not (alpha @ gamma).is_zero() or not (gamma @ beta).is_zero():
        raise InvariantError("triangle identities fail; module is invalid at k")

    ker_alpha = alpha.kernel_basis()
    ker_gamma = gamma.kernel_basis()
    rho, _, _ = subspace_package(ker_gamma)
    im_beta = beta.image_basis()
    im_gamma = gamma.image_basis()

    # rank-nullity bookkeeping, checked on every build
    if ker_alpha.cols + alpha.rank() != d_in:
        raise InvariantError("rank-nullity violated for the incoming map")
    if beta.kernel_basis().cols + im_beta.cols != dk:
        raise InvariantError("rank-nullity violated for the outgoing map")
    if ker_gamma.cols + im_gamma.cols != d_out:
        raise InvariantError("rank-nullity violated for the derivative map")

    im_beta_in_kergamma = coords_in(ker_gamma, im_beta)
    _, pi1, s1 = subspace_package(im_beta_in_kergamma)

    im_gamma_in_keralpha = coords_in(ker_alpha, im_gamma)
    gamma_in_keralpha = coords_in(ker_alpha, gamma)
    gamma_in_imgamma = coords_in(im_gamma, gamma)
    _, pi2, sigma = subspace_package(im_gamma_in_keralpha)

    _, coker_p, coker_sec = subspace_package(im_beta)

    # s_section: im gamma coords -> M_out with gamma @ s = im_gamma and rho @ s = 0
    pre = []
    _, pivots = gamma.rref()
    for j in pivots:
        e = Mat.zero(fld, d_out, 1)
        e.data[j][0] = fld.one
        pre.append(e)
    pre_mat = hstack(fld, pre, rows=d_out) if pre else Mat.zero(fld, d_out, 0)
    s_section = pre_mat - (ker_gamma @ (rho @ pre_mat)) if ker_gamma.cols else pre_mat

    ker_beta = beta.kernel_basis()
    im_alpha = alpha.image_basis()
    cap = intersect_column_spaces(ker_beta, im_alpha)

    return TrianglePack(
        k=k,
        in_arrows=ins,
        out_arrows=outs,
        in_dims=in_dims,
        out_dims=out_dims,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        ker_alpha=ker_alpha,
        ker_gamma=ker_gamma,
        rho=rho,
        im_beta=im_beta,
        im_gamma=im_gamma,
        im_gamma_in_keralpha=im_gamma_in_keralpha,
        gamma_in_keralpha=gamma_in_keralpha,
        gamma_in_imgamma=gamma_in_imgamma,
        coker_p=coker_p,
        coker_sec=coker_sec,
        pi1=pi1,
        s1=s1,
        pi2=pi2,
        sigma=sigma,
        s_section=s_section,
        ker_beta=ker_beta,
        kerbeta_cap_imalpha=cap,
    )


def simple_rep(qp: QP, j: int) -> DecRep:
    dims = {v: (1 if v == j else 0) for v in qp.quiver.vertices}
    return DecRep(qp, dims, {}, {v: 0 for v in qp.quiver.vertices})


def negative_simple_rep(qp: QP, j: int) -> DecRep:
    dec = {v: (1 if v == j else 0) for v in qp.quiver.vertices}
    return DecRep(qp, {v: 0 for v in qp.quiver.vertices}, {}, dec)


def zero_rep(qp: QP) -> DecRep:
    return DecRep(qp, {v: 0 for v in qp.quiver.vertices}, {}, {v: 0 for v in qp.quiver.vertices})

"""Mutation of decorated representations.

The premutated module replaces the space at the mutation vertex by an
amalgam of coker(beta) and ker(alpha) over im(gamma).  Four equivalent
constructions are provided ("amalgam", "ker_alpha", "coker_beta",
"pushout"); explicit isomorphisms between them are produced and verified on
demand.  Full mutation premutates, then pulls the module structure back
along the splitting substitution of the premutated potential.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cycles import cyclic_normalize, cyclically_equivalent
from .errors import (
    CertificateError,
    ContextError,
    InvariantError,
    MutationNotDefined,
    TruncationTooSmall,
)
from .linalg import Mat, block_matrix, coords_in, hstack, subspace_package, vstack
from .qp import QP, composite_name, mutate_qp, premutate_qp, star_name
from .reps import DecRep, TrianglePack, build_triangle, check_module, component_action
from .subst import ArrowSubstitution

CONSTRUCTIONS = ("amalgam", "ker_alpha", "coker_beta", "pushout")


@dataclass
class PremutedRep:
    """A decorated representation of the premutated QP, remembering how the
    space at the mutation vertex was assembled."""

    rep: DecRep
    k: int
    construction: str
    triangle: TrianglePack
    block_dims: list[tuple[str, int]]
    # pushout bookkeeping (None for the other constructions)
    pushout_proj: Mat | None = None
    pushout_sec: Mat | None = None

    @property
    def alpha_bar(self) -> Mat:
        return _assemble_alpha_bar(self)

    @property
    def beta_bar(self) -> Mat:
        return _assemble_beta_bar(self)


def _assemble_alpha_bar(pm: "PremutedRep") -> Mat:
    fld = pm.rep.field
    t = pm.triangle
    mats = [pm.rep.maps[star_name(b)] for b in t.out_arrows]
    return hstack(fld, mats, rows=pm.rep.dims[pm.k])


def _assemble_beta_bar(pm: "PremutedRep") -> Mat:
    fld = pm.rep.field
    t = pm.triangle
    mats = [pm.rep.maps[star_name(a)] for a in t.in_arrows]
    return vstack(fld, mats, cols=pm.rep.dims[pm.k])


def _construction_blocks(t: TrianglePack, vk: int, fld, kind: str):
    """Return (block_dims, alpha_bar, beta_bar, extras) for the chosen
    construction; alpha_bar: M_out -> Mbar_k, beta_bar: Mbar_k -> M_in."""
    d_in, d_out = t.d_in, t.d_out
    q1 = t.dim_kergamma_mod_imbeta
    rg = t.dim_imgamma
    ka = t.dim_keralpha
    q2 = t.dim_keralpha_mod_imgamma
    c = t.dim_cokerbeta
    extras: dict[str, Mat] = {}

    if kind == "amalgam":
        blocks = [("kergamma_mod_imbeta", q1), ("imgamma", rg),
                  ("keralpha_mod_imgamma", q2), ("decoration", vk)]
        beta_bar = hstack(fld, [
            Mat.zero(fld, d_in, q1),
            t.ker_alpha @ t.im_gamma_in_keralpha,
            t.ker_alpha @ t.sigma,
            Mat.zero(fld, d_in, vk),
        ], rows=d_in)
        alpha_bar = vstack(fld, [
            -(t.pi1 @ t.rho),
            -t.gamma_in_imgamma,
            Mat.zero(fld, q2, d_out),
            Mat.zero(fld, vk, d_out),
        ], cols=d_out)
    elif kind == "ker_alpha":
        blocks = [("kergamma_mod_imbeta", q1), ("keralpha", ka), ("decoration", vk)]
        beta_bar = hstack(fld, [
            Mat.zero(fld, d_in, q1),
            t.ker_alpha,
            Mat.zero(fld, d_in, vk),
        ], rows=d_in)
        alpha_bar = vstack(fld, [
            -(t.pi1 @ t.rho),
            -t.gamma_in_keralpha,
            Mat.zero(fld, vk, d_out),
        ], cols=d_out)
    elif kind == "coker_beta":
        blocks = [("cokerbeta", c), ("keralpha_mod_imgamma", q2), ("decoration", vk)]
        beta_bar = hstack(fld, [
            t.gamma @ t.coker_sec,
            t.ker_alpha @ t.sigma,
            Mat.zero(fld, d_in, vk),
        ], rows=d_in)
        alpha_bar = vstack(fld, [
            -t.coker_p,
            Mat.zero(fld, q2, d_out),
            Mat.zero(fld, vk, d_out),
        ], cols=d_out)
    elif kind == "pushout":
        rel = vstack(fld, [
            t.coker_p @ t.s_section,
            -t.im_gamma_in_keralpha,
        ], cols=rg)
        rel_basis = rel.image_basis()
        _, qproj, qsec = subspace_package(rel_basis)
        pd = qproj.rows
        extras["pushout_proj"] = qproj
        extras["pushout_sec"] = qsec
        blocks = [("pushout", pd), ("decoration", vk)]
        qc = qproj.take_cols(list(range(c)))
        jmap = qproj.take_cols(list(range(c, c + ka)))
        iota_bar = hstack(fld, [t.gamma @ t.coker_sec, t.ker_alpha], rows=d_in) @ qsec
        beta_bar = hstack(fld, [iota_bar, Mat.zero(fld, d_in, vk)], rows=d_in)
        alpha_bar = vstack(fld, [
            -(qc @ (t.coker_p @ (t.ker_gamma @ t.rho))) - (jmap @ t.gamma_in_keralpha),
            Mat.zero(fld, vk, d_out),
        ], cols=d_out)
    else:
        raise InvariantError(f"unknown construction {kind!r}")
    return blocks, alpha_bar, beta_bar, extras


def premutate_rep(
    rep: DecRep,
    k: int,
    construction: str = "ker_alpha",
    require_valid: bool = True,
    scramble_seed: int | None = None,
    triangle: TrianglePack | None = None,
) -> PremutedRep:
    """Build the premutated decorated representation at k."""
    if construction not in CONSTRUCTIONS:
        raise InvariantError(f"unknown construction {construction!r}")
    if require_valid:
        rpt = check_module(rep)
        if not rpt.ok:
            raise CertificateError(f"input is not a valid module: {rpt.failures}")
    qp = rep.qp
    if qp.quiver.has_two_cycle_at(k):
        raise MutationNotDefined(f"vertex {k} lies on a 2-cycle")
    fld = rep.field
    qpt = premutate_qp(qp, k)
    t = triangle if triangle is not None else build_triangle(rep, k)
    if scramble_seed is not None:
        t = _scramble_choices(t, scramble_seed)
    vk = rep.dec_dims[k]

    blocks, alpha_bar, beta_bar, extras = _construction_blocks(t, vk, fld, construction)
    dbar_k = sum(d for _, d in blocks)

    # dimension bookkeeping of the amalgamated space
    expected = (
        t.dim_kergamma_mod_imbeta
        + t.dim_imgamma
        + t.dim_keralpha_mod_imgamma
        + vk
    )
    if dbar_k != expected:
        raise CertificateError("dimension bookkeeping failed for the new space")

    dims = {v: (dbar_k if v == k else rep.dims[v]) for v in qp.quiver.vertices}
    dec = {v: (t.dim_new_decoration if v == k else rep.dec_dims[v]) for v in qp.quiver.vertices}

    maps: dict[str, Mat] = {}
    for a in qp.quiver.arrows:
        if a.head != k and a.tail != k:
            maps[a.id] = rep.maps[a.id]
    for b in qp.quiver.arrows_out_of(k):
        for a in qp.quiver.arrows_into(k):
            maps[composite_name(b.id, a.id)] = rep.maps[b.id] @ rep.maps[a.id]
    # rows of beta_bar per incoming arrow, columns of alpha_bar per outgoing
    off = 0
    for aid, d in zip(t.in_arrows, t.in_dims):
        maps[star_name(aid)] = beta_bar.take_rows(list(range(off, off + d)))
        off += d
    off = 0
    for bid, d in zip(t.out_arrows, t.out_dims):
        maps[star_name(bid)] = alpha_bar.take_cols(list(range(off, off + d)))
        off += d

    out = DecRep(qpt, dims, maps, dec)
    pm = PremutedRep(
        rep=out,
        k=k,
        construction=construction,
        triangle=t,
        block_dims=blocks,
        pushout_proj=extras.get("pushout_proj"),
        pushout_sec=extras.get("pushout_sec"),
    )
    if require_valid:
        rpt = check_module(out)
        if not rpt.ok:
            raise CertificateError(f"premutated module invalid: {rpt.failures}")
    return pm


def _scramble_choices(t: TrianglePack, seed: int) -> TrianglePack:
    """Replace rho and sigma by different valid choices (seeded), for
    choice-independence experiments."""
    rng = random.Random(seed)
    fld = t.alpha.field
    kg = t.ker_gamma.cols

    def rand_mat(r, c):
        return Mat(fld, [[fld.of(rng.randint(-2, 2)) for _ in range(c)] for _ in range(r)]) \
            if r and c else Mat.zero(fld, r, c)

    z = rand_mat(kg, t.d_out)
    new_rho = t.rho + z - ((z @ t.ker_gamma) @ t.rho)
    w = rand_mat(t.im_gamma_in_keralpha.cols, t.pi2.rows)
    new_sigma = t.sigma + t.im_gamma_in_keralpha @ w
    # refresh s_section, which is derived from rho
    pre_cols = []
    _, pivots = t.gamma.rref()
    for j in pivots:
        e = Mat.zero(fld, t.d_out, 1)
        e.data[j][0] = fld.one
        pre_cols.append(e)
    pre = hstack(fld, pre_cols, rows=t.d_out) if pre_cols else Mat.zero(fld, t.d_out, 0)
    new_s = pre - (t.ker_gamma @ (new_rho @ pre))
    return TrianglePack(
        k=t.k, in_arrows=t.in_arrows, out_arrows=t.out_arrows,
        in_dims=t.in_dims, out_dims=t.out_dims,
        alpha=t.alpha, beta=t.beta, gamma=t.gamma,
        ker_alpha=t.ker_alpha, ker_gamma=t.ker_gamma, rho=new_rho,
        im_beta=t.im_beta, im_gamma=t.im_gamma,
        im_gamma_in_keralpha=t.im_gamma_in_keralpha,
        gamma_in_keralpha=t.gamma_in_keralpha,
        gamma_in_imgamma=t.gamma_in_imgamma,
        coker_p=t.coker_p, coker_sec=t.coker_sec,
        pi1=t.pi1, s1=t.s1, pi2=t.pi2, sigma=new_sigma,
        s_section=new_s, ker_beta=t.ker_beta,
        kerbeta_cap_imalpha=t.kerbeta_cap_imalpha,
    )


@dataclass
class BetaAlphaReport:
    ok: bool
    failures: list[str]


def check_beta_alpha(pm: PremutedRep) -> BetaAlphaReport:
    """Verify that composing the reversed-arrow actions reproduces minus the
    second-derivative matrix, blockwise and exactly."""
    t = pm.triangle
    failures = []
    prod = _assemble_beta_bar(pm) @ _assemble_alpha_bar(pm)
    if prod != -t.gamma:
        failures.append("reversed-arrow composition differs from -gamma")
    return BetaAlphaReport(ok=not failures, failures=failures)


def _block_starts(blocks: list[tuple[str, int]]) -> dict[str, int]:
    out = {}
    off = 0
    for name, d in blocks:
        out[name] = off
        off += d
    return out


def construction_iso(pm_from: PremutedRep, pm_to: PremutedRep) -> dict[int, Mat]:
    """Explicit isomorphism between two constructions of the same premutation
    (same module, same triangle choices); identity away from k."""
    if pm_from.k != pm_to.k or pm_from.triangle is not pm_to.triangle:
        # allow equal triangles built separately
        if pm_from.triangle.alpha != pm_to.triangle.alpha or \
           pm_from.triangle.beta != pm_to.triangle.beta or \
           pm_from.triangle.gamma != pm_to.triangle.gamma:
            raise ContextError("constructions come from different triangles")
    t = pm_from.triangle
    fld = pm_from.rep.field
    f_k = _between_constructions(t, pm_from, pm_to, fld)
    iso = {}
    for v in pm_from.rep.qp.quiver.vertices:
        if v == pm_from.k:
            iso[v] = f_k
        else:
            iso[v] = Mat.identity(fld, pm_from.rep.dims[v])
    return iso


def _to_amalgam(t: TrianglePack, pm: PremutedRep, fld) -> Mat:
    """Map pm's space at k into amalgam coordinates."""
    vk = dict(pm.block_dims).get("decoration", 0)
    q1, rg, q2 = t.dim_kergamma_mod_imbeta, t.dim_imgamma, t.dim_keralpha_mod_imgamma
    kind = pm.construction
    if kind == "amalgam":
        return Mat.identity(fld, q1 + rg + q2 + vk)
    if kind == "ker_alpha":
        # ker alpha splits as im gamma + section of the quotient
        ka = t.dim_keralpha
        to_im = coords_in(
            t.im_gamma_in_keralpha,
            Mat.identity(fld, ka) - (t.sigma @ t.pi2),
        )
        return block_matrix(fld, [
            [Mat.identity(fld, q1), Mat.zero(fld, q1, ka), Mat.zero(fld, q1, vk)],
            [Mat.zero(fld, rg, q1), to_im, Mat.zero(fld, rg, vk)],
            [Mat.zero(fld, q2, q1), t.pi2, Mat.zero(fld, q2, vk)],
            [Mat.zero(fld, vk, q1), Mat.zero(fld, vk, ka), Mat.identity(fld, vk)],
        ])
    if kind == "coker_beta":
        c = t.dim_cokerbeta
        rho_bar = t.pi1 @ (t.rho @ t.coker_sec)
        gamma_bar_img = coords_in(t.im_gamma, t.gamma @ t.coker_sec)
        return block_matrix(fld, [
            [rho_bar, Mat.zero(fld, q1, q2), Mat.zero(fld, q1, vk)],
            [gamma_bar_img, Mat.zero(fld, rg, q2), Mat.zero(fld, rg, vk)],
            [Mat.zero(fld, q2, c), Mat.identity(fld, q2), Mat.zero(fld, q2, vk)],
            [Mat.zero(fld, vk, c), Mat.zero(fld, vk, q2), Mat.identity(fld, vk)],
        ])
    if kind == "pushout":
        # compose pushout -> (kergamma/imbeta + keralpha) -> amalgam
        c = t.dim_cokerbeta
        ka = t.dim_keralpha
        pd = pm.pushout_sec.cols
        rho_bar = t.pi1 @ (t.rho @ t.coker_sec)
        f_top = block_matrix(fld, [
            [rho_bar, Mat.zero(fld, q1, ka)],
            [coords_in(t.ker_alpha, t.gamma @ t.coker_sec), Mat.identity(fld, ka)],
        ]) @ pm.pushout_sec
        # then ker alpha part into im gamma + quotient as above
        to_im = coords_in(
            t.im_gamma_in_keralpha,
            Mat.identity(fld, ka) - (t.sigma @ t.pi2),
        )
        top_q1 = f_top.take_rows(list(range(q1)))
        top_ka = f_top.take_rows(list(range(q1, q1 + ka)))
        return block_matrix(fld, [
            [top_q1, Mat.zero(fld, q1, vk)],
            [to_im @ top_ka, Mat.zero(fld, rg, vk)],
            [t.pi2 @ top_ka, Mat.zero(fld, q2, vk)],
            [Mat.zero(fld, vk, pd), Mat.identity(fld, vk)],
        ])
    raise InvariantError(f"unknown construction {kind!r}")


def _from_amalgam(t: TrianglePack, pm: PremutedRep, fld) -> Mat:
    """Map amalgam coordinates onto pm's space at k."""
    vk = dict(pm.block_dims).get("decoration", 0)
    q1, rg, q2 = t.dim_kergamma_mod_imbeta, t.dim_imgamma, t.dim_keralpha_mod_imgamma
    kind = pm.construction
    if kind == "amalgam":
        return Mat.identity(fld, q1 + rg + q2 + vk)
    if kind == "ker_alpha":
        ka = t.dim_keralpha
        return block_matrix(fld, [
            [Mat.identity(fld, q1), Mat.zero(fld, q1, rg), Mat.zero(fld, q1, q2), Mat.zero(fld, q1, vk)],
            [Mat.zero(fld, ka, q1), t.im_gamma_in_keralpha, t.sigma, Mat.zero(fld, ka, vk)],
            [Mat.zero(fld, vk, q1), Mat.zero(fld, vk, rg), Mat.zero(fld, vk, q2), Mat.identity(fld, vk)],
        ])
    if kind == "coker_beta":
        c = t.dim_cokerbeta
        iota_bar = t.coker_p @ (t.ker_gamma @ t.s1)
        ps = t.coker_p @ t.s_section
        return block_matrix(fld, [
            [iota_bar, ps, Mat.zero(fld, c, q2), Mat.zero(fld, c, vk)],
            [Mat.zero(fld, q2, q1), Mat.zero(fld, q2, rg), Mat.identity(fld, q2), Mat.zero(fld, q2, vk)],
            [Mat.zero(fld, vk, q1), Mat.zero(fld, vk, rg), Mat.zero(fld, vk, q2), Mat.identity(fld, vk)],
        ])
    if kind == "pushout":
        c = t.dim_cokerbeta
        ka = t.dim_keralpha
        pd = pm.pushout_proj.rows
        qc = pm.pushout_proj.take_cols(list(range(c)))
        jmap = pm.pushout_proj.take_cols(list(range(c, c + ka)))
        iota_bar = t.coker_p @ (t.ker_gamma @ t.s1)
        return block_matrix(fld, [
            [qc @ iota_bar, jmap @ t.im_gamma_in_keralpha, jmap @ t.sigma, Mat.zero(fld, pd, vk)],
            [Mat.zero(fld, vk, q1), Mat.zero(fld, vk, rg), Mat.zero(fld, vk, q2), Mat.identity(fld, vk)],
        ])
    raise InvariantError(f"unknown construction {kind!r}")


def _between_constructions(t: TrianglePack, pm_from: PremutedRep, pm_to: PremutedRep, fld) -> Mat:
    return _from_amalgam(t, pm_to, fld) @ _to_amalgam(t, pm_from, fld)


def is_intertwiner(m_from: DecRep, m_to: DecRep, f: dict[int, Mat]) -> bool:
    q = m_from.qp.quiver
    for a in q.arrows:
        lhs = f[a.head] @ m_from.maps[a.id]
        rhs = m_to.maps[a.id] @ f[a.tail]
        if lhs != rhs:
            return False
    return True


@dataclass
class FourWayReport:
    ok: bool
    failures: list[str]
    isos: dict[tuple[str, str], dict[int, Mat]]


def constructions_agree(rep: DecRep, k: int) -> FourWayReport:
    """Build all four premutations over one shared triangle and verify the
    explicit pairwise isomorphisms between them."""
    t = build_triangle(rep, k)
    pms = {}
    for kind in CONSTRUCTIONS:
        pms[kind] = premutate_rep(
            rep, k, kind, require_valid=(kind == CONSTRUCTIONS[0]), triangle=t
        )
    failures = []
    isos = {}
    for kind1 in CONSTRUCTIONS:
        for kind2 in CONSTRUCTIONS:
            if kind1 >= kind2:
                continue
            f = construction_iso(pms[kind1], pms[kind2])
            isos[(kind1, kind2)] = f
            if not is_intertwiner(pms[kind1].rep, pms[kind2].rep, f):
                failures.append(f"{kind1}->{kind2}: not an intertwiner")
            if not all(m.is_invertible() for m in f.values()):
                failures.append(f"{kind1}->{kind2}: not invertible")
    return FourWayReport(ok=not failures, failures=failures, isos=isos)


def pullback_reduction(prem: DecRep, phi: ArrowSubstitution, reduced: QP) -> DecRep:
    """Give the premutated module its reduced-part structure: each reduced
    arrow acts through its image under the splitting substitution."""
    if phi.target_space.quiver != prem.qp.quiver:
        raise ContextError("splitting does not match the premutated quiver")
    idx = prem.nilpotency_index()
    if prem.qp.order < idx:
        raise TruncationTooSmall(
            f"jet order {prem.qp.order} < nilpotency index {idx}"
        )
    maps = {}
    for c in reduced.quiver.arrows:
        img = phi.images[c.id]
        maps[c.id] = component_action(prem, img, c.head, c.tail)
    out = DecRep(reduced, {v: prem.dims[v] for v in reduced.quiver.vertices}, maps,
                 {v: prem.dec_dims[v] for v in reduced.quiver.vertices})
    rpt = check_module(out)
    if not rpt.ok:
        raise CertificateError(f"reduced module invalid: {rpt.failures}")
    return out


def mutate_rep(rep: DecRep, k: int, construction: str = "ker_alpha") -> DecRep:
    """Full mutation of a decorated representation in direction k."""
    reduced, phi, _ = mutate_qp(rep.qp, k)
    pm = premutate_rep(rep, k, construction)
    return pullback_reduction(pm.rep, phi, reduced)


# ---------------------------------------------------------------------------
# isomorphism transport (mutation preserves isomorphism, constructively)
# ---------------------------------------------------------------------------

def _block_diag(fld, mats: list[Mat]) -> Mat:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = Mat.zero(fld, rows, cols)
    ro = co = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out.data[ro + i][co + j] = m.data[i][j]
        ro += m.rows
        co += m.cols
    return out


def transport_iso(
    m_from: DecRep,
    m_to: DecRep,
    f: dict[int, Mat],
    k: int,
) -> tuple[PremutedRep, PremutedRep, dict[int, Mat]]:
    """Given an isomorphism f between valid modules, build the induced
    isomorphism between their premutations (coker_beta construction) and
    verify it.  Decoration blocks transport by the induced map on the
    outgoing-kernel quotient."""
    if not m_from.same_context(m_to):
        raise ContextError("modules live over different QPs")
    if not is_intertwiner(m_from, m_to, f):
        raise CertificateError("given map is not an intertwiner")
    if not all(m.is_invertible() for m in f.values()):
        raise CertificateError("given map is not invertible")
    fld = m_from.field
    pm_m = premutate_rep(m_from, k, "coker_beta")
    pm_n = premutate_rep(m_to, k, "coker_beta")
    tm, tn = pm_m.triangle, pm_n.triangle

    f_in = _block_diag(fld, [f[m_from.qp.quiver.tail(a)] for a in tm.in_arrows]) \
        if tm.in_arrows else Mat.zero(fld, 0, 0)
    f_out = _block_diag(fld, [f[m_from.qp.quiver.head(b)] for b in tm.out_arrows]) \
        if tm.out_arrows else Mat.zero(fld, 0, 0)

    # induced maps on coker beta and on ker alpha / im gamma
    f_out_bar = tn.coker_p @ (f_out @ tm.coker_sec)
    fk_keralpha = coords_in(tn.ker_alpha, f_in @ tm.ker_alpha)
    f_in_bar = tn.pi2 @ (fk_keralpha @ tm.sigma)

    # epsilon corrects the section mismatch through im gamma
    lift_m = f_in @ (tm.ker_alpha @ tm.sigma)
    lift_n = tn.ker_alpha @ (tn.sigma @ f_in_bar)
    diff = lift_m - lift_n
    diff_in_img = coords_in(tn.im_gamma, diff)
    eps = tn.coker_p @ (tn.s_section @ diff_in_img)

    vk = m_from.dec_dims[k]
    g_k = Mat.identity(fld, vk)
    c_m, q2_m = tm.dim_cokerbeta, tm.dim_keralpha_mod_imgamma
    c_n, q2_n = tn.dim_cokerbeta, tn.dim_keralpha_mod_imgamma
    fk = block_matrix(fld, [
        [f_out_bar, eps, Mat.zero(fld, c_n, vk)],
        [Mat.zero(fld, q2_n, c_m), f_in_bar, Mat.zero(fld, q2_n, vk)],
        [Mat.zero(fld, vk, c_m), Mat.zero(fld, vk, q2_m), g_k],
    ])
    f_tilde = {v: (fk if v == k else f[v]) for v in m_from.qp.quiver.vertices}
    if not is_intertwiner(pm_m.rep, pm_n.rep, f_tilde):
        raise CertificateError("transported map fails to intertwine")
    if not all(m.is_invertible() for m in f_tilde.values()):
        raise CertificateError("transported map is not invertible")
    return pm_m, pm_n, f_tilde


# ---------------------------------------------------------------------------
# double premutation and the pullback to the original QP
# ---------------------------------------------------------------------------

def double_premutation_equiv(qp: QP, k: int):
    """The 2-cycle companion of a double premutation: the trivial QP (C, T)
    with C spanned by the composite arrows of both rounds, plus the
    sign-twisted embedding of the original arrows (c -> +/- c**)."""
    q = qp.quiver
    if not q.is_2_acyclic():
        raise MutationNotDefined("double-premutation companion needs a 2-acyclic quiver")
    qpt = premutate_qp(qp, k)
    qptt = premutate_qp(qpt, k)
    space2 = qptt.space
    ins = [a.id for a in q.arrows_into(k)]
    outs = [b.id for b in q.arrows_out_of(k)]
    c_ids = set()
    t_jet = space2.zero()
    for b in outs:
        for a in ins:
            round1 = composite_name(b, a)
            round2 = composite_name(star_name(a), star_name(b))
            c_ids.add(round1)
            c_ids.add(round2)
            t_jet = t_jet + space2.path((round1, round2))
    c_quiver = qptt.quiver.restricted_to_arrows(c_ids)
    t_pot = cyclic_normalize(t_jet)

    images = {}
    for a in q.arrows:
        if a.head == k or a.tail == k:
            name = star_name(star_name(a.id))
        else:
            name = a.id
        img = space2.arrow(name)
        if a.tail == k:
            img = -img
        images[a.id] = img
    hj = ArrowSubstitution(q, space2, images)
    return hj, (c_quiver, t_pot), qptt


def double_premutation_potential_identity(qp: QP, k: int) -> bool:
    """Check that the doubly premutated potential is cyclically equivalent to
    the bracketed potential plus the companion terms (composite 2-cycles and
    their double-star corrections)."""
    from .qp import bracket_substitute

    q = qp.quiver
    qpt = premutate_qp(qp, k)
    qptt = premutate_qp(qpt, k)
    space2 = qptt.space
    bracketed = bracket_substitute(qp.potential, k, space2)
    rest = space2.zero()
    for b in q.arrows_out_of(k):
        for a in q.arrows_into(k):
            r1 = composite_name(b.id, a.id)
            r2 = composite_name(star_name(a.id), star_name(b.id))
            rest = rest + space2.path((r1, r2))
            rest = rest + space2.path(
                (star_name(star_name(b.id)), star_name(star_name(a.id)), r2)
            )
    expected = bracketed + cyclic_normalize(rest)
    return cyclically_equivalent(qptt.potential.jet, expected.jet)


def involution_pullback(rep: DecRep, k: int, construction: str = "ker_alpha") -> DecRep:
    """Premutate twice, then pull the result back to the original QP along
    the sign-twisted embedding (original arrows act as their double-starred
    descendants, with a sign on arrows leaving k)."""
    qp = rep.qp
    hj, _, _ = double_premutation_equiv(qp, k)
    pm1 = premutate_rep(rep, k, construction)
    pm2 = premutate_rep(pm1.rep, k, construction)
    rep2 = pm2.rep
    maps = {}
    for a in qp.quiver.arrows:
        img = hj.images[a.id]
        ((p, c),) = img.terms.items()
        maps[a.id] = rep2.maps[p.arrows[0]].scale(c)
    out = DecRep(
        qp,
        {v: rep2.dims[v] for v in qp.quiver.vertices},
        maps,
        {v: rep2.dec_dims[v] for v in qp.quiver.vertices},
    )
    rpt = check_module(out)
    if not rpt.ok:
        raise CertificateError(f"double-premutation pullback invalid: {rpt.failures}")
    return out

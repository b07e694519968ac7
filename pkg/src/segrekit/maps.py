"""Holomorphic Segre preserving maps between complexified hypersurfaces.

A map is ``H(z, w, chi, tau) = (f(z, w), g(z, w), ft(chi, tau), gt(chi, tau))``.
It sends the complexification of M into that of M' exactly when
``g - Q'(f, ft, gt)`` vanishes on the graph ``w = Q(z, chi, tau)``; since
``w - Q`` is monic of degree one in ``w``, that is the same as divisibility by
``w - Q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .hypersurface import NormalHypersurface
from .invariants import (
    classify,
    is_class_C,
    is_finite_type,
    is_finitely_nondegenerate,
    is_holomorphically_nondegenerate,
)
from .scalar import GaussianRational
from .series import (
    DEFAULT_ORDER,
    SeriesError,
    SeriesMatrix,
    TruncatedSeries,
    VarSpace,
    constant_rank,
    generic_rank,
    jacobian,
)
from .verdict import Status, Verdict, all_of, any_of, negate


class AuditFailure(AssertionError):
    """Proved hypotheses with a refuted conclusion; would contradict a published theorem."""


@dataclass
class SegreMap:
    f: list[TruncatedSeries]
    g: TruncatedSeries
    ft: list[TruncatedSeries]
    gt: TruncatedSeries
    name: str = "H"

    def __post_init__(self) -> None:
        space = self.g.space
        n = space.n
        if len(self.f) != n or len(self.ft) != n:
            raise SeriesError(f"expected {n} components in f and ft")
        for label, comp in self.named_components():
            if comp.space != space:
                raise SeriesError(f"{label} lives in a different space")
            if not comp.constant_term().is_zero():
                raise SeriesError(f"{label} does not vanish at the origin")
        hol, anti = set(space.holomorphic_block), set(space.antiholomorphic_block)
        for label, comp in self.named_components():
            block = hol if label[0] in "fg" and not label.startswith(("ft", "gt")) else anti
            if not comp.depends_only_on(block):
                raise SeriesError(f"{label} mixes (z, w) and (chi, tau)")

    @classmethod
    def from_text(cls, n: int, f: list[str], g: str, ft: list[str], gt: str,
                  order: int = DEFAULT_ORDER, name: str = "H") -> SegreMap:
        p = lambda t: TruncatedSeries.parse(t, n, order)  # noqa: E731
        return cls([p(t) for t in f], p(g), [p(t) for t in ft], p(gt), name)

    @property
    def space(self) -> VarSpace:
        return self.g.space

    @property
    def n(self) -> int:
        return self.space.n

    def named_components(self):
        yield from ((f"f{j}", c) for j, c in enumerate(self.f, 1))
        yield "g", self.g
        yield from ((f"ft{j}", c) for j, c in enumerate(self.ft, 1))
        yield "gt", self.gt

    @property
    def order(self) -> int:
        comps = [c for _, c in self.named_components()]
        loose = [c.order for c in comps if not c.exact]
        return min(loose) if loose else max(c.order for c in comps)

    def conjugate(self) -> SegreMap:
        """``(bar ft, bar gt, bar f, bar g)``: the same map with the two sides swapped."""
        return SegreMap([c.conjugate_bar() for c in self.ft], self.gt.conjugate_bar(),
                        [c.conjugate_bar() for c in self.f], self.g.conjugate_bar(), self.name + "_bar")

    def normality_check(self) -> Verdict:
        """``g(z, 0) = gt(chi, 0) = 0`` and ``g_w(0) = gt_tau(0)``."""
        space = self.space
        g0 = self.g.substitute({space.w: 0})
        if not g0.is_zero():
            return Verdict.refuted(g0.first_monomial(), g0.order, identity="g(z,0)")
        gt0 = self.gt.substitute({space.tau: 0})
        if not gt0.is_zero():
            return Verdict.refuted(gt0.first_monomial(), gt0.order, identity="gt(chi,0)")
        gw, gtt = transversal_derivatives(self)
        if gw != gtt:
            return Verdict.refuted(f"g_w(0)={gw}, gt_tau(0)={gtt}", self.order)
        return Verdict.proved(order=self.order)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for _, c in self.named_components()) + ")"


def identity_map(n: int, order: int = DEFAULT_ORDER) -> SegreMap:
    space = VarSpace(n)
    v = lambda k: TruncatedSeries.var(space, k, order)  # noqa: E731
    return SegreMap([v(space.z(j)) for j in range(1, n + 1)], v(space.w),
                    [v(space.chi(j)) for j in range(1, n + 1)], v(space.tau), "identity")


# ---------------------------------------------------------------------------
# the membership identity


def target_composition(Mp: NormalHypersurface, H: SegreMap, transversal: TruncatedSeries | None = None) -> TruncatedSeries:
    """``Q'(f, ft, gt)``, or ``Q'(f, ft, transversal)`` when a replacement is given."""
    space = Mp.space
    bindings = {space.z(j): H.f[j - 1] for j in range(1, space.n + 1)}
    bindings.update({space.chi(j): H.ft[j - 1] for j in range(1, space.n + 1)})
    bindings[space.tau] = H.gt if transversal is None else transversal
    return Mp.Q.substitute(bindings)


def membership_residual(M: NormalHypersurface, Mp: NormalHypersurface, H: SegreMap) -> TruncatedSeries:
    """``g - Q'(f, ft, gt)`` restricted to ``w = Q(z, chi, tau)``."""
    _check_dims(M, Mp, H)
    R = H.g - target_composition(Mp, H)
    return R.substitute({M.space.w: M.Q})


def verify_hspm(M: NormalHypersurface, Mp: NormalHypersurface, H: SegreMap) -> Verdict:
    residual = membership_residual(M, Mp, H)
    if residual.is_zero():
        return Verdict.proved(order=residual.order, exact=residual.exact)
    return Verdict.refuted(residual.first_monomial(), residual.order)


def _check_dims(M, Mp, H) -> None:
    if not (M.space == Mp.space == H.space):
        raise SeriesError(f"dimension mismatch: n={M.n}, n'={Mp.n}, map n={H.n}")


# ---------------------------------------------------------------------------
# map-level properties


def transversal_derivatives(H: SegreMap) -> tuple[GaussianRational, GaussianRational]:
    space = H.space
    return H.g.derive(space.w).constant_term(), H.gt.derive(space.tau).constant_term()


def is_segre_transversal(H: SegreMap) -> Verdict:
    """``g_w(0) != 0``; exact, no truncation involved."""
    gw, gtt = transversal_derivatives(H)
    data = dict(g_w0=str(gw), gt_tau0=str(gtt), consistent=gw == gtt)
    if gw.is_zero():
        return Verdict.refuted(f"g_w(0)={gw}", None, **data)
    return Verdict.proved(f"g_w(0)={gw}", None, **data)


def restricted_jacobians(H: SegreMap) -> tuple[SeriesMatrix, SeriesMatrix]:
    """``f_z(z, 0)`` and ``ft_chi(chi, 0)``."""
    space = H.space
    fz = jacobian(H.f, space.z_vars).substitute({space.w: 0})
    ftc = jacobian(H.ft, space.chi_vars).substitute({space.tau: 0})
    return fz, ftc


def restricted_determinants(H: SegreMap) -> tuple[TruncatedSeries, TruncatedSeries]:
    fz, ftc = restricted_jacobians(H)
    return fz.det(), ftc.det()


def _nonvanishing(s: TruncatedSeries, label: str) -> Verdict:
    if s.is_zero():
        if s.exact:
            return Verdict.refuted("0", s.order, value=str(s), identically_zero=True, what=label)
        return Verdict.unknown(s.order, value="0", what=label)
    return Verdict.proved(s.first_monomial(), s.order, value=str(s), what=label)


@dataclass
class SegreNondegeneracy:
    kind: str
    det_fz: Verdict
    det_ftchi: Verdict

    def to_dict(self) -> dict:
        return {"kind": self.kind, "det_fz": self.det_fz.to_dict(), "det_ftchi": self.det_ftchi.to_dict()}


def segre_nondegeneracy(H: SegreMap) -> SegreNondegeneracy:
    """``total`` if both restricted determinants are nonzero, ``partial`` if one is, else ``neither``.

    A determinant that vanishes only up to the truncation order counts as
    not witnessed; ``neither``/``partial`` are then themselves up to that order.
    """
    dz, dc = restricted_determinants(H)
    a, b = _nonvanishing(dz, "det f_z(z,0)"), _nonvanishing(dc, "det ft_chi(chi,0)")
    count = a.is_proved + b.is_proved
    kind = {2: "total", 1: "partial", 0: "neither"}[count]
    return SegreNondegeneracy(kind, a, b)


def is_totally_segre_nondegenerate(H: SegreMap) -> Verdict:
    nd = segre_nondegeneracy(H)
    return all_of(nd.det_fz, nd.det_ftchi)


def _vanishes(s: TruncatedSeries, label: str) -> Verdict:
    if s.is_zero():
        return Verdict.proved(None, s.order, exact=s.exact, what=label)
    return Verdict.refuted(s.first_monomial(), s.order, what=label)


def is_transversally_null(H: SegreMap) -> Verdict:
    """``g = 0`` and ``gt = 0`` (up to the truncation order)."""
    a = _vanishes(H.g, "g")
    if not a.is_proved:
        return a
    return _vanishes(H.gt, "gt")


def maps_into_target(Mp: NormalHypersurface, H: SegreMap) -> Verdict:
    """``Q'(f, ft, 0) = 0``: the whole image lies in the target complexification."""
    comp = target_composition(Mp, H, transversal=TruncatedSeries.zero(Mp.space, Mp.order))
    return _vanishes(comp, "Q'(f,ft,0)")


def det_conjugate_relation(H: SegreMap) -> Verdict:
    """Lowest homogeneous parts ``p`` of det f_z(z,0) and ``q`` of det ft_chi(chi,0) satisfy ``p = c * qbar``."""
    dz, dc = restricted_determinants(H)
    if dz.is_zero() or dc.is_zero():
        which = "det f_z(z,0)" if dz.is_zero() else "det ft_chi(chi,0)"
        raise SeriesError(f"{which} vanishes up to order; the relation needs both nonzero")
    j0, p = dz.lowest_homogeneous()
    k0, q = dc.lowest_homogeneous()
    qbar = q.conjugate_bar()
    data = dict(j0=j0, k0=k0, p=str(p), qbar=str(qbar))
    if j0 != k0:
        return Verdict.refuted(f"degrees {j0} != {k0}", dz.order, **data)
    keys = sorted(set(p.terms) | set(qbar.terms), key=lambda k: (dz.space.degree(k), -k))
    first = keys[0]
    if first not in p.terms or first not in qbar.terms:
        return Verdict.refuted(_pair(dz.space, first, p, qbar), dz.order, **data)
    c = p.terms[first] / qbar.terms[first]
    for key in keys:
        if p.coefficient(key) != c * qbar.coefficient(key):
            return Verdict.refuted(_pair(dz.space, key, p, qbar), dz.order, **data)
    return Verdict.proved(f"c={c}", dz.order, c=str(c), **data)


def _pair(space, key, p, qbar) -> str:
    mono = space.monomial_str(key)
    return f"{mono}: p has {p.coefficient(key)}, qbar has {qbar.coefficient(key)}"


def order_match(H: SegreMap) -> Verdict:
    """In C^2: order of vanishing of f(z,0) equals that of ft(chi,0)."""
    if H.n != 1:
        raise SeriesError("order_match is defined for n = 1")
    space = H.space
    a = H.f[0].substitute({space.w: 0}).order_of_vanishing()
    b = H.ft[0].substitute({space.tau: 0}).order_of_vanishing()
    if a is None or b is None:
        return Verdict.unknown(H.order, orders=[a, b])
    if a == b:
        return Verdict.proved(f"{a}={b}", H.order, orders=[a, b])
    return Verdict.refuted(f"{a}!={b}", H.order, orders=[a, b])


def jacobian_blocks(H: SegreMap) -> tuple[SeriesMatrix, SeriesMatrix]:
    space = H.space
    return (jacobian(H.f + [H.g], space.holomorphic_block),
            jacobian(H.ft + [H.gt], space.antiholomorphic_block))


def jacobian_rank_at_0(H: SegreMap) -> int:
    """Rank of the constant ``(2n+2) x (2n+2)`` Jacobian at the origin."""
    total = 0
    for block in jacobian_blocks(H):
        total += constant_rank(block.constant_values())[0]
    return total


@dataclass
class GenericJacobianRank:
    rank: int
    exact: bool
    full: Verdict
    blocks: tuple = ()

    def to_dict(self) -> dict:
        return {"rank_lower_bound": self.rank, "exact": self.exact, "full": self.full.to_dict()}


def jacobian_generic_rank(H: SegreMap, seed: int = 0) -> GenericJacobianRank:
    """Generic rank of the block-diagonal Jacobian; ``full`` is whether det is not identically 0."""
    a, b = (generic_rank(m, seed=seed) for m in jacobian_blocks(H))
    size = H.n + 1
    full = all_of(a.at_least(size), b.at_least(size))
    return GenericJacobianRank(a.lower + b.lower, a.exact and b.exact, full, (a, b))


def jacobian_determinant(H: SegreMap) -> TruncatedSeries:
    hz, hzeta = jacobian_blocks(H)
    return hz.det() * hzeta.det()


# ---------------------------------------------------------------------------
# the audit


@dataclass
class AuditEntry:
    name: str
    hypotheses: Verdict
    conclusion: Verdict | None = None
    branch: str = "n/a"
    witnesses: dict = field(default_factory=dict)
    note: str = ""

    @property
    def outcome(self) -> str:
        if self.hypotheses.is_proved:
            if self.conclusion is None or self.conclusion.is_unknown:
                return "conclusion_unknown"
            return "confirmed" if self.conclusion.is_proved else "contradicted"
        return "hypotheses_not_met"

    def to_dict(self) -> dict:
        out = {"outcome": self.outcome, "hypotheses": self.hypotheses.to_dict(), "branch": self.branch}
        if self.conclusion is not None:
            out["conclusion"] = self.conclusion.to_dict()
        if self.witnesses:
            out["witnesses"] = {k: (v.to_dict() if hasattr(v, "to_dict") else v) for k, v in self.witnesses.items()}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class AuditReport:
    entries: dict[str, AuditEntry]

    def __getitem__(self, key: str) -> AuditEntry:
        return self.entries[key]

    def to_dict(self) -> dict:
        return {k: e.to_dict() for k, e in self.entries.items()}


class _Facts:
    """Lazily computed properties shared by the audit entries."""

    def __init__(self, M, Mp, H, seed):
        self.M, self.Mp, self.H, self.seed = M, Mp, H, seed
        self._cache = {}

    def get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def ft(self, side):
        X = self.M if side == "M" else self.Mp
        return self.get(("ft", side), lambda: is_finite_type(X))

    def hol(self, side):
        X = self.M if side == "M" else self.Mp
        return self.get(("hol", side), lambda: is_holomorphically_nondegenerate(X, seed=self.seed))

    def cc(self, side):
        X = self.M if side == "M" else self.Mp
        return self.get(("cc", side), lambda: is_class_C(X, seed=self.seed))

    def fnd(self, side):
        X = self.M if side == "M" else self.Mp
        return self.get(("fnd", side), lambda: is_finitely_nondegenerate(X))

    def infinite_type(self, side):
        X = self.M if side == "M" else self.Mp
        return self.get(("inf", side), lambda: _vanishes(X.q_slice("tau=0"), "Q(z,chi,0)"))

    @property
    def transversal(self):
        return self.get("st", lambda: is_segre_transversal(self.H))

    @property
    def nondeg(self):
        return self.get("nd", lambda: segre_nondegeneracy(self.H))

    @property
    def total(self):
        return self.get("tot", lambda: all_of(self.nondeg.det_fz, self.nondeg.det_ftchi))

    @property
    def null(self):
        return self.get("null", lambda: is_transversally_null(self.H))

    @property
    def into(self):
        return self.get("into", lambda: maps_into_target(self.Mp, self.H))

    @property
    def generic(self):
        return self.get("gen", lambda: jacobian_generic_rank(self.H, self.seed))

    @property
    def g_nonzero(self):
        return self.get("gnz", lambda: negate(_vanishes(self.H.g, "g")))

    @property
    def gt_nonzero(self):
        return self.get("gtnz", lambda: negate(_vanishes(self.H.gt, "gt")))

    @property
    def rank0(self):
        return self.get("r0", lambda: jacobian_rank_at_0(self.H))


def _dichotomy(first: Verdict, second: Verdict) -> tuple[Verdict, str]:
    v = any_of(first, second)
    if first.is_proved:
        return v, "(i)"
    if second.is_proved:
        return v, "(ii)"
    return v, "none"


def audit(M: NormalHypersurface, Mp: NormalHypersurface, H: SegreMap, seed: int = 0,
          strict: bool = True) -> AuditReport:
    """Evaluate every theorem's hypotheses on the instance and check its conclusion where they hold.

    A theorem whose hypotheses are proved but whose conclusion is refuted raises
    ``AuditFailure`` (when ``strict``) with the full witness dump.
    """
    v = verify_hspm(M, Mp, H)
    if not v.is_proved:
        raise SeriesError(f"not a Segre preserving map from {M.name} to {Mp.name}: {v.witness} survives")
    F = _Facts(M, Mp, H, seed)
    n = H.n
    full_rank_det = lambda: F.generic.full  # noqa: E731
    branch_i = lambda: all_of(F.null, F.into)  # noqa: E731
    entries: dict[str, AuditEntry] = {}

    # finite-type target + total nondegeneracy => transversal
    hyp = all_of(F.ft("Mp"), F.total)
    entries["total_implies_transversal"] = AuditEntry(
        "total_implies_transversal", hyp, F.transversal,
        witnesses={"target_finite_type": F.ft("Mp"), "total": F.total, "transversal": F.transversal},
    )

    # holomorphically nondegenerate source => null-into-target or generic biholomorphism
    hyp = F.hol("M")
    concl, branch = _dichotomy(branch_i(), all_of(full_rank_det(), F.hol("Mp")))
    entries["hol_nondeg_dichotomy"] = AuditEntry(
        "hol_nondeg_dichotomy", hyp, concl, branch if hyp.is_proved else "n/a",
        witnesses={"source_hol_nondeg": hyp, "transversally_null": F.null, "maps_into_target": F.into,
                   "generic_jacobian": F.generic, "target_hol_nondeg": F.hol("Mp")},
    )

    # class C source
    hyp = F.cc("M")
    second = all_of(F.transversal, F.total, full_rank_det(), F.cc("Mp"))
    concl, branch = _dichotomy(branch_i(), second)
    entries["class_C_dichotomy"] = AuditEntry(
        "class_C_dichotomy", hyp, concl, branch if hyp.is_proved else "n/a",
        witnesses={"source_class_C": hyp, "transversally_null": F.null, "transversal": F.transversal,
                   "total": F.total, "generic_jacobian": F.generic, "target_class_C": F.cc("Mp")},
    )

    # finitely nondegenerate source => null or biholomorphism at 0
    hyp = F.fnd("M")
    fz0, ftc0 = _jacobians_at_zero(H)
    second = all_of(F.transversal, fz0, ftc0, F.fnd("Mp"))
    concl, branch = _dichotomy(branch_i(), second)
    entries["fin_nondeg_dichotomy"] = AuditEntry(
        "fin_nondeg_dichotomy", hyp, concl, branch if hyp.is_proved else "n/a",
        witnesses={"source_fin_nondeg": hyp, "transversally_null": F.null, "transversal": F.transversal,
                   "det_fz(0)": fz0, "det_ftchi(0)": ftc0, "target_fin_nondeg": F.fnd("Mp"),
                   "rank_at_0": F.rank0},
    )

    # finitely nondegenerate target + total => lowest determinant parts conjugate-proportional
    hyp = all_of(F.fnd("Mp"), F.total)
    relation = det_conjugate_relation(H) if F.total.is_proved else None
    entries["determinant_relation"] = AuditEntry(
        "determinant_relation", hyp, relation,
        witnesses={"target_fin_nondeg": F.fnd("Mp"), "total": F.total},
        note="" if hyp.is_proved or relation is None else f"relation checked anyway: {relation.status.value}",
    )

    # C^2, finite-type target: (i) total <=> (ii) finite-type source and not null <=> (iii) finite-type source and transversal
    if n == 1:
        hyp = F.ft("Mp")
        c1 = F.total
        c2 = all_of(F.ft("M"), negate(F.null))
        c3 = all_of(F.ft("M"), F.transversal)
        equiv = _equivalent(c1, c2, c3)
        extra = {}
        concl = equiv
        if equiv.is_proved and c1.is_proved:
            om = order_match(H)
            extra["order_match"] = om
            concl = all_of(equiv, om)
            if M.Q == Mp.Q:
                r0 = F.rank0
                extra["rank_at_0"] = r0
                bih = Verdict.proved(f"rank {r0}") if r0 == 2 * n + 2 else Verdict.refuted(f"rank {r0}")
                concl = all_of(concl, bih)
        entries["plane_equivalence"] = AuditEntry(
            "plane_equivalence", hyp, concl, "equivalent" if equiv.is_proved else "n/a",
            witnesses={"(i)": c1, "(ii)": c2, "(iii)": c3, **extra},
        )
    else:
        entries["plane_equivalence"] = AuditEntry(
            "plane_equivalence", Verdict.refuted("n != 1"), None, note="stated for hypersurfaces in C^2")

    # finite-type source into infinite-type target => transversally null
    hyp = all_of(F.ft("M"), F.infinite_type("Mp"))
    entries["infinite_type_target_null"] = AuditEntry(
        "infinite_type_target_null", hyp, F.null,
        witnesses={"source_finite_type": F.ft("M"), "target_infinite_type": F.infinite_type("Mp")},
    )

    # class C source: g != 0 => det ft_chi(chi,0) != 0, and gt != 0 => det f_z(z,0) != 0
    cc = F.cc("M")
    parts = []
    hyp_parts = []
    if F.g_nonzero.is_proved:
        parts.append(F.nondeg.det_ftchi)
        hyp_parts.append(all_of(cc, F.g_nonzero))
    if F.gt_nonzero.is_proved:
        parts.append(F.nondeg.det_fz)
        hyp_parts.append(all_of(cc, F.gt_nonzero))
    if parts:
        hyp = all_of(*hyp_parts)
        concl = all_of(*parts)
    else:
        hyp, concl = Verdict.refuted("g = gt = 0 up to order"), None
    entries["nonzero_g_forces_determinant"] = AuditEntry(
        "nonzero_g_forces_determinant", hyp, concl,
        witnesses={"source_class_C": cc, "g_nonzero": F.g_nonzero, "gt_nonzero": F.gt_nonzero},
    )

    report = AuditReport(entries)
    if strict:
        bad = [e for e in entries.values() if e.outcome == "contradicted"]
        if bad:
            import json

            raise AuditFailure(
                "hypotheses proved but conclusion refuted for "
                + ", ".join(e.name for e in bad)
                + "\n" + json.dumps({e.name: e.to_dict() for e in bad}, indent=2)
                + f"\nsource: {M}\ntarget: {Mp}\nmap: {H}"
            )
    return report


def _jacobians_at_zero(H: SegreMap) -> tuple[Verdict, Verdict]:
    space = H.space
    fz = jacobian(H.f, space.z_vars).substitute({space.w: 0})
    ftc = jacobian(H.ft, space.chi_vars).substitute({space.tau: 0})
    out = []
    for label, m in (("det f_z(0)", fz), ("det ft_chi(0)", ftc)):
        d = m.det().constant_term()
        out.append(Verdict.proved(f"{label}={d}") if not d.is_zero() else Verdict.refuted(f"{label}=0"))
    return out[0], out[1]


def _equivalent(*vs: Verdict) -> Verdict:
    if all(v.is_proved for v in vs) or all(v.is_refuted for v in vs):
        return Verdict.proved(",".join(v.status.value for v in vs))
    if any(v.is_proved for v in vs) and any(v.is_refuted for v in vs):
        return Verdict.refuted(",".join(v.status.value for v in vs))
    return Verdict.unknown(min((v.order for v in vs if v.order is not None), default=0))

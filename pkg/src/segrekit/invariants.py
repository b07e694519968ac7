"""Nondegeneracy hierarchy of a hypersurface in normal coordinates.

finite type, holomorphic nondegeneracy, class C, essential finiteness and
finite nondegeneracy are all phrased through the jet map
``chi -> (Q_{z^alpha}(0, chi, tau))_{|alpha| <= K'}``. Each check searches
``K' = 1, 2, ...`` and returns a three-valued verdict: a property that needs
"some K'" is PROVED by an exact witness and otherwise UNKNOWN up to the order
searched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import factorial, prod

from .hypersurface import NormalHypersurface
from .scalar import GaussianRational
from .series import SeriesMatrix, TruncatedSeries, constant_rank, generic_rank, jacobian
from .verdict import Verdict

MAX_JET_ORDER = 6


class ChainViolation(RuntimeError):
    """A proved property failed to imply a weaker one: a bug, never a report."""


def multi_indices(n: int, max_degree: int) -> list[tuple[int, ...]]:
    """All ``alpha`` in N^n with ``|alpha| <= max_degree``, graded then lex-descending."""
    out = []
    for d in range(max_degree + 1):
        level = []
        for combo in combinations_with_replacement(range(n), d):
            alpha = [0] * n
            for j in combo:
                alpha[j] += 1
            level.append(tuple(alpha))
        out.extend(sorted(set(level), reverse=True))
    return out


def jet_schedule(M: NormalHypersurface, max_jet: int | None = None) -> range:
    top = min(M.order, MAX_JET_ORDER) if max_jet is None else min(M.order, max_jet)
    return range(1, top + 1)


# ---------------------------------------------------------------------------
# jet maps


@dataclass
class JetMap:
    hypersurface: NormalHypersurface
    order: int
    variant: str
    alphas: list[tuple[int, ...]]
    components: list[TruncatedSeries]

    def jacobian(self) -> SeriesMatrix:
        space = self.hypersurface.space
        variables = space.chi_vars + ([space.tau] if self.variant == "full" else [])
        return jacobian(self.components, variables)

    def nonzero(self) -> list[tuple[tuple[int, ...], TruncatedSeries]]:
        return [(a, c) for a, c in zip(self.alphas, self.components) if not c.is_zero()]


def z_derivative_at_zero(Q: TruncatedSeries, alpha: tuple[int, ...], tau_zero: bool = False) -> TruncatedSeries:
    """``Q_{z^alpha}(0, chi, tau)`` read straight off the coefficients."""
    space = Q.space
    scale = prod(factorial(a) for a in alpha)
    terms = {}
    for key, c in Q.terms.items():
        exps = space.unpack(key)
        if exps[: space.n] != alpha:
            continue
        if tau_zero and exps[space.tau]:
            continue
        rest = space.pack((0,) * space.n + exps[space.n:])
        terms[rest] = c * scale
    return TruncatedSeries(space, max(Q.order - sum(alpha), 0), terms, exact=Q.exact)


def jet_map(M: NormalHypersurface, variant: str = "full", order: int = 1) -> JetMap:
    if variant not in ("full", "tau0"):
        raise ValueError("variant must be 'full' or 'tau0'")
    if order > M.order:
        raise ValueError("jet order exceeds truncation order")
    alphas = multi_indices(M.n, order)
    comps = [z_derivative_at_zero(M.Q, a, tau_zero=variant == "tau0") for a in alphas]
    return JetMap(M, order, variant, alphas, comps)


# ---------------------------------------------------------------------------
# the five properties


def is_finite_type(M: NormalHypersurface) -> Verdict:
    """Finite type iff ``Q(z, chi, 0)`` is not identically zero."""
    s = M.q_slice("tau=0")
    if s.is_zero():
        return Verdict.unknown(s.order, note="infinite type up to order")
    return Verdict.proved(s.first_monomial(), s.order)


def is_holomorphically_nondegenerate(M: NormalHypersurface, max_jet: int | None = None,
                                     seed: int = 0) -> Verdict:
    """Generic rank ``n + 1`` of the full jet map, searched over ``K'``."""
    return _rank_search(M, "full", M.n + 1, max_jet, seed)


def is_class_C(M: NormalHypersurface, max_jet: int | None = None, seed: int = 0) -> Verdict:
    return _rank_search(M, "tau0", M.n, max_jet, seed)


def _rank_search(M, variant, target, max_jet, seed) -> Verdict:
    best = 0
    last = None
    for kp in jet_schedule(M, max_jet):
        jm = jet_map(M, variant, kp)
        rank = generic_rank(jm.jacobian(), seed=seed, target=target)
        last = rank
        best = max(best, rank.lower)
        if rank.lower >= target:
            return Verdict.proved(rank.witness, rank.order, jet_order=kp, rank=rank.lower)
    # the jet entries are known to a lower order than Q itself; report the working K
    entry_order = last.order if last is not None else M.order
    return Verdict.unknown(M.order, rank_lower_bound=best, entry_order=entry_order)


def is_essentially_finite(M: NormalHypersurface, max_jet: int | None = None) -> Verdict:
    """Certify finiteness of ``chi -> (Q_{z^alpha}(0, chi, 0))`` by truncated ideal membership.

    If ``chi_j^{m_j}`` lies in ``I + (chi)^{D+1}`` for every ``j`` and
    ``D >= sum(m_j - 1) + 1``, then ``(chi)^N`` is contained in ``I + (chi)^{N+1}``
    with ``N = sum(m_j - 1) + 1``, hence in ``I`` by Nakayama: the ideal is
    primary to the maximal ideal and the map is finite.
    """
    n, K = M.n, M.order
    for kp in jet_schedule(M, max_jet):
        jm = jet_map(M, "tau0", kp)
        gens = [(sum(a), c) for a, c in jm.nonzero()]
        if not gens:
            continue
        for D in range(1, K + 1):
            usable = [c for da, c in gens if K - da >= D]
            if not usable:
                break
            span = _TruncatedSpan(M, D)
            for h in usable:
                span.add_multiples(h)
            powers = []
            for j in range(1, n + 1):
                m = next((e for e in range(1, D + 1) if span.contains_power(j, e)), None)
                if m is None:
                    break
                powers.append(m)
            if len(powers) == n and D >= sum(m - 1 for m in powers) + 1:
                return Verdict.proved(
                    ", ".join(_mono(M.space, {M.space.chi(j): m}) for j, m in enumerate(powers, 1)),
                    K, jet_order=kp, degree=D, powers=powers,
                )
    return Verdict.unknown(K)


def _mono(space, exps: dict[int, int]) -> str:
    vec = [0] * len(space.names)
    for v, e in exps.items():
        vec[v] = e
    return space.monomial_str(space.pack(vec))


class _TruncatedSpan:
    """Row-echelon span of polynomials in ``chi`` modulo total degree > D."""

    def __init__(self, M: NormalHypersurface, D: int) -> None:
        self.space = M.space
        self.D = D
        self.rows: dict[int, dict[int, GaussianRational]] = {}
        n = M.n
        self.chi_monomials = []
        for alpha in multi_indices(n, D):
            self.chi_monomials.append(self.space.pack((0,) * (n + 1) + alpha + (0,)))

    def _reduce(self, vec: dict[int, GaussianRational]) -> dict[int, GaussianRational]:
        vec = dict(vec)
        while vec:
            pivot = max(vec)
            row = self.rows.get(pivot)
            if row is None:
                return vec
            f = vec[pivot]
            for k, c in row.items():
                nv = vec.get(k)
                nv = -(f * c) if nv is None else nv - f * c
                if nv.is_zero():
                    vec.pop(k, None)
                else:
                    vec[k] = nv
        return vec

    def add(self, vec: dict[int, GaussianRational]) -> None:
        vec = self._reduce(vec)
        if not vec:
            return
        pivot = max(vec)
        inv = vec[pivot].invert()
        row = {k: c * inv for k, c in vec.items()}
        # keep existing rows reduced against the new pivot
        for p, r in self.rows.items():
            if pivot in r:
                f = r[pivot]
                for k, c in row.items():
                    nv = r.get(k)
                    nv = -(f * c) if nv is None else nv - f * c
                    if nv.is_zero():
                        r.pop(k, None)
                    else:
                        r[k] = nv
        self.rows[pivot] = row

    def add_multiples(self, h: TruncatedSeries) -> None:
        space, D = self.space, self.D
        base = {k: c for k, c in h.terms.items() if space.degree(k) <= D}
        if not base:
            return
        low = min(space.degree(k) for k in base)
        for mono in self.chi_monomials:
            dm = space.degree(mono)
            if dm + low > D:
                continue
            self.add({k + mono: c for k, c in base.items() if space.degree(k) + dm <= D})

    def contains_power(self, j: int, e: int) -> bool:
        space = self.space
        vec = [0] * space.nvars
        vec[space.chi(j)] = e
        return not self._reduce({space.pack(vec): GaussianRational(1)})


def finite_nondegeneracy_matrix(M: NormalHypersurface, jet_order: int) -> list[list[GaussianRational]]:
    """Rows ``j``, columns ``alpha``: ``Q_{chi_j z^alpha}(0, 0, 0)``."""
    space = M.space
    n = M.n
    rows = []
    for j in range(1, n + 1):
        row = []
        for alpha in multi_indices(n, jet_order):
            exps = list(alpha) + [0] + [0] * n + [0]
            exps[space.chi(j)] = 1
            scale = prod(factorial(a) for a in alpha)
            row.append(M.Q.coefficient(exps) * scale)
        rows.append(row)
    return rows


def is_finitely_nondegenerate(M: NormalHypersurface, max_jet: int | None = None) -> Verdict:
    """Exact rank of the constant matrix of mixed derivatives; PROVED with the minimal jet order."""
    best = 0
    for kp in jet_schedule(M, max_jet):
        if kp + 1 > M.order:
            break
        rank, _, cols = constant_rank(finite_nondegeneracy_matrix(M, kp))
        best = max(best, rank)
        if rank == M.n:
            alphas = multi_indices(M.n, kp)
            used = [_mono(M.space, dict(zip(M.space.z_vars, alphas[c]))) for c in cols]
            return Verdict.proved(",".join(used), M.order, jet_order=kp)
    return Verdict.unknown(M.order, rank=best)


# ---------------------------------------------------------------------------
# report


CHAIN = ("finitely_nondegenerate", "essentially_finite", "class_C", "holomorphically_nondegenerate")


@dataclass
class ClassificationReport:
    name: str
    verdicts: dict[str, Verdict] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Verdict:
        return self.verdicts[key]

    def to_dict(self) -> dict:
        return {"hypersurface": self.name, "checks": {k: v.to_dict() for k, v in self.verdicts.items()},
                "chain": "consistent"}


def check_chain(report: ClassificationReport) -> None:
    for stronger, weaker in zip(CHAIN, CHAIN[1:]):
        if report[stronger].is_proved and not report[weaker].is_proved:
            raise ChainViolation(
                f"{report.name}: {stronger} proved ({report[stronger]}) but {weaker} is {report[weaker]}"
            )
    if report["class_C"].is_proved and not report["finite_type"].is_proved:
        raise ChainViolation(f"{report.name}: class C proved but finite type not")


def classify(M: NormalHypersurface, max_jet: int | None = None, seed: int = 0) -> ClassificationReport:
    report = ClassificationReport(M.name)
    report.verdicts["finite_type"] = is_finite_type(M)
    report.verdicts["holomorphically_nondegenerate"] = is_holomorphically_nondegenerate(M, max_jet, seed)
    report.verdicts["class_C"] = is_class_C(M, max_jet, seed)
    report.verdicts["essentially_finite"] = is_essentially_finite(M, max_jet)
    report.verdicts["finitely_nondegenerate"] = is_finitely_nondegenerate(M, max_jet)
    check_chain(report)
    return report


# ---------------------------------------------------------------------------
# the (m, r, n, s) symmetry of Q(z, chi, 0) in C^2


@dataclass(frozen=True)
class MNRS:
    m: int
    r: int
    n: int
    s: int
    verdict: Verdict


def observation_mnrs(M: NormalHypersurface) -> MNRS:
    """Exponents of ``Q(z, chi, 0) = chi^m alpha(z) + ...`` and ``= z^n alpha~(chi) + ...``.

    ``m`` is the least chi-degree, ``r`` the least z-degree at chi-degree ``m``;
    ``n`` and ``s`` are the same with the roles swapped. For a real hypersurface
    ``m == n`` and ``r == s``.
    """
    if M.n != 1:
        raise ValueError("defined for hypersurfaces in C^2 only")
    if not M.is_real:
        raise ValueError(f"{M.name} is not real; the symmetry needs reality ({M.reality})")
    space = M.space
    S = M.q_slice("tau=0")
    if S.is_zero():
        raise ValueError(f"{M.name} is of infinite type up to order {S.order}")
    pairs = [(space.exponent(k, space.z(1)), space.exponent(k, space.chi(1))) for k in S.terms]
    m = min(b for _, b in pairs)
    r = min(a for a, b in pairs if b == m)
    nn = min(a for a, _ in pairs)
    s = min(b for a, b in pairs if a == nn)
    # leading terms of -Q(z,chi,0) and Qbar(chi,z,0) agree (smallest z, then smallest chi)
    sbar = M.Q.conjugate_bar().substitute({space.w: 0})
    lead_q = _lead_z_then_chi(-S)
    lead_qbar = _lead_z_then_chi(sbar)
    ok = m == nn and r == s
    data = dict(m=m, r=r, n=nn, s=s, leading_terms_agree=lead_q == lead_qbar)
    if ok:
        return MNRS(m, r, nn, s, Verdict.proved(_mono(space, {space.z(1): nn, space.chi(1): s}), S.order, **data))
    return MNRS(m, r, nn, s, Verdict.refuted(f"m={m}, r={r}, n={nn}, s={s}", S.order, **data))


def _lead_z_then_chi(series: TruncatedSeries):
    space = series.space
    if series.is_zero():
        return None
    key = min(series.terms, key=lambda k: (space.exponent(k, space.z(1)), space.exponent(k, space.chi(1))))
    return key, series.terms[key]

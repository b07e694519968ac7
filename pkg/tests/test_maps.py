from __future__ import annotations

import random

import pytest

from generators import null_map_instance, quadric_map_instance
from segrekit import (
    AuditFailure,
    NormalHypersurface,
    RealDefiningFunction,
    SegreMap,
    SeriesError,
    audit,
    complexify,
    det_conjugate_relation,
    identity_map,
    is_segre_transversal,
    is_transversally_null,
    jacobian_generic_rank,
    jacobian_rank_at_0,
    maps_into_target,
    order_match,
    segre_nondegeneracy,
    verify_hspm,
)
from segrekit.maps import AuditEntry, jacobian_determinant, membership_residual, restricted_determinants
from segrekit.verdict import Verdict

ONE_SQUARE = "tau + 2*i*z1*chi1"
TWO_SQUARES = "tau + 2*i*z1*chi1 + 2*i*z2*chi2"


def hyp(text, n, name="M"):
    return NormalHypersurface.from_text(text, n, name=name)


def smap(n, f, g, ft, gt):
    return SegreMap.from_text(n, f, g, ft, gt)


@pytest.fixture
def partial():
    return (hyp(ONE_SQUARE, 2), hyp(TWO_SQUARES, 2),
            smap(2, ["z2 + z1*z2", "-z2"], "2*w*z2", ["2*chi1", "2*chi1 + i*tau"], "0"))


@pytest.fixture
def lewy_twist():
    L = hyp("tau + 2*i*z*chi", 1, "lewy")
    return L, L, smap(1, ["2*z/(1 - 2*i*z)"], "w/(1 - 2*i*z)", ["1/2*chi + 1/2*tau"], "tau")


@pytest.fixture
def exp_square():
    M = complexify(RealDefiningFunction.from_text("s*sin(z*chi)/(cos(z*chi) + 1)", 1))
    return M, M, smap(1, ["2*z"], "w^2", ["chi"], "tau^2")


@pytest.fixture
def collapse():
    return (hyp(ONE_SQUARE, 2), hyp(TWO_SQUARES, 2),
            smap(2, ["z1^2", "2*z1"], "w^2", ["2*i*chi1^2", "chi1*tau"], "tau^2"))


def test_map_validation():
    with pytest.raises(SeriesError, match="origin"):
        smap(1, ["1 + z"], "w", ["chi"], "tau")
    with pytest.raises(SeriesError, match="mixes"):
        smap(1, ["z + chi"], "w", ["chi"], "tau")
    with pytest.raises(SeriesError):
        smap(2, ["z1"], "w", ["chi1"], "tau")


def test_partial_map(partial):
    M, Mp, H = partial
    assert verify_hspm(M, Mp, H).is_proved
    # cofactor 2*z2: the residual before restriction is 2*z2*(w - Q)
    R = H.g - (Mp.Q.substitute({Mp.space.z(1): H.f[0], Mp.space.z(2): H.f[1],
                                Mp.space.chi(1): H.ft[0], Mp.space.chi(2): H.ft[1], Mp.space.tau: H.gt}))
    w = type(R).var(M.space, "w", 10)
    assert R == type(R).parse("2*z2", 2) * (w - M.Q)
    nd = segre_nondegeneracy(H)
    assert nd.kind == "partial"
    assert nd.det_fz.witness == "-z2" and nd.det_ftchi.is_refuted
    v = is_transversally_null(H)
    assert v.is_refuted and v.witness == "2*z2*w"


def test_identity(lewy_twist):
    L = lewy_twist[0]
    H = identity_map(1)
    assert verify_hspm(L, L, H).is_proved
    assert segre_nondegeneracy(H).kind == "total"
    assert det_conjugate_relation(H).data["c"] == "1"
    assert jacobian_rank_at_0(H) == 4
    assert jacobian_generic_rank(H).rank == 4


def test_rational_source():
    M = hyp("(tau + 2*i*z2*chi2)/(1 - 2*i*z1*chi1*tau)", 2)
    H = smap(2, ["z1*w", "z2"], "w", ["chi1*tau", "chi2"], "tau")
    assert verify_hspm(M, hyp(TWO_SQUARES, 2), H).is_proved
    assert segre_nondegeneracy(H).kind == "neither"


def test_non_map_is_refuted(partial):
    M, Mp, _ = partial
    H = smap(2, ["z1", "z2"], "w", ["chi1", "2*chi2"], "tau")
    v = verify_hspm(M, Mp, H)
    assert v.is_refuted
    assert not membership_residual(M, Mp, H).is_zero()


def test_transversality(lewy_twist, exp_square, collapse):
    v = is_segre_transversal(lewy_twist[2])
    assert v.is_proved and v.data["g_w0"] == "1"
    assert is_segre_transversal(exp_square[2]).is_refuted
    assert is_segre_transversal(collapse[2]).is_refuted


def test_collapse(collapse):
    M, Mp, H = collapse
    assert verify_hspm(M, Mp, H).is_proved
    assert segre_nondegeneracy(H).kind == "neither"
    assert jacobian_determinant(H).is_zero()
    gr = jacobian_generic_rank(H)
    assert gr.rank < 6 and gr.full.is_refuted
    assert is_transversally_null(H).is_refuted


def test_maps_into_target():
    exp = hyp("tau*exp(i*z*chi)", 1)
    lewy = hyp("tau + 2*i*z*chi", 1)
    H = smap(1, ["z"], "0", ["chi"], "0")
    assert maps_into_target(exp, H).is_proved
    assert maps_into_target(lewy, H).is_refuted
    assert maps_into_target(lewy, smap(1, ["0"], "0", ["0"], "0")).is_proved


def test_det_conjugate_relation(lewy_twist):
    H = lewy_twist[2]
    dz, dc = restricted_determinants(H)
    assert dz == type(dz).parse("2/(1 - 2*i*z)^2", 1).truncate(dz.order)
    assert str(dc) == "1/2"
    v = det_conjugate_relation(H)
    assert v.is_proved and v.data["c"] == "4" and (v.data["j0"], v.data["k0"]) == (0, 0)


def test_det_relation_needs_both(partial):
    with pytest.raises(SeriesError):
        det_conjugate_relation(partial[2])


def test_det_relation_refuted_in_six_dimensions():
    H = SegreMap.from_text(5, ["z1 + z3", "z4^2 + z2", "z1 + z3 + z4^2", "z5", "z3"], "w",
                           ["chi2", "chi1 + chi3 + chi5^2", "chi2 + chi4^2 + chi5^2", "chi4", "chi3"], "tau")
    dz, dc = restricted_determinants(H)
    assert (str(dz), str(dc)) == ("2*z4", "2*chi5")
    assert det_conjugate_relation(H).is_refuted


def test_order_match(lewy_twist, exp_square):
    v = order_match(lewy_twist[2])
    assert v.is_proved and v.data["orders"] == [1, 1]
    assert order_match(exp_square[2]).data["orders"] == [1, 1]
    v = order_match(smap(1, ["z^2"], "w", ["chi^3"], "tau"))
    assert v.is_refuted and v.data["orders"] == [2, 3]
    with pytest.raises(SeriesError):
        order_match(identity_map(2))


def test_rank_at_zero(lewy_twist):
    assert jacobian_rank_at_0(lewy_twist[2]) == 4


def test_audit_lewy(lewy_twist):
    rep = audit(*lewy_twist)
    e = rep["plane_equivalence"]
    assert e.outcome == "confirmed"
    assert all(e.witnesses[k].is_proved for k in ("(i)", "(ii)", "(iii)"))
    assert e.witnesses["rank_at_0"] == 4
    assert rep["fin_nondeg_dichotomy"].branch == "(ii)"


def test_audit_exp(exp_square):
    rep = audit(*exp_square)
    assert rep["total_implies_transversal"].outcome == "hypotheses_not_met"
    assert rep["total_implies_transversal"].hypotheses.is_unknown


def test_audit_rejects_non_map(partial):
    M, Mp, _ = partial
    with pytest.raises(SeriesError):
        audit(M, Mp, smap(2, ["z1", "z2"], "w", ["chi1", "2*chi2"], "tau"))


def test_audit_failure_on_contradiction():
    entry = AuditEntry("x", Verdict.proved("h"), Verdict.refuted("c"))
    assert entry.outcome == "contradicted"


def test_conjugate_map(lewy_twist, partial):
    for M, Mp, H in (lewy_twist, partial):
        Hc = H.conjugate()
        assert verify_hspm(M, Mp, Hc).is_proved
        assert Hc.conjugate().f == H.f


@pytest.mark.parametrize("seed", range(20))
def test_generated_quadric_maps(seed):
    rng = random.Random(seed)
    M, Mp, H = quadric_map_instance(rng, 1 + seed % 3, 6, degenerate=seed % 4 == 0)
    assert verify_hspm(M, Mp, H).is_proved
    assert H.normality_check().is_proved
    audit(M, Mp, H)


@pytest.mark.parametrize("seed", range(10))
def test_generated_null_maps(seed):
    rng = random.Random(seed)
    M, Mp, H = null_map_instance(rng, 1 + seed % 2, 6)
    assert verify_hspm(M, Mp, H).is_proved
    assert is_transversally_null(H).is_proved
    assert maps_into_target(Mp, H).is_proved


def test_audit_failure_raised(monkeypatch, lewy_twist):
    import segrekit.maps as maps_mod
    monkeypatch.setattr(maps_mod, "is_segre_transversal", lambda H: Verdict.refuted("forced"))
    with pytest.raises(AuditFailure, match="total_implies_transversal"):
        audit(*lewy_twist)

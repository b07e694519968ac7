"""Hypersurfaces in normal coordinates, ``w = Q(z, chi, tau)``, and complexification.

A real-analytic hypersurface ``Im w = phi(z, zbar, Re w)`` is turned into its
complexified normal form by solving ``w - tau = 2i phi(z, chi, (w + tau)/2)``
for ``w`` as a power series.
"""

from __future__ import annotations

import logging
from fractions import Fraction

from .scalar import GaussianRational
from .series import DEFAULT_ORDER, SeriesError, TruncatedSeries, VarSpace
from .verdict import Verdict, all_of

log = logging.getLogger(__name__)

TWO_I = GaussianRational(0, 2)
HALF = GaussianRational(Fraction(1, 2))


class NotNormalError(ValueError):
    pass


class ComplexifyError(ValueError):
    """The fixed-point iteration did not settle; ``degree`` is the lowest unsettled degree."""

    def __init__(self, degree: int, iterations: int) -> None:
        super().__init__(
            f"complexification iteration did not stabilize in degree {degree} "
            f"after {iterations} iterations"
        )
        self.degree = degree
        self.iterations = iterations


def _check_space(Q: TruncatedSeries) -> None:
    if Q.space.w in Q.variables():
        raise SeriesError("Q must be a series in (z, chi, tau); it depends on w")


def validate_normal(Q: TruncatedSeries) -> Verdict:
    """Check ``Q(0, chi, tau) = Q(z, 0, tau) = tau`` up to the truncation order."""
    _check_space(Q)
    space = Q.space
    tau = TruncatedSeries.var(space, space.tau, Q.order)
    at_z0 = Q.substitute({v: 0 for v in space.z_vars})
    at_chi0 = Q.substitute({v: 0 for v in space.chi_vars})
    for label, restricted in (("z=0", at_z0), ("chi=0", at_chi0)):
        diff = restricted - tau
        if not diff.is_zero():
            return Verdict.refuted(diff.first_monomial(), Q.order, slice=label)
    return Verdict.proved(order=Q.order)


def validate_reality(Q: TruncatedSeries) -> Verdict:
    """Check ``Q(z, chi, Qbar(chi, z, 0)) = 0`` and ``Q(z, chi, Qbar(chi, z, w)) = w``."""
    _check_space(Q)
    space = Q.space
    qbar = Q.conjugate_bar()  # Qbar(chi, z, w) written in (z, w, chi)
    first = Q.substitute({space.tau: qbar.substitute({space.w: 0})})
    if not first.is_zero():
        return Verdict.refuted(first.first_monomial(), first.order, identity="Q(z,chi,Qbar(chi,z,0))")
    second = Q.substitute({space.tau: qbar}) - TruncatedSeries.var(space, space.w, Q.order)
    if not second.is_zero():
        return Verdict.refuted(second.first_monomial(), second.order, identity="Q(z,chi,Qbar(chi,z,w)) - w")
    return Verdict.proved(order=min(first.order, second.order))


class NormalHypersurface:
    """``w = Q(z, chi, tau)`` with validated normality; reality is validated and recorded."""

    def __init__(self, Q: TruncatedSeries, name: str | None = None) -> None:
        normal = validate_normal(Q)
        if not normal.is_proved:
            raise NotNormalError(
                f"Q is not in normal coordinates: {normal.witness} survives at {normal.data['slice']}"
            )
        self.Q = Q
        self.name = name or "M"
        self.reality = validate_reality(Q)
        if not self.reality.is_proved:
            log.warning("hypersurface %s is not real (witness %s)", self.name, self.reality.witness)

    @classmethod
    def from_text(cls, text: str, n: int, order: int = DEFAULT_ORDER, name: str | None = None):
        return cls(TruncatedSeries.parse(text, n, order), name)

    @property
    def n(self) -> int:
        return self.Q.space.n

    @property
    def space(self) -> VarSpace:
        return self.Q.space

    @property
    def order(self) -> int:
        return self.Q.order

    @property
    def is_real(self) -> bool:
        return self.reality.is_proved

    def q_slice(self, which: str) -> TruncatedSeries:
        """``Q`` restricted to ``tau=0``, ``chi=0`` or ``both``."""
        space = self.space
        if which == "tau=0":
            return self.Q.substitute({space.tau: 0})
        if which == "chi=0":
            return self.Q.substitute({v: 0 for v in space.chi_vars})
        if which == "both":
            return self.Q.substitute({space.tau: 0, **{v: 0 for v in space.chi_vars}})
        raise ValueError(f"unknown slice {which!r}")

    def defining_residual(self, w_value: TruncatedSeries) -> TruncatedSeries:
        """``w - Q`` with ``w`` replaced, i.e. how far a candidate graph is from M."""
        return w_value - self.Q

    def __repr__(self) -> str:
        return f"NormalHypersurface({self.name}, n={self.n}, K={self.order}: w = {self.Q})"


class RealDefiningFunction:
    """Right-hand side of ``Im w = phi(z, zbar, Re w)``.

    ``phi`` is a series whose ``chi`` slots stand for ``zbar`` and whose ``w``
    slot stands for the real variable ``s = Re w``.
    """

    def __init__(self, phi: TruncatedSeries, name: str | None = None) -> None:
        if phi.space.tau in phi.variables():
            raise SeriesError("phi may not depend on tau; use s (the w slot) for Re w")
        if not phi.constant_term().is_zero():
            raise SeriesError("phi must vanish at the origin")
        self.phi = phi
        self.name = name

    @classmethod
    def from_text(cls, text: str, n: int, order: int = DEFAULT_ORDER, name: str | None = None):
        from .parser import parse_expression

        return cls(parse_expression(text, VarSpace(n), order, real_form=True), name)

    @property
    def space(self) -> VarSpace:
        return self.phi.space

    def is_real(self) -> bool:
        return self.phi.conjugate_bar(transversal=False) == self.phi


def complexify(rdf: RealDefiningFunction, max_iterations: int | None = None) -> NormalHypersurface:
    """Solve ``w = tau + 2i phi(z, chi, (w + tau)/2)`` by degree-graded fixed-point iteration."""
    phi = rdf.phi
    space, order = phi.space, phi.order
    if not rdf.is_real():
        raise SeriesError("phi is not real: conjugating coefficients and swapping z, zbar changes it")
    tau = TruncatedSeries.var(space, space.tau, order)
    cap = order + 2 if max_iterations is None else max_iterations
    current = tau
    previous = None
    for _ in range(cap):
        mean = (current + tau).scale(HALF)
        nxt = tau + phi.substitute({space.w: mean}).scale(TWO_I)
        previous, current = current, nxt
        if current == previous:
            Q = TruncatedSeries(space, order, current.terms, exact=current.exact)
            return NormalHypersurface(Q, rdf.name)
    diff = current - previous
    raise ComplexifyError(diff.order_of_vanishing() or 0, cap)


def membership_residual(M: NormalHypersurface, phi: RealDefiningFunction) -> TruncatedSeries:
    """``w - tau - 2i phi(z, chi, (w + tau)/2)`` on the graph ``w = Q``; zero when Q solves it."""
    space = M.space
    tau = TruncatedSeries.var(space, space.tau, M.order)
    mean = (M.Q + tau).scale(HALF)
    return M.Q - tau - phi.phi.substitute({space.w: mean}).scale(TWO_I)


def is_normal_and_real(M: NormalHypersurface) -> Verdict:
    return all_of(validate_normal(M.Q), M.reality)

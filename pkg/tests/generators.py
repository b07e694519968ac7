"""Seeded random instances shared by the property tests."""

from __future__ import annotations

import random
from fractions import Fraction

from segrekit import GaussianRational, NormalHypersurface, RealDefiningFunction, SegreMap, TruncatedSeries, VarSpace
from segrekit.hypersurface import complexify


def gaussian(rng: random.Random, span: int = 5, imaginary: bool = True) -> GaussianRational:
    re = Fraction(rng.randint(-span, span), rng.randint(1, 4))
    im = Fraction(rng.randint(-span, span), rng.randint(1, 4)) if imaginary else 0
    return GaussianRational(re, im)


def nonzero_gaussian(rng: random.Random, span: int = 5) -> GaussianRational:
    while True:
        c = gaussian(rng, span)
        if not c.is_zero():
            return c


def random_series(rng: random.Random, space: VarSpace, order: int, terms: int = 6, max_degree: int = 4,
                  variables: list[int] | None = None, constant: bool = True) -> TruncatedSeries:
    variables = list(range(space.nvars)) if variables is None else variables
    table = {}
    for _ in range(rng.randint(0, terms)):
        vec = [0] * space.nvars
        for _ in range(rng.randint(0 if constant else 1, max_degree)):
            vec[rng.choice(variables)] += 1
        table[space.pack(vec)] = gaussian(rng)
    return TruncatedSeries(space, order, table)


def random_real_phi(rng: random.Random, n: int, order: int, terms: int = 4, max_degree: int = 4,
                    finite_type: bool = True) -> RealDefiningFunction:
    """A real ``phi(z, zbar, s)`` whose every monomial contains some z and some zbar."""
    space = VarSpace(n)
    table: dict[int, GaussianRational] = {}

    def add(key, c):
        table[key] = table.get(key, GaussianRational(0)) + c

    for k in range(rng.randint(1, terms)):
        vec = [0] * space.nvars
        vec[space.z(rng.randint(1, n))] += 1
        vec[space.chi(rng.randint(1, n))] += 1
        for _ in range(rng.randint(0, max_degree - 2)):
            vec[rng.choice(space.z_vars + space.chi_vars + [space.w])] += 1
        if finite_type and k == 0:
            vec[space.w] = 0
        c = gaussian(rng)
        # pair every monomial with its conjugate so that phi is real
        mirrored = [0] * space.nvars
        for j in range(1, n + 1):
            mirrored[space.z(j)], mirrored[space.chi(j)] = vec[space.chi(j)], vec[space.z(j)]
        mirrored[space.w] = vec[space.w]
        add(space.pack(vec), c)
        add(space.pack(mirrored), c.conjugate())
    return RealDefiningFunction(TruncatedSeries(space, order, table))


def random_real_hypersurface(rng: random.Random, n: int, order: int, **kw) -> NormalHypersurface:
    # conjugate pairs can cancel, so finite type is checked after the fact
    while True:
        rdf = random_real_phi(rng, n, order, **kw)
        if rdf.phi.is_zero():
            continue
        M = complexify(rdf)
        if not kw.get("finite_type", True) or not M.q_slice("tau=0").is_zero():
            return M


# ---------------------------------------------------------------------------
# verified maps between quadrics: Q = tau + 2i z^T C chi, Q' = tau + 2i z^T chi


def _matrix(rng, n, hermitian=False):
    if hermitian:
        m = [[GaussianRational(0)] * n for _ in range(n)]
        for a in range(n):
            m[a][a] = gaussian(rng, imaginary=False)
            for b in range(a + 1, n):
                m[a][b] = gaussian(rng)
                m[b][a] = m[a][b].conjugate()
        return m
    return [[gaussian(rng) for _ in range(n)] for _ in range(n)]


def _invert(m):
    n = len(m)
    aug = [list(row) + [GaussianRational(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if not aug[r][c].is_zero()), None)
        if p is None:
            return None
        aug[c], aug[p] = aug[p], aug[c]
        inv = aug[c][c].invert()
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and not aug[r][c].is_zero():
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def quadric(space: VarSpace, C, order: int, name: str) -> NormalHypersurface:
    two_i = GaussianRational(0, 2)
    table = {space.pack([1 if k == space.tau else 0 for k in range(space.nvars)]): GaussianRational(1)}
    for a in range(space.n):
        for b in range(space.n):
            if not C[a][b].is_zero():
                vec = [0] * space.nvars
                vec[space.z(a + 1)] += 1
                vec[space.chi(b + 1)] += 1
                table[space.pack(vec)] = two_i * C[a][b]
    return NormalHypersurface(TruncatedSeries(space, order, table), name)


def quadric_map_instance(rng: random.Random, n: int, order: int, degenerate: bool = False):
    """``(M, M', H)`` with ``H`` a verified Segre preserving map between quadrics.

    ``f = A z/(1 - c.z)``, ``g = w/(1 - c.z)``, ``ft = B chi + d tau``, ``gt = tau``
    maps ``tau + 2i z^T C chi`` into ``tau + 2i z^T chi`` exactly when
    ``A^T B = C`` and ``c = 2i A^T d``. ``C`` is Hermitian, so both sides are real.
    """
    space = VarSpace(n)
    while True:
        A = _matrix(rng, n)
        At_inv = _invert([list(col) for col in zip(*A)])
        if At_inv is not None:
            break
    C = _matrix(rng, n, hermitian=True)
    if degenerate:
        for a in range(n):
            C[a][n - 1] = C[n - 1][a] = GaussianRational(0)
    B = [[sum((At_inv[a][k] * C[k][b] for k in range(n)), GaussianRational(0)) for b in range(n)]
         for a in range(n)]
    d = [gaussian(rng) if rng.random() < 0.6 else GaussianRational(0) for _ in range(n)]
    c = [GaussianRational(0, 2) * sum((A[k][a] * d[k] for k in range(n)), GaussianRational(0)) for a in range(n)]
    var = lambda v: TruncatedSeries.var(space, v, order)  # noqa: E731
    denom = TruncatedSeries.constant(space, 1, order)
    for a in range(n):
        denom = denom - var(space.z(a + 1)).scale(c[a])
    inv = denom.invert_unit()
    f = []
    for a in range(n):
        lin = TruncatedSeries.zero(space, order)
        for b in range(n):
            lin = lin + var(space.z(b + 1)).scale(A[a][b])
        f.append(lin * inv)
    ft = []
    for a in range(n):
        lin = var(space.tau).scale(d[a])
        for b in range(n):
            lin = lin + var(space.chi(b + 1)).scale(B[a][b])
        ft.append(lin)
    H = SegreMap(f, var(space.w) * inv, ft, var(space.tau), "quadric_map")
    target = quadric(space, [[GaussianRational(int(a == b)) for b in range(n)] for a in range(n)], order, "target")
    return quadric(space, C, order, "source"), target, H


def null_map_instance(rng: random.Random, n: int, order: int):
    """A finite-type source, an infinite-type target ``tau*(1 + ...)`` and a map with ``g = gt = 0``."""
    space = VarSpace(n)
    source = quadric(space, _matrix(rng, n, hermitian=True), order, "source")
    # Im w = Re w * psi(z, zbar) with psi real: w = tau*(1 + i psi)/(1 - i psi), infinite type
    psi = random_real_phi(rng, n, order, terms=2, max_degree=3, finite_type=False).phi
    s = TruncatedSeries.var(space, space.w, order)
    target = complexify(RealDefiningFunction(s * psi, "infinite_target"))
    hol = space.holomorphic_block
    anti = space.antiholomorphic_block
    f = [random_series(rng, space, order, 3, 3, hol, constant=False) for _ in range(n)]
    ft = [random_series(rng, space, order, 3, 3, anti, constant=False) for _ in range(n)]
    zero = TruncatedSeries.zero(space, order)
    return source, target, SegreMap(f, zero, ft, zero, "null_map")

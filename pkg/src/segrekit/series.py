"""Sparse multivariate power series over Q(i), truncated in total degree.

Every series lives in the doubled coordinate space ``(z1..zn, w, chi1..chin, tau)``
of a fixed CR dimension ``n``. Exponent vectors are packed into a single
integer, one byte per variable with ``z1`` most significant, so monomial
multiplication is integer addition and integer order on packed keys is
lexicographic order on exponent vectors.

A series also records whether it is ``exact``: an exact series is a
polynomial whose every term is known (nothing was ever dropped by truncation).
Exactness is what allows substituting units and certifying constant ranks.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Callable, Iterable, Mapping

from .scalar import ONE, ZERO, GaussianRational
from .verdict import Verdict

DEFAULT_ORDER = 10
_BITS = 8
_MASK = (1 << _BITS) - 1
MAX_ORDER = 200


class SeriesError(ValueError):
    pass


class VarSpace:
    """Names and block structure of the doubled coordinates for CR dimension ``n``."""

    __slots__ = ("n", "names", "_index", "nvars")

    def __init__(self, n: int) -> None:
        if n < 1:
            raise SeriesError("CR dimension must be positive")
        self.n = n
        self.names = (
            tuple(f"z{j}" for j in range(1, n + 1))
            + ("w",)
            + tuple(f"chi{j}" for j in range(1, n + 1))
            + ("tau",)
        )
        self.nvars = 2 * n + 2
        self._index = {name: k for k, name in enumerate(self.names)}

    def index(self, var: str | int) -> int:
        if isinstance(var, int):
            if not 0 <= var < self.nvars:
                raise SeriesError(f"variable index {var} out of range")
            return var
        try:
            return self._index[var]
        except KeyError:
            raise SeriesError(f"unknown variable {var!r} for n={self.n}") from None

    def z(self, j: int) -> int:
        return j - 1

    @property
    def w(self) -> int:
        return self.n

    def chi(self, j: int) -> int:
        return self.n + j

    @property
    def tau(self) -> int:
        return 2 * self.n + 1

    @property
    def z_vars(self) -> list[int]:
        return list(range(self.n))

    @property
    def chi_vars(self) -> list[int]:
        return list(range(self.n + 1, 2 * self.n + 1))

    @property
    def holomorphic_block(self) -> list[int]:
        """``(z, w)``"""
        return list(range(self.n + 1))

    @property
    def antiholomorphic_block(self) -> list[int]:
        """``(chi, tau)``"""
        return list(range(self.n + 1, 2 * self.n + 2))

    def shift(self, v: int) -> int:
        return _BITS * (self.nvars - 1 - v)

    def pack(self, exps: Iterable[int]) -> int:
        key = 0
        for e in exps:
            if e < 0 or e > _MASK:
                raise SeriesError("exponent out of range")
            key = (key << _BITS) | e
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple(key.to_bytes(self.nvars, "big"))

    def degree(self, key: int) -> int:
        return sum(key.to_bytes(self.nvars, "big"))

    def exponent(self, key: int, v: int) -> int:
        return (key >> self.shift(v)) & _MASK

    def monomial_str(self, key: int) -> str:
        parts = []
        for name, e in zip(self.names, self.unpack(key)):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def conjugation_permutation(self, transversal: bool = True) -> list[int]:
        n = self.n
        perm = [n + 1 + j for j in range(n)] + [2 * n + 1 if transversal else n]
        perm += [j for j in range(n)] + [n if transversal else 2 * n + 1]
        return perm

    def __eq__(self, other) -> bool:
        return isinstance(other, VarSpace) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("VarSpace", self.n))

    def __repr__(self) -> str:
        return f"VarSpace(n={self.n})"


def _sort_key(space: VarSpace):
    # graded lex: lower total degree first, then larger exponent on earlier variable
    return lambda key: (space.degree(key), -key)


class TruncatedSeries:
    __slots__ = ("space", "order", "terms", "exact")

    def __init__(
        self,
        space: VarSpace,
        order: int = DEFAULT_ORDER,
        terms: Mapping[int, GaussianRational] | None = None,
        exact: bool = True,
    ) -> None:
        if not 0 <= order <= MAX_ORDER:
            raise SeriesError(f"truncation order must be in [0, {MAX_ORDER}]")
        self.space = space
        self.order = order
        clean: dict[int, GaussianRational] = {}
        if terms:
            for key, c in terms.items():
                if not isinstance(c, GaussianRational):
                    c = GaussianRational(c)
                if c.is_zero():
                    continue
                if space.degree(key) > order:
                    exact = False
                    continue
                clean[key] = c
        self.terms = clean
        self.exact = exact

    # -- constructors ----------------------------------------------------

    @classmethod
    def constant(cls, space: VarSpace, c, order: int = DEFAULT_ORDER) -> TruncatedSeries:
        return cls(space, order, {0: GaussianRational(c)}, exact=True)

    @classmethod
    def zero(cls, space: VarSpace, order: int = DEFAULT_ORDER) -> TruncatedSeries:
        return cls(space, order, {}, exact=True)

    @classmethod
    def var(cls, space: VarSpace, name: str | int, order: int = DEFAULT_ORDER) -> TruncatedSeries:
        v = space.index(name)
        return cls(space, order, {1 << space.shift(v): ONE}, exact=True)

    @classmethod
    def monomial(cls, space: VarSpace, exps: Mapping[str | int, int], coeff=1,
                 order: int = DEFAULT_ORDER) -> TruncatedSeries:
        vec = [0] * space.nvars
        for name, e in exps.items():
            vec[space.index(name)] += e
        return cls(space, order, {space.pack(vec): GaussianRational(coeff)}, exact=True)

    @classmethod
    def parse(cls, text: str, n: int, order: int = DEFAULT_ORDER) -> TruncatedSeries:
        from .parser import parse_expression

        return parse_expression(text, VarSpace(n), order)

    def _new(self, terms, order, exact) -> TruncatedSeries:
        return TruncatedSeries(self.space, order, terms, exact)

    def _coerce(self, other) -> TruncatedSeries | None:
        if isinstance(other, TruncatedSeries):
            if other.space != self.space:
                raise SeriesError(f"space mismatch: {self.space} vs {other.space}")
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return TruncatedSeries.constant(self.space, other, self.order)
        return None

    # -- inspection ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Mapping[str | int, int] | Iterable[int] | int) -> GaussianRational:
        if isinstance(exps, int):
            key = exps
        elif isinstance(exps, Mapping):
            vec = [0] * self.space.nvars
            for name, e in exps.items():
                vec[self.space.index(name)] += e
            key = self.space.pack(vec)
        else:
            key = self.space.pack(exps)
        return self.terms.get(key, ZERO)

    def constant_term(self) -> GaussianRational:
        return self.terms.get(0, ZERO)

    def sorted_keys(self) -> list[int]:
        return sorted(self.terms, key=_sort_key(self.space))

    def first_monomial(self) -> str | None:
        """Graded-lex first surviving term as text, e.g. ``2*i*z1*chi1``."""
        if not self.terms:
            return None
        key = self.sorted_keys()[0]
        return _term_str(self.space, key, self.terms[key])

    def max_degree(self) -> int:
        return max((self.space.degree(k) for k in self.terms), default=-1)

    def variables(self) -> set[int]:
        used = 0
        for key in self.terms:
            used |= key
        return {v for v in range(self.space.nvars) if (used >> self.space.shift(v)) & _MASK}

    def depends_only_on(self, block: Iterable[int]) -> bool:
        return self.variables() <= set(block)

    def degree_in(self, v: int) -> int:
        return max((self.space.exponent(k, v) for k in self.terms), default=-1)

    # -- ring operations -------------------------------------------------

    def _result_order(self, other: TruncatedSeries) -> int:
        loose = [s.order for s in (self, other) if not s.exact]
        return min(loose) if loose else max(self.order, other.order)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        order = self._result_order(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            prev = terms.get(key)
            terms[key] = c if prev is None else prev + c
        return self._new(terms, order, self.exact and other.exact)

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return self._new({k: -c for k, c in self.terms.items()}, self.order, self.exact)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> TruncatedSeries:
        c = GaussianRational(c)
        if c.is_zero():
            return self._new({}, self.order, self.exact)
        return self._new({k: v * c for k, v in self.terms.items()}, self.order, self.exact)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        order = self._result_order(other)
        terms, dropped = _convolve(self.space, self.terms, other.terms, order)
        return self._new(terms, order, self.exact and other.exact and not dropped)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> TruncatedSeries:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.invert_unit() ** (-k)
        result = TruncatedSeries.constant(self.space, 1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def truncate(self, order: int) -> TruncatedSeries:
        if order >= self.order:
            return self
        return self._new(self.terms, order, self.exact)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = TruncatedSeries.constant(self.space, other, self.order)
        if not isinstance(other, TruncatedSeries) or other.space != self.space:
            return NotImplemented
        order = self._result_order(other)
        return _cut(self.space, self.terms, order) == _cut(other.space, other.terms, order)

    __hash__ = None

    # -- calculus --------------------------------------------------------

    def derive(self, var: str | int) -> TruncatedSeries:
        """Exact partial derivative; the result is known to one degree less."""
        v = self.space.index(var)
        sh = self.space.shift(v)
        one = 1 << sh
        terms = {}
        for key, c in self.terms.items():
            e = (key >> sh) & _MASK
            if e:
                terms[key - one] = c * e
        return self._new(terms, max(self.order - 1, 0), self.exact)

    def derive_multi(self, exps: Mapping[int, int]) -> TruncatedSeries:
        out = self
        for v, e in exps.items():
            for _ in range(e):
                out = out.derive(v)
        return out

    def substitute(self, bindings: Mapping[str | int, object]) -> TruncatedSeries:
        """Compose: replace each bound variable by a series (or scalar)."""
        space = self.space
        bound: dict[int, TruncatedSeries] = {}
        for var, val in bindings.items():
            v = space.index(var)
            if not isinstance(val, TruncatedSeries):
                val = TruncatedSeries.constant(space, val, self.order)
            elif val.space != space:
                raise SeriesError("binding lives in a different variable space")
            bound[v] = val
        used = self.variables()
        bound = {v: s for v, s in bound.items() if v in used}
        if not bound:
            return self
        for v, s in bound.items():
            if not s.constant_term().is_zero() and not self.exact:
                raise SeriesError(
                    f"cannot substitute a unit into {space.names[v]}: the series is "
                    "truncated, so its dependence on that variable has unbounded degree"
                )
        loose = [s.order for s in bound.values() if not s.exact]
        if not self.exact:
            loose.append(self.order)
        order = min(loose) if loose else max([self.order] + [s.order for s in bound.values()])
        exact = self.exact and all(s.exact for s in bound.values())

        free_mask = 0
        for v in range(space.nvars):
            if v not in bound:
                free_mask |= _MASK << space.shift(v)
        powers: dict[int, list[TruncatedSeries]] = {
            v: [TruncatedSeries.constant(space, 1, order)] for v in bound
        }

        def power(v: int, e: int) -> TruncatedSeries:
            cache = powers[v]
            while len(cache) <= e:
                cache.append(cache[-1] * bound[v])
            return cache[e]

        # group terms by their bound-variable exponents
        groups: dict[tuple, dict[int, GaussianRational]] = {}
        for key, c in self.terms.items():
            sig = tuple((v, space.exponent(key, v)) for v in sorted(bound))
            groups.setdefault(sig, {})[key & free_mask] = c
        result: dict[int, GaussianRational] = {}
        dropped = False
        for sig, free_terms in groups.items():
            factor = TruncatedSeries.constant(space, 1, order)
            for v, e in sig:
                if e:
                    factor = factor * power(v, e)
                    if not factor.exact:
                        exact = False
            prod, d = _convolve(space, free_terms, factor.terms, order)
            dropped = dropped or d
            for key, c in prod.items():
                prev = result.get(key)
                result[key] = c if prev is None else prev + c
        return self._new(result, order, exact and not dropped)

    def invert_unit(self) -> TruncatedSeries:
        c0 = self.constant_term()
        if c0.is_zero():
            raise SeriesError("series has zero constant term; it is not a unit")
        inv0 = c0.invert()
        if len(self.terms) == 1:
            return self._new({0: inv0}, self.order, self.exact)
        # a = c0 (1 - v)  =>  1/a = c0^-1 * sum v^k
        v = TruncatedSeries.constant(self.space, 1, self.order) - self.scale(inv0)
        v = TruncatedSeries(self.space, self.order, v.terms, exact=False)
        total = TruncatedSeries.constant(self.space, 1, self.order)
        vk = total
        for _ in range(self.order):
            vk = vk * v
            if vk.is_zero():
                break
            total = total + vk
        return TruncatedSeries(self.space, self.order, total.scale(inv0).terms, exact=False)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(GaussianRational(other).invert())
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.invert_unit()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.invert_unit()

    def elementary(self, fn: str) -> TruncatedSeries:
        """Compose ``exp``, ``sin``, ``cos`` or ``log1p`` with this series."""
        try:
            coeff = _MACLAURIN[fn]
        except KeyError:
            raise SeriesError(f"unknown elementary function {fn!r}") from None
        if not self.constant_term().is_zero():
            raise SeriesError(f"{fn} needs a series with zero constant term")
        if self.is_zero():
            return TruncatedSeries.constant(self.space, coeff(0), self.order)
        # Horner in the series argument; u^k has degree >= k
        lowest = self.order_of_vanishing()
        top = self.order // lowest if lowest else self.order
        acc = TruncatedSeries.constant(self.space, coeff(top), self.order)
        for k in range(top - 1, -1, -1):
            acc = acc * self
            acc = acc + coeff(k)
        return TruncatedSeries(self.space, self.order, acc.terms, exact=False)

    def exp(self) -> TruncatedSeries:
        return self.elementary("exp")

    def sin(self) -> TruncatedSeries:
        return self.elementary("sin")

    def cos(self) -> TruncatedSeries:
        return self.elementary("cos")

    def log1p(self) -> TruncatedSeries:
        return self.elementary("log1p")

    def conjugate_bar(self, transversal: bool = True) -> TruncatedSeries:
        """Conjugate coefficients and swap ``z <-> chi`` (and ``w <-> tau``).

        With ``transversal=False`` the ``w`` slot is left in place, which is
        how a real variable such as ``Re w`` stored there is treated.
        """
        space = self.space
        perm = space.conjugation_permutation(transversal)
        terms = {}
        for key, c in self.terms.items():
            exps = space.unpack(key)
            new = [0] * space.nvars
            for v, e in enumerate(exps):
                new[perm[v]] = e
            terms[space.pack(new)] = c.conjugate()
        return self._new(terms, self.order, self.exact)

    # -- valuations ------------------------------------------------------

    def order_of_vanishing(self) -> int | None:
        """Lowest total degree of a surviving term; ``None`` if nothing survives up to ``order``."""
        if not self.terms:
            return None
        return min(self.space.degree(k) for k in self.terms)

    def homogeneous_part(self, degree: int) -> TruncatedSeries:
        terms = {k: c for k, c in self.terms.items() if self.space.degree(k) == degree}
        return self._new(terms, self.order, True)

    def lowest_homogeneous(self) -> tuple[int, TruncatedSeries]:
        d = self.order_of_vanishing()
        if d is None:
            raise SeriesError(f"series vanishes up to order {self.order}")
        return d, self.homogeneous_part(d)

    def evaluate(self, point: Mapping[int, GaussianRational]) -> GaussianRational:
        """Value of the stored polynomial at a point (unlisted variables are 0)."""
        space = self.space
        total = ZERO
        for key, c in self.terms.items():
            val = c
            for v, e in enumerate(space.unpack(key)):
                if e:
                    x = point.get(v, ZERO)
                    if x.is_zero():
                        val = ZERO
                        break
                    val = val * x**e
            total = total + val
        return total

    # -- text ------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for key in self.sorted_keys():
            text = _term_str(self.space, key, self.terms[key])
            if not out:
                out = text
            elif text.startswith("-"):
                out += " - " + text[1:]
            else:
                out += " + " + text
        return out

    def __repr__(self) -> str:
        flag = "" if self.exact else f" + O({self.order + 1})"
        return f"TruncatedSeries(n={self.space.n}, K={self.order}: {self}{flag})"


def _term_str(space: VarSpace, key: int, c: GaussianRational) -> str:
    mono = space.monomial_str(key)
    if key == 0:
        return str(c)
    if c == ONE:
        return mono
    if c == -ONE:
        return "-" + mono
    if not c.is_real() and c.re != 0:
        return f"({c})*{mono}"
    return f"{c}*{mono}"


def _cut(space: VarSpace, terms: dict[int, GaussianRational], order: int) -> dict[int, GaussianRational]:
    return {k: c for k, c in terms.items() if space.degree(k) <= order}


def _convolve(space: VarSpace, ta: Mapping[int, GaussianRational], tb: Mapping[int, GaussianRational],
              order: int) -> tuple[dict[int, GaussianRational], bool]:
    """Truncated product of two term tables; also reports whether terms were dropped."""
    if not ta or not tb:
        return {}, False
    a = sorted(((space.degree(k), k, c) for k, c in ta.items()), key=lambda t: t[0])
    b = sorted(((space.degree(k), k, c) for k, c in tb.items()), key=lambda t: t[0])
    out: dict[int, GaussianRational] = {}
    dropped = False
    for da, ka, ca in a:
        room = order - da
        if room < 0:
            dropped = True
            break
        for db, kb, cb in b:
            if db > room:
                dropped = True
                break
            key = ka + kb
            prod = ca * cb
            prev = out.get(key)
            out[key] = prod if prev is None else prev + prod
    return {k: c for k, c in out.items() if not c.is_zero()}, dropped


def _exp_coeff(k: int) -> Fraction:
    return Fraction(1, factorial(k))


def _sin_coeff(k: int) -> Fraction:
    if k % 2 == 0:
        return Fraction(0)
    return Fraction((-1) ** ((k - 1) // 2), factorial(k))


def _cos_coeff(k: int) -> Fraction:
    if k % 2:
        return Fraction(0)
    return Fraction((-1) ** (k // 2), factorial(k))


def _log1p_coeff(k: int) -> Fraction:
    if k == 0:
        return Fraction(0)
    return Fraction((-1) ** (k + 1), k)


_MACLAURIN: dict[str, Callable[[int], Fraction]] = {
    "exp": _exp_coeff,
    "sin": _sin_coeff,
    "cos": _cos_coeff,
    "log1p": _log1p_coeff,
}


# ---------------------------------------------------------------------------
# matrices, determinants, generic rank


class SeriesMatrix:
    """Rectangular matrix of series over one variable space."""

    def __init__(self, rows: list[list[TruncatedSeries]]) -> None:
        if not rows or not rows[0]:
            raise SeriesError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise SeriesError("ragged matrix")
        space = rows[0][0].space
        if any(e.space != space for r in rows for e in r):
            raise SeriesError("matrix entries live in different spaces")
        self.rows = [list(r) for r in rows]
        self.space = space

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def order(self) -> int:
        loose = [e.order for r in self.rows for e in r if not e.exact]
        return min(loose) if loose else max(e.order for r in self.rows for e in r)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def map(self, fn: Callable[[TruncatedSeries], TruncatedSeries]) -> SeriesMatrix:
        return SeriesMatrix([[fn(e) for e in r] for r in self.rows])

    def substitute(self, bindings) -> SeriesMatrix:
        return self.map(lambda e: e.substitute(bindings))

    def minor(self, rows: Iterable[int], cols: Iterable[int]) -> TruncatedSeries:
        return determinant([[self.rows[i][j] for j in cols] for i in rows])

    def det(self) -> TruncatedSeries:
        r, c = self.shape
        if r != c:
            raise SeriesError("determinant of a non-square matrix")
        return determinant(self.rows)

    def is_constant_exact(self) -> bool:
        return all(e.exact and e.terms.keys() <= {0} for r in self.rows for e in r)

    def constant_values(self) -> list[list[GaussianRational]]:
        return [[e.constant_term() for e in r] for r in self.rows]

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows) + "]"


def jacobian(components: list[TruncatedSeries], variables: Iterable[str | int]) -> SeriesMatrix:
    variables = list(variables)
    return SeriesMatrix([[f.derive(v) for v in variables] for f in components])


def determinant(rows: list[list[TruncatedSeries]]) -> TruncatedSeries:
    """Laplace expansion along rows, memoized on the remaining column set."""
    size = len(rows)
    space = rows[0][0].space
    order = SeriesMatrix(rows).order
    memo: dict[tuple[int, int], TruncatedSeries] = {}

    def rec(k: int, cols: int) -> TruncatedSeries:
        if k == size:
            return TruncatedSeries.constant(space, 1, order)
        hit = memo.get((k, cols))
        if hit is not None:
            return hit
        total = TruncatedSeries.zero(space, order)
        sign = 1
        for j in range(size):
            if not cols >> j & 1:
                continue
            entry = rows[k][j]
            if not entry.is_zero():
                sub = rec(k + 1, cols & ~(1 << j))
                if not sub.is_zero():
                    term = entry * sub
                    total = total + (term if sign > 0 else -term)
            sign = -sign
        memo[(k, cols)] = total
        return total

    return rec(0, (1 << size) - 1)


def constant_rank(values: list[list[GaussianRational]]) -> tuple[int, list[int], list[int]]:
    """Exact rank over Q(i), with the pivot rows and columns of a nonsingular block."""
    m = [list(r) for r in values]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    row_ids = list(range(nrows))
    piv_rows: list[int] = []
    piv_cols: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if not m[i][c].is_zero()), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        row_ids[r], row_ids[p] = row_ids[p], row_ids[r]
        inv = m[r][c].invert()
        for i in range(r + 1, nrows):
            if m[i][c].is_zero():
                continue
            f = m[i][c] * inv
            m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_rows.append(row_ids[r])
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    return r, sorted(piv_rows), piv_cols


class Rank:
    """Generic rank of a series matrix, as far as truncation lets us certify it.

    ``lower`` is witnessed by a minor with a surviving coefficient (exact).
    ``exact`` is true when ``lower`` is also an upper bound: the matrix is a
    constant matrix known exactly, or ``lower`` equals the smaller dimension.
    """

    def __init__(self, lower: int, exact: bool, order: int, rows=(), cols=(),
                 witness: str | None = None) -> None:
        self.lower = lower
        self.exact = exact
        self.order = order
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        self.witness = witness

    def at_least(self, r: int) -> Verdict:
        if self.lower >= r:
            return Verdict.proved(self.witness, self.order, rank=self.lower, minor_rows=list(self.rows),
                                  minor_cols=list(self.cols))
        if self.exact:
            return Verdict.refuted(None, self.order, rank=self.lower)
        return Verdict.unknown(self.order, rank_lower_bound=self.lower)

    def to_dict(self) -> dict:
        out = {"rank_lower_bound": self.lower, "exact": self.exact, "order": self.order}
        if self.witness is not None:
            out["witness"] = self.witness
            out["minor_rows"] = list(self.rows)
            out["minor_cols"] = list(self.cols)
        return out

    def __repr__(self) -> str:
        bound = "=" if self.exact else ">="
        return f"Rank({bound}{self.lower}, K={self.order}, witness={self.witness!r})"


_ENUM_LIMIT = 6
_DRAWS = 5


def generic_rank(m: SeriesMatrix, seed: int = 0, target: int | None = None) -> Rank:
    """Largest ``r`` with an ``r x r`` minor that is nonzero up to the truncation order.

    Matrices up to 6x6 are searched by exhaustive minor enumeration from the
    largest size down. Larger matrices are evaluated at seeded random rational
    points to propose a nonsingular block, whose minor is then confirmed
    symbolically. ``target`` stops the search once that rank is witnessed.
    """
    nrows, ncols = m.shape
    full = min(nrows, ncols)
    order = m.order
    if all(e.is_zero() for r in m.rows for e in r):
        return Rank(0, all(e.exact for r in m.rows for e in r), order)
    if m.is_constant_exact():
        r, pr, pc = constant_rank(m.constant_values())
        return Rank(r, True, order, pr[:r], pc[:r], str(m.minor(pr[:r], pc[:r])) if r else None)
    # zero rows and columns never enter a nonzero minor
    keep_r = [i for i in range(nrows) if any(not e.is_zero() for e in m.rows[i])]
    keep_c = [j for j in range(ncols) if any(not m.rows[i][j].is_zero() for i in keep_r)]
    if len(keep_r) < nrows or len(keep_c) < ncols:
        sub = SeriesMatrix([[m.rows[i][j] for j in keep_c] for i in keep_r])
        res = generic_rank(sub, seed, target)
        dropped_exact = all(m.rows[i][j].exact for i in range(nrows) for j in range(ncols)
                            if i not in keep_r or j not in keep_c)
        return Rank(res.lower, res.lower == full or (res.exact and dropped_exact), order,
                    [keep_r[i] for i in res.rows],
                    [keep_c[j] for j in res.cols], res.witness)
    return _generic_rank_dense(m, seed, target)


def _generic_rank_dense(m: SeriesMatrix, seed: int, target: int | None) -> Rank:
    nrows, ncols = m.shape
    full = min(nrows, ncols)
    order = m.order
    if m.is_constant_exact():
        r, pr, pc = constant_rank(m.constant_values())
        return Rank(r, True, order, pr[:r], pc[:r], str(m.minor(pr[:r], pc[:r])) if r else None)

    if nrows <= _ENUM_LIMIT and ncols <= _ENUM_LIMIT:
        top = full if target is None else min(full, target)
        # the rank is settled once every larger minor vanished exactly (nothing truncated away)
        settled = target is None
        for r in range(top, 0, -1):
            for rows in combinations(range(nrows), r):
                for cols in combinations(range(ncols), r):
                    d = m.minor(rows, cols)
                    if not d.is_zero():
                        return Rank(r, r == full or settled, order, rows, cols, d.first_monomial())
                    settled = settled and d.exact
        return Rank(0, settled, order)

    rng = random.Random(seed)
    best = Rank(0, False, order)
    tried: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    candidate_rows: set[int] = set()
    variables = sorted(set().union(*(e.variables() for r in m.rows for e in r)))
    for _ in range(_DRAWS):
        point = {v: GaussianRational(_random_rational(rng)) for v in variables}
        values = [[e.evaluate(point) for e in r] for r in m.rows]
        rk, pr, pc = constant_rank(values)
        candidate_rows.update(pr)
        key = (tuple(pr), tuple(pc))
        if rk <= best.lower or key in tried:
            continue
        tried.add(key)
        d = m.minor(pr, pc)
        if not d.is_zero():
            best = Rank(rk, rk == full, order, pr, pc, d.first_monomial())
            if best.exact or (target is not None and rk >= target):
                return best
    # proposals did not survive symbolic confirmation: enumerate the proposed rows
    rows_pool = sorted(candidate_rows)[: 2 * _ENUM_LIMIT]
    top = min(len(rows_pool), ncols)
    if target is not None:
        top = min(top, target)
    for r in range(top, best.lower, -1):
        for rows in combinations(rows_pool, r):
            for cols in combinations(range(ncols), r):
                d = m.minor(rows, cols)
                if not d.is_zero():
                    return Rank(r, r == full, order, rows, cols, d.first_monomial())
    return best


def _random_rational(rng: random.Random) -> Fraction:
    num = rng.randint(-40, 40) or 1
    return Fraction(num, rng.randint(1, 9))

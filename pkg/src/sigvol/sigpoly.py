"""Signatures of piecewise linear paths, exactly.

A piecewise linear path is an ordered list of rational control points.  Its
truncated signature is computed segment by segment (each segment contributes
the exponential-type series with coefficient 1/k! on a word of length k) and
multiplied together with the concatenation (Chen) product.

The same computation carried out symbolically yields, for every word, the
polynomial in the increment variables a[s][i] (segment s, coordinate i) that
evaluates the signature on a generic n-point path.  The map from words to
these polynomials is linear and turns the shuffle product into the ordinary
polynomial product; its kernel at fixed n detects elements that vanish on
every n-point path.

Polynomials live over increments rather than raw coordinates, which makes
translation invariance structural.  Substitution helpers re-express a
polynomial after permuting control points, merging a collinear point, or
closing the path into a loop.
"""

from __future__ import annotations

import math
import re
from itertools import product
from typing import Iterable, Mapping, Sequence

from .exactq import QQ, Q0, Q1, qq
from .freealg import EMPTY_WORD, TensorElement, Word

Monomial = tuple[int, ...]


def _factorial_inv(k: int) -> QQ:
    return Q1 / QQ(math.factorial(k))


# ---------------------------------------------------------------------------
# paths
# ---------------------------------------------------------------------------


class PLPath:
    """Ordered rational control points in R^d."""

    __slots__ = ("d", "points")

    def __init__(self, points: Iterable[Sequence]):
        pts = tuple(tuple(qq(c) for c in p) for p in points)
        if not pts:
            raise ValueError("a path needs at least one control point")
        d = len(pts[0])
        if any(len(p) != d for p in pts):
            raise ValueError("control points must share one dimension")
        self.d = d
        self.points = pts

    @property
    def n(self) -> int:
        return len(self.points)

    def increments(self) -> list[tuple[QQ, ...]]:
        return [
            tuple(b - a for a, b in zip(p, q))
            for p, q in zip(self.points, self.points[1:])
        ]

    def reversed(self) -> "PLPath":
        return PLPath(self.points[::-1])

    def permuted(self, sigma: Sequence[int]) -> "PLPath":
        """Path through x_{sigma(1)}, ..., x_{sigma(n)} (1-based images)."""
        if sorted(sigma) != list(range(1, self.n + 1)):
            raise ValueError("not a permutation of the control points")
        return PLPath([self.points[s - 1] for s in sigma])

    def concat(self, other: "PLPath") -> "PLPath":
        if other.points[0] != self.points[-1]:
            raise ValueError("paths do not share an endpoint")
        return PLPath(self.points + other.points[1:])

    def __eq__(self, other) -> bool:
        return isinstance(other, PLPath) and self.points == other.points

    def __repr__(self) -> str:
        return f"PLPath(d={self.d}, n={self.n})"


# ---------------------------------------------------------------------------
# truncated signatures
# ---------------------------------------------------------------------------


class TruncatedSignature:
    """Signature coefficients on all words of length <= maxdeg."""

    __slots__ = ("d", "maxdeg", "terms")

    def __init__(self, d: int, maxdeg: int, terms: Mapping[Word, QQ] | None = None):
        self.d = d
        self.maxdeg = maxdeg
        self.terms: dict[Word, QQ] = {EMPTY_WORD: Q1}
        if terms:
            for w, c in terms.items():
                c = QQ(c)
                if len(w) > maxdeg:
                    raise ValueError("coefficient beyond truncation degree")
                if c != 0:
                    self.terms[w] = c
        self.terms[EMPTY_WORD] = Q1

    def coeff(self, word: Word) -> QQ:
        return self.terms.get(tuple(word), Q0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSignature)
            and (self.d, self.maxdeg) == (other.d, other.maxdeg)
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        return f"TruncatedSignature(d={self.d}, maxdeg={self.maxdeg}, nterms={len(self.terms)})"


def trivial_signature(d: int, maxdeg: int) -> TruncatedSignature:
    return TruncatedSignature(d, maxdeg)


def segment_signature(a: Sequence, maxdeg: int, d: int | None = None) -> TruncatedSignature:
    """Signature of one linear segment with increment vector `a`.

    The coefficient at the word i_1...i_k is a_{i_1} * ... * a_{i_k} / k!.
    """
    vec = [qq(c) for c in a]
    if d is None:
        d = len(vec)
    elif d != len(vec):
        raise ValueError("increment length does not match d")
    support = [i + 1 for i, c in enumerate(vec) if c != 0]
    terms: dict[Word, QQ] = {}
    for k in range(1, maxdeg + 1):
        fk = _factorial_inv(k)
        for word in product(support, repeat=k):
            c = fk
            for letter in word:
                c *= vec[letter - 1]
            terms[word] = c
    return TruncatedSignature(d, maxdeg, terms)


def chen_product(s: TruncatedSignature, t: TruncatedSignature) -> TruncatedSignature:
    """Concatenation product: coefficients convolve over prefix/suffix splits."""
    if (s.d, s.maxdeg) != (t.d, t.maxdeg):
        raise ValueError("signatures must share alphabet and truncation degree")
    terms: dict[Word, QQ] = {}
    for u, cu in s.terms.items():
        for v, cv in t.terms.items():
            if len(u) + len(v) > s.maxdeg:
                continue
            w = u + v
            nc = terms.get(w, Q0) + cu * cv
            if nc == 0:
                terms.pop(w, None)
            else:
                terms[w] = nc
    return TruncatedSignature(s.d, s.maxdeg, terms)


def pl_signature(path: PLPath, maxdeg: int) -> TruncatedSignature:
    """Signature of a piecewise linear path, one Chen factor per segment."""
    sig = trivial_signature(path.d, maxdeg)
    for a in path.increments():
        if all(c == 0 for c in a):
            continue  # a doubled control point is the Chen unit
        sig = chen_product(sig, segment_signature(a, maxdeg, path.d))
    return sig


def pair(sig: TruncatedSignature, x: TensorElement) -> QQ:
    """Evaluate the signature functional on an algebra element."""
    if x.d != sig.d:
        raise ValueError("alphabet mismatch")
    if x.degree() > sig.maxdeg:
        raise ValueError("element degree exceeds the truncation degree")
    total = Q0
    for w, c in x.terms.items():
        s = sig.terms.get(w)
        if s is not None:
            total += c * s
    return total


# ---------------------------------------------------------------------------
# increment polynomials
# ---------------------------------------------------------------------------


class IncrementPolynomial:
    """Sparse polynomial in the increment variables a[s][i], exact coefficients.

    Variables are indexed by segment s = 1..n-1 and coordinate i = 1..d; a
    monomial is stored as its exponent tuple over the (n-1)*d variables.
    """

    __slots__ = ("d", "n", "terms")

    def __init__(self, d: int, n: int, terms: Mapping[Monomial, QQ] | None = None):
        if d < 1 or n < 1:
            raise ValueError("need d >= 1 and n >= 1")
        self.d = d
        self.n = n
        self.terms: dict[Monomial, QQ] = {}
        nvars = (n - 1) * d
        if terms:
            for m, c in terms.items():
                c = QQ(c)
                if len(m) != nvars:
                    raise ValueError("monomial length does not match the variable count")
                if c != 0:
                    self.terms[m] = c

    @property
    def nvars(self) -> int:
        return (self.n - 1) * self.d

    def var_index(self, s: int, i: int) -> int:
        if not (1 <= s <= self.n - 1 and 1 <= i <= self.d):
            raise ValueError(f"no variable a[{s}][{i}] for n={self.n}, d={self.d}")
        return (s - 1) * self.d + (i - 1)

    @classmethod
    def constant(cls, d: int, n: int, value=1) -> "IncrementPolynomial":
        return cls(d, n, {(0,) * ((n - 1) * d): qq(value)})

    @classmethod
    def variable(cls, d: int, n: int, s: int, i: int) -> "IncrementPolynomial":
        mono = [0] * ((n - 1) * d)
        mono[(s - 1) * d + (i - 1)] = 1
        return cls(d, n, {tuple(mono): Q1})

    def _check(self, other: "IncrementPolynomial") -> None:
        if (self.d, self.n) != (other.d, other.n):
            raise ValueError("polynomials live over different variable sets")

    def __add__(self, other: "IncrementPolynomial") -> "IncrementPolynomial":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, Q0) + c
            if nc == 0:
                out.pop(m, None)
            else:
                out[m] = nc
        return IncrementPolynomial(self.d, self.n, out)

    def __sub__(self, other: "IncrementPolynomial") -> "IncrementPolynomial":
        return self + (-other)

    def __neg__(self) -> "IncrementPolynomial":
        return IncrementPolynomial(self.d, self.n, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "IncrementPolynomial") -> "IncrementPolynomial":
        self._check(other)
        out: dict[Monomial, QQ] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                nc = out.get(m, Q0) + c1 * c2
                if nc == 0:
                    out.pop(m, None)
                else:
                    out[m] = nc
        return IncrementPolynomial(self.d, self.n, out)

    def scale(self, scalar) -> "IncrementPolynomial":
        s = qq(scalar)
        if s == 0:
            return IncrementPolynomial(self.d, self.n)
        return IncrementPolynomial(self.d, self.n, {m: c * s for m, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IncrementPolynomial)
            and (self.d, self.n) == (other.d, other.n)
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def evaluate(self, increments: Sequence[Sequence]) -> QQ:
        """Evaluate at concrete increment vectors (one per segment)."""
        if len(increments) != self.n - 1:
            raise ValueError("expected one increment vector per segment")
        values = [qq(c) for vec in increments for c in vec]
        if len(values) != self.nvars:
            raise ValueError("increment vectors do not match d")
        total = Q0
        for m, c in self.terms.items():
            term = c
            for idx, e in enumerate(m):
                if e:
                    term *= values[idx] ** e
            total += term
        return total

    def __repr__(self) -> str:
        return f"IncrementPolynomial(d={self.d}, n={self.n}, nterms={len(self.terms)})"


# ---------------------------------------------------------------------------
# the symbolic signature map
# ---------------------------------------------------------------------------


class SigPolyCalculator:
    """Computes signature polynomials for n-point paths in R^d.

    The Chen recursion over the first segment is memoized on (segment,
    suffix word), which shares work across the many words of a graded batch.
    """

    def __init__(self, d: int, n: int):
        if d < 1 or n < 1:
            raise ValueError("need d >= 1 and n >= 1")
        self.d = d
        self.n = n
        self._memo: dict[tuple[int, Word], dict[Monomial, QQ]] = {}
        self._zero_mono = (0,) * ((n - 1) * d)

    def _segment_monomial(self, s: int, word: Word) -> Monomial:
        mono = list(self._zero_mono)
        base = (s - 1) * self.d
        for letter in word:
            mono[base + letter - 1] += 1
        return tuple(mono)

    def _poly(self, s: int, word: Word) -> dict[Monomial, QQ]:
        # polynomial of `word` on segments s..n-1
        if s == self.n:
            return {self._zero_mono: Q1} if not word else {}
        key = (s, word)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        out: dict[Monomial, QQ] = {}
        for j in range(len(word) + 1):
            tail = self._poly(s + 1, word[j:])
            if not tail:
                continue
            coeff = _factorial_inv(j)
            if j == 0:
                for m, c in tail.items():
                    nc = out.get(m, Q0) + c
                    if nc == 0:
                        out.pop(m, None)
                    else:
                        out[m] = nc
                continue
            seg = self._segment_monomial(s, word[:j])
            for m, c in tail.items():
                key2 = tuple(a + b for a, b in zip(m, seg))
                nc = out.get(key2, Q0) + coeff * c
                if nc == 0:
                    out.pop(key2, None)
                else:
                    out[key2] = nc
        self._memo[key] = out
        return out

    def word_poly(self, word: Iterable[int]) -> IncrementPolynomial:
        w = tuple(word)
        if any(not 1 <= letter <= self.d for letter in w):
            raise ValueError("word letters outside the alphabet")
        return IncrementPolynomial(self.d, self.n, self._poly(1, w))

    def element_poly(self, x: TensorElement) -> IncrementPolynomial:
        if x.d != self.d:
            raise ValueError("alphabet mismatch")
        out: dict[Monomial, QQ] = {}
        for w, coeff in x.terms.items():
            for m, c in self._poly(1, w).items():
                nc = out.get(m, Q0) + coeff * c
                if nc == 0:
                    out.pop(m, None)
                else:
                    out[m] = nc
        return IncrementPolynomial(self.d, self.n, out)


def signature_polynomial(x, n: int, d: int | None = None) -> IncrementPolynomial:
    """Signature polynomial of a word or element on a generic n-point path."""
    if isinstance(x, TensorElement):
        calc = SigPolyCalculator(x.d if d is None else d, n)
        return calc.element_poly(x)
    w = tuple(x)
    if d is None:
        d = max(w, default=1)
    return SigPolyCalculator(d, n).word_poly(w)


# ---------------------------------------------------------------------------
# linear substitutions of increment variables
# ---------------------------------------------------------------------------


class LinearSubstitution:
    """Substitute every increment variable by a linear form in new variables.

    `forms[v]` lists (target variable, coefficient) pairs.  Expansions are
    cached per monomial, which matters when the same substitution is applied
    to the polynomials of a whole graded batch of words.
    """

    def __init__(self, d: int, n_in: int, n_out: int, forms: Mapping[int, Sequence[tuple[int, QQ]]]):
        self.d = d
        self.n_in = n_in
        self.n_out = n_out
        self._nvars_in = (n_in - 1) * d
        self._nvars_out = (n_out - 1) * d
        self._zero_out = (0,) * self._nvars_out
        self.forms = {v: tuple(form) for v, form in forms.items()}
        if set(self.forms) != set(range(self._nvars_in)):
            raise ValueError("every input variable needs a substitution form")
        self._pow_cache: dict[tuple[int, int], dict[Monomial, QQ]] = {}
        self._mono_cache: dict[Monomial, dict[Monomial, QQ]] = {}

    def _power(self, var: int, e: int) -> dict[Monomial, QQ]:
        key = (var, e)
        cached = self._pow_cache.get(key)
        if cached is not None:
            return cached
        if e == 0:
            result = {self._zero_out: Q1}
        elif e == 1:
            result = {}
            for target, coeff in self.forms[var]:
                mono = list(self._zero_out)
                mono[target] += 1
                result[tuple(mono)] = QQ(coeff)
        else:
            result = _dict_mul(self._power(var, e - 1), self._power(var, 1))
        self._pow_cache[key] = result
        return result

    def _expand_monomial(self, mono: Monomial) -> dict[Monomial, QQ]:
        cached = self._mono_cache.get(mono)
        if cached is not None:
            return cached
        result = {self._zero_out: Q1}
        for var, e in enumerate(mono):
            if e:
                result = _dict_mul(result, self._power(var, e))
        self._mono_cache[mono] = result
        return result

    def apply(self, p: IncrementPolynomial) -> IncrementPolynomial:
        if (p.d, p.n) != (self.d, self.n_in):
            raise ValueError("polynomial does not match the substitution domain")
        out: dict[Monomial, QQ] = {}
        for mono, coeff in p.terms.items():
            for m2, c2 in self._expand_monomial(mono).items():
                nc = out.get(m2, Q0) + coeff * c2
                if nc == 0:
                    out.pop(m2, None)
                else:
                    out[m2] = nc
        return IncrementPolynomial(self.d, self.n_out, out)


def _dict_mul(p: dict[Monomial, QQ], q: dict[Monomial, QQ]) -> dict[Monomial, QQ]:
    out: dict[Monomial, QQ] = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            nc = out.get(m, Q0) + c1 * c2
            if nc == 0:
                out.pop(m, None)
            else:
                out[m] = nc
    return out


def permutation_substitution(d: int, n: int, sigma: Sequence[int]) -> LinearSubstitution:
    """Substitution realizing control-point permutation on increment variables.

    After relabeling points by sigma, the t-th increment becomes
    x_{sigma(t+1)} - x_{sigma(t)}, i.e. a signed consecutive sum of the
    original increments.
    """
    images = tuple(sigma)
    if sorted(images) != list(range(1, n + 1)):
        raise ValueError("sigma must be a permutation of 1..n in one-line notation")
    forms: dict[int, list[tuple[int, QQ]]] = {}
    for t in range(1, n):
        a, b = images[t - 1], images[t]
        sign = Q1 if b > a else -Q1
        lo, hi = (a, b) if b > a else (b, a)
        for i in range(1, d + 1):
            var = (t - 1) * d + (i - 1)
            forms[var] = [((s - 1) * d + (i - 1), sign) for s in range(lo, hi)]
    return LinearSubstitution(d, n, n, forms)


def permute_control_points(p: IncrementPolynomial, sigma: Sequence[int]) -> IncrementPolynomial:
    """Re-express p(x_{sigma(1)}, ..., x_{sigma(n)}) in the original increments."""
    images = tuple(sigma)
    if images == tuple(range(1, p.n + 1)):
        return p
    return permutation_substitution(p.d, p.n, images).apply(p)


def substitute_collinear(p: IncrementPolynomial, i: int, lam) -> IncrementPolynomial:
    """Substitute x_i := lam*x_{i-1} + (1-lam)*x_{i+1} and drop the point.

    The two increments adjacent to x_i collapse onto the merged increment
    x_{i+1} - x_{i-1} with weights (1-lam) and lam; later segments shift
    down by one.
    """
    if not 1 < i < p.n:
        raise ValueError("collinear substitution needs an interior index")
    lam = qq(lam)
    d, n = p.d, p.n
    forms: dict[int, list[tuple[int, QQ]]] = {}
    for s in range(1, n):
        if s < i - 1:
            s_out, weight = s, Q1
        elif s == i - 1:
            s_out, weight = i - 1, Q1 - lam
        elif s == i:
            s_out, weight = i - 1, lam
        else:
            s_out, weight = s - 1, Q1
        for coord in range(1, d + 1):
            var = (s - 1) * d + (coord - 1)
            if weight == 0:
                forms[var] = []
            else:
                forms[var] = [((s_out - 1) * d + (coord - 1), weight)]
    return LinearSubstitution(d, n, n - 1, forms).apply(p)


def closure_substitution(d: int, m: int, side: str) -> LinearSubstitution:
    """Substitution that closes an m-segment path into a loop.

    For the right closure the appended increment is minus the total
    displacement; for the left closure the prepended one is, and the
    original segments shift up by one.  Both map polynomials over m+1
    segments to polynomials over the m original segments.
    """
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    forms: dict[int, list[tuple[int, QQ]]] = {}
    for i in range(1, d + 1):
        closing = [((s - 1) * d + (i - 1), -Q1) for s in range(1, m + 1)]
        if side == "right":
            for s in range(1, m + 1):
                forms[(s - 1) * d + (i - 1)] = [((s - 1) * d + (i - 1), Q1)]
            forms[m * d + (i - 1)] = closing
        else:
            forms[i - 1] = closing
            for s in range(2, m + 2):
                forms[(s - 1) * d + (i - 1)] = [((s - 2) * d + (i - 1), Q1)]
    return LinearSubstitution(d, m + 2, m + 1, forms)


# ---------------------------------------------------------------------------
# polynomial text notation
# ---------------------------------------------------------------------------

_VAR_RE = re.compile(r"a\[(\d+)\]\[(\d+)\](?:\^(\d+))?")
_POLY_TERM_RE = re.compile(r"^(\d+(?:/\d+)?)?((?:\*?a\[\d+\]\[\d+\](?:\^\d+)?)*)$")


def polynomial_to_text(p: IncrementPolynomial) -> str:
    """Canonical text form, monomials in graded order then by exponents."""
    if not p.terms:
        return "0"
    parts: list[str] = []
    for mono in sorted(p.terms, key=lambda m: (sum(m), tuple(-e for e in m))):
        c = p.terms[mono]
        factors = []
        for idx, e in enumerate(mono):
            if not e:
                continue
            s, i = divmod(idx, p.d)
            var = f"a[{s + 1}][{i + 1}]"
            factors.append(var if e == 1 else f"{var}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = f"{mag}*" + "*".join(factors)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def polynomial_to_x_text(p: IncrementPolynomial) -> str:
    """Render a polynomial in raw point coordinates x[i][j].

    Increments are expanded as a[s][i] = x[s+1][i] - x[s][i]; the result is
    for display only, the increment form stays the computational carrier.
    """
    d, n = p.d, p.n
    nx = n * d
    zero = (0,) * nx
    expanded: dict[Monomial, QQ] = {}
    pow_cache: dict[tuple[int, int], dict[Monomial, QQ]] = {}

    def var_power(var: int, e: int) -> dict[Monomial, QQ]:
        cached = pow_cache.get((var, e))
        if cached is not None:
            return cached
        if e == 0:
            result = {zero: Q1}
        else:
            s, i = divmod(var, d)
            hi = list(zero)
            hi[(s + 1) * d + i] = 1
            lo = list(zero)
            lo[s * d + i] = 1
            base = {tuple(hi): Q1, tuple(lo): -Q1}
            result = _dict_mul(var_power(var, e - 1), base)
        pow_cache[(var, e)] = result
        return result

    for mono, coeff in p.terms.items():
        part = {zero: coeff}
        for var, e in enumerate(mono):
            if e:
                part = _dict_mul(part, var_power(var, e))
        for m2, c2 in part.items():
            nc = expanded.get(m2, Q0) + c2
            if nc == 0:
                expanded.pop(m2, None)
            else:
                expanded[m2] = nc
    if not expanded:
        return "0"
    parts: list[str] = []
    for mono in sorted(expanded, key=lambda m: (sum(m), tuple(-e for e in m))):
        c = expanded[mono]
        factors = []
        for idx, e in enumerate(mono):
            if not e:
                continue
            i, j = divmod(idx, d)
            var = f"x[{i + 1}][{j + 1}]"
            factors.append(var if e == 1 else f"{var}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = f"{mag}*" + "*".join(factors)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def parse_polynomial(text: str, d: int, n: int) -> IncrementPolynomial:
    """Parse the polynomial text notation (whitespace-insensitive)."""
    compact = "".join(text.split())
    if compact in ("", "0"):
        return IncrementPolynomial(d, n)
    nvars = (n - 1) * d
    terms: dict[Monomial, QQ] = {}
    for tok in re.findall(r"[+-]?[^+-]+", compact):
        sign = Q1
        if tok[0] == "+":
            tok = tok[1:]
        elif tok[0] == "-":
            sign = -Q1
            tok = tok[1:]
        m = _POLY_TERM_RE.match(tok)
        if not m:
            raise ValueError(f"cannot parse monomial {tok!r}")
        coeff_text, var_text = m.groups()
        coeff = sign * (qq(coeff_text) if coeff_text else Q1)
        mono = [0] * nvars
        for s_text, i_text, e_text in _VAR_RE.findall(var_text or ""):
            s, i = int(s_text), int(i_text)
            if not (1 <= s <= n - 1 and 1 <= i <= d):
                raise ValueError(f"variable a[{s}][{i}] outside n={n}, d={d}")
            mono[(s - 1) * d + (i - 1)] += int(e_text) if e_text else 1
        key = tuple(mono)
        nc = terms.get(key, Q0) + coeff
        if nc == 0:
            terms.pop(key, None)
        else:
            terms[key] = nc
    return IncrementPolynomial(d, n, terms)

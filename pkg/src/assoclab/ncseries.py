"""Truncated noncommutative power series over the alphabet {X0, X1}.

Words are plain strings over the characters '0' and '1'; the empty word is
the constant slot.  A series is a dict word -> coefficient together with a
truncation order W: every operation silently discards words longer than W.

Coefficients are duck-typed: exact work uses int/Fraction, numeric work uses
raw mpmath.mpf at a caller-managed precision, and mu-graded work uses
scalars.QuadExt.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, Iterator, Tuple

from .scalars import is_zero_scalar, scalar_div_int, scalar_inv, scalar_magnitude

Index = Tuple[int, ...]

_SWAP01 = str.maketrans("01", "10")


def check_index(index) -> Index:
    index = tuple(index)
    if not index or any((not isinstance(k, int)) or k < 1 for k in index):
        raise ValueError(f"not a composition of positive integers: {index!r}")
    return index


def is_admissible(index) -> bool:
    index = check_index(index)
    return index[-1] >= 2


def index_to_word(index) -> str:
    """Word encoding of a composition, last exponent block leftmost.

    (k1, ..., km) maps to X0^{km-1} X1 ... X0^{k1-1} X1.  This function and
    word_to_index are the only two places where the direction of the
    encoding is spelled out; everything else goes through them.
    """
    index = check_index(index)
    return "".join("0" * (k - 1) + "1" for k in reversed(index))


def word_to_index(word: str) -> Index:
    if not word or set(word) - {"0", "1"} or word[-1] != "1":
        raise ValueError(f"word {word!r} does not encode a composition")
    parts = word.split("1")[:-1]
    return tuple(len(p) + 1 for p in reversed(parts))


def zeta_of(f: "NCSeries", index):
    """Zeta value attached to a series: (-1)^depth times the coefficient of
    the word encoding `index`."""
    index = check_index(index)
    if sum(index) > f.W:
        raise ValueError(f"index weight {sum(index)} exceeds truncation {f.W}")
    c = f.coeff(index_to_word(index))
    return -c if len(index) % 2 else c


def words_of_length(n: int) -> Iterator[str]:
    if n == 0:
        yield ""
        return
    for bits in product("01", repeat=n):
        yield "".join(bits)


def is_convergent_word(w: str) -> bool:
    """Words whose coefficient needs no regularization: the constant slot,
    plus anything starting with '0' and ending with '1'."""
    return w == "" or (w[0] == "0" and w[-1] == "1")


class NCSeries:
    __slots__ = ("W", "coeffs")

    def __init__(self, W: int, coeffs: Dict[str, object] = None):
        if W < 0:
            raise ValueError("truncation order must be >= 0")
        self.W = W
        self.coeffs = {}
        if coeffs:
            for w, c in coeffs.items():
                if len(w) <= W and not is_zero_scalar(c):
                    self.coeffs[w] = c

    @classmethod
    def one(cls, W: int, unit=1) -> "NCSeries":
        return cls(W, {"": unit})

    @classmethod
    def gen(cls, W: int, letter: str, c=1) -> "NCSeries":
        if letter not in ("0", "1"):
            raise ValueError(f"unknown letter {letter!r}")
        return cls(W, {letter: c})

    def coeff(self, word: str):
        return self.coeffs.get(word, 0)

    def _check_same_W(self, other: "NCSeries"):
        if self.W != other.W:
            raise ValueError(
                f"truncation orders differ: {self.W} vs {other.W}"
            )

    def __add__(self, other: "NCSeries") -> "NCSeries":
        self._check_same_W(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out[w] + c if w in out else c
        return NCSeries(self.W, out)

    def __sub__(self, other: "NCSeries") -> "NCSeries":
        self._check_same_W(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out[w] - c if w in out else -c
        return NCSeries(self.W, out)

    def __neg__(self) -> "NCSeries":
        return NCSeries(self.W, {w: -c for w, c in self.coeffs.items()})

    def scale(self, s) -> "NCSeries":
        return NCSeries(self.W, {w: c * s for w, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, NCSeries):
            return concat_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def truncate(self, W: int) -> "NCSeries":
        if W > self.W:
            raise ValueError(f"cannot extend truncation {self.W} to {W}")
        return NCSeries(W, {w: c for w, c in self.coeffs.items() if len(w) <= W})

    def degree_part(self, n: int) -> Dict[str, object]:
        return {w: c for w, c in self.coeffs.items() if len(w) == n}

    def max_abs(self):
        if not self.coeffs:
            return 0
        return max(scalar_magnitude(c) for c in self.coeffs.values())

    def is_zero(self, tol=0) -> bool:
        return all(is_zero_scalar(c, tol) for c in self.coeffs.values())

    def __repr__(self):
        n = len(self.coeffs)
        return f"NCSeries(W={self.W}, {n} terms)"


def concat_mul(f: NCSeries, g: NCSeries) -> NCSeries:
    """Concatenation product, truncated at the shared order."""
    f._check_same_W(g)
    out = {}
    W = f.W
    for w1, c1 in f.coeffs.items():
        room = W - len(w1)
        for w2, c2 in g.coeffs.items():
            if len(w2) > room:
                continue
            w = w1 + w2
            p = c1 * c2
            out[w] = out[w] + p if w in out else p
    return NCSeries(W, out)


def series_equal(f: NCSeries, g: NCSeries, tol=0) -> bool:
    f._check_same_W(g)
    for w in set(f.coeffs) | set(g.coeffs):
        if not is_zero_scalar(f.coeff(w) - g.coeff(w), tol):
            return False
    return True


@lru_cache(maxsize=None)
def _shuffle(u: str, v: str):
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    out = {}
    for w, m in _shuffle(u[1:], v):
        key = u[0] + w
        out[key] = out.get(key, 0) + m
    for w, m in _shuffle(u, v[1:]):
        key = v[0] + w
        out[key] = out.get(key, 0) + m
    return tuple(sorted(out.items()))


def shuffle_words(u: str, v: str) -> Dict[str, int]:
    """Shuffle product of two words as a multiplicity map."""
    return dict(_shuffle(u, v))


def is_grouplike(f: NCSeries, tol=0) -> bool:
    """Exhaustive shuffle-character test: the coefficient function must be
    multiplicative, I(u)I(v) = sum of I over u shuffled with v, for every
    pair of nonempty words fitting inside the truncation."""
    if not is_zero_scalar(f.coeff("") - 1, tol):
        return False
    by_len = {n: list(words_of_length(n)) for n in range(1, f.W)}
    for n in range(2, f.W + 1):
        for a in range(1, n):
            for u in by_len[a]:
                cu = f.coeff(u)
                for v in by_len[n - a]:
                    lhs = cu * f.coeff(v)
                    rhs = 0
                    for w, m in _shuffle(u, v):
                        rhs = rhs + m * f.coeff(w)
                    if not is_zero_scalar(lhs - rhs, tol):
                        return False
    return True


def antipode(f: NCSeries) -> NCSeries:
    """Reverse every word and attach (-1)^length; inverts group-like series."""
    out = {}
    for w, c in f.coeffs.items():
        rw = w[::-1]
        cc = -c if len(w) % 2 else c
        out[rw] = out[rw] + cc if rw in out else cc
    return NCSeries(f.W, out)


_scalar_inv = scalar_inv
_scalar_div_int = scalar_div_int


def series_inverse(f: NCSeries) -> NCSeries:
    c0 = f.coeff("")
    if is_zero_scalar(c0):
        raise ValueError("constant term must be invertible")
    inv0 = _scalar_inv(c0)
    u = (f - NCSeries.one(f.W, c0)).scale(inv0)
    out = NCSeries.one(f.W, 1)
    p = NCSeries.one(f.W, 1)
    for k in range(1, f.W + 1):
        p = concat_mul(p, u)
        if not p.coeffs:
            break
        out = out + (p if k % 2 == 0 else -p)
    return out.scale(inv0)


def series_exp(f: NCSeries) -> NCSeries:
    if not is_zero_scalar(f.coeff("")):
        raise ValueError("exp needs a zero constant term")
    out = NCSeries.one(f.W, 1)
    term = NCSeries.one(f.W, 1)
    for k in range(1, f.W + 1):
        term = concat_mul(term, f)
        if not term.coeffs:
            break
        term = NCSeries(f.W, {w: _scalar_div_int(c, k) for w, c in term.coeffs.items()})
        out = out + term
    return out


def series_log(f: NCSeries) -> NCSeries:
    if not is_zero_scalar(f.coeff("") - 1):
        raise ValueError("log needs constant term exactly 1")
    u = f - NCSeries.one(f.W, f.coeff(""))
    out = NCSeries(f.W, {})
    p = NCSeries.one(f.W, 1)
    for k in range(1, f.W + 1):
        p = concat_mul(p, u)
        if not p.coeffs:
            break
        sign = 1 if k % 2 else -1
        out = out + NCSeries(
            f.W, {w: _scalar_div_int(c * sign, k) for w, c in p.coeffs.items()}
        )
    return out


def pi_project(f: NCSeries) -> NCSeries:
    """Keep the constant slot and the convergent words only."""
    return NCSeries(
        f.W, {w: c for w, c in f.coeffs.items() if is_convergent_word(w)}
    )


def regularized_coeff(z: NCSeries, word: str):
    """Coefficient of an arbitrary word expressed through convergent ones.

    Strip the leading X1-run and trailing X0-run of the word, then expand
    both runs shuffle-wise; only the convergent words surviving the
    projection are read off from z.  For a shuffle character vanishing on
    the single letters this reproduces the character's own value, e.g. the
    weight-two word X1 X0 comes out as minus the coefficient of X0 X1.
    """
    if set(word) - {"0", "1"}:
        raise ValueError(f"bad word {word!r}")
    if len(word) > z.W:
        raise ValueError(f"word longer than truncation: {word!r}")
    r = len(word) - len(word.lstrip("1"))
    rest = word[r:]
    s = len(rest) - len(rest.rstrip("0"))
    core = rest[: len(rest) - s] if s else rest
    total = 0
    for a in range(r + 1):
        for b in range(s + 1):
            inner = "1" * (r - a) + core + "0" * (s - b)
            sign = -1 if (a + b) % 2 else 1
            for w1, m1 in _shuffle("1" * a, inner):
                for w, m2 in _shuffle(w1, "0" * b):
                    if is_convergent_word(w):
                        total = total + (sign * m1 * m2) * z.coeff(w)
    return total


def series_from_admissible(W: int, zeta_fn: Callable[[Index], object], one=1) -> NCSeries:
    """Build the full group-like extension from admissible zeta data.

    Convergent words get (-1)^depth * zeta of their composition; every
    other word is then forced by shuffle regularization.  Single letters
    come out zero.
    """
    coeffs = {"": one}
    for n in range(1, W + 1):
        for w in words_of_length(n):
            if w and is_convergent_word(w):
                k = word_to_index(w)
                z = zeta_fn(k)
                coeffs[w] = -z if len(k) % 2 else z
    f = NCSeries(W, coeffs)
    extra = {}
    for n in range(1, W + 1):
        for w in words_of_length(n):
            if not is_convergent_word(w):
                c = regularized_coeff(f, w)
                if not is_zero_scalar(c):
                    extra[w] = c
    merged = dict(f.coeffs)
    merged.update(extra)
    return NCSeries(W, merged)


def duality_partner(index) -> Index:
    """Involution on admissible compositions: reverse the word and swap the
    letters.  (3) pairs with (1,2)."""
    index = check_index(index)
    w = index_to_word(index)
    if not is_convergent_word(w):
        raise ValueError(f"duality needs an admissible composition: {index}")
    return word_to_index(w[::-1].translate(_SWAP01))


def substitute(f: NCSeries, images: Dict[str, NCSeries]) -> NCSeries:
    """Algebra substitution X_i -> images[i]; images must have no constant
    term so the grading is respected."""
    W = f.W
    for letter, img in images.items():
        if img.W != W:
            raise ValueError("image truncation order mismatch")
        if not is_zero_scalar(img.coeff("")):
            raise ValueError(f"image of {letter!r} has a constant term")
    out = NCSeries(W, {})
    for w, c in sorted(f.coeffs.items()):
        p = NCSeries.one(W, 1)
        dead = False
        for ch in w:
            p = concat_mul(p, images[ch])
            if not p.coeffs:
                dead = True
                break
        if not dead:
            out = out + p.scale(c)
    return out


def grt_mul(f: NCSeries, g: NCSeries) -> NCSeries:
    """Group operation used for composing degenerate associators:
    (f, g) -> g * f(X0, g^{-1} X1 g)."""
    f._check_same_W(g)
    W = f.W
    ginv = series_inverse(g)
    x1_img = concat_mul(concat_mul(ginv, NCSeries.gen(W, "1")), g)
    subbed = substitute(f, {"0": NCSeries.gen(W, "0"), "1": x1_img})
    return concat_mul(g, subbed)


def _is_lyndon(w: str) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def lyndon_words(max_len: int):
    """All Lyndon words over '01' of length <= max_len, lexicographic."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append("".join(str(x) for x in w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == 1:
            w.pop()
    return out


def _bracket(w: str, W: int) -> NCSeries:
    if len(w) == 1:
        return NCSeries.gen(W, w)
    for i in range(1, len(w)):
        if _is_lyndon(w[i:]):
            left = _bracket(w[:i], W)
            right = _bracket(w[i:], W)
            return concat_mul(left, right) - concat_mul(right, left)
    raise AssertionError(f"no standard factorization for {w!r}")


def random_grouplike(W: int, seed: int) -> NCSeries:
    """exp of a random Lie element: integer coefficients in [-10, 10] over
    the Lyndon basis, so the result is exactly group-like."""
    rng = random.Random(seed)
    lie = NCSeries(W, {})
    for w in lyndon_words(W):
        c = rng.randint(-10, 10)
        if c:
            lie = lie + _bracket(w, W).scale(Fraction(c))
    return series_exp(lie)


# ---------------------------------------------------------------------------
# line-oriented serialization

def _coeff_is_exact(c) -> bool:
    return isinstance(c, (int, Fraction))


def save_series(f: NCSeries, path, digits: int = None, extra_header: str = "") -> None:
    """Write a series to a text file, one word per line.

    Exact series use `p/q` coefficients.  Floating series additionally store
    the exact mantissa/exponent pair so a reload at the same precision is
    bit-identical.
    """
    from mpmath import mp

    exact = all(_coeff_is_exact(c) for c in f.coeffs.values())
    lines = []
    if exact:
        header = f"ncseries W={f.W} kind=rational"
        if extra_header:
            header += " " + extra_header
        lines.append(header)
        for w in sorted(f.coeffs, key=lambda w: (len(w), w)):
            lines.append(f"{w or 'e'} {Fraction(f.coeffs[w])}")
    else:
        if digits is None:
            raise ValueError("digits is required when saving a decimal series")
        header = f"ncseries W={f.W} kind=decimal digits={digits}"
        if extra_header:
            header += " " + extra_header
        lines.append(header)
        with mp.workdps(digits + 10):
            for w in sorted(f.coeffs, key=lambda w: (len(w), w)):
                c = f.coeffs[w]
                if isinstance(c, int):
                    c = mp.mpf(c)
                elif isinstance(c, Fraction):
                    c = mp.mpf(c.numerator) / c.denominator
                lines.append(f"{w or 'e'} {mp.nstr(c, digits)} {_mpf_token(c)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _mpf_token(c) -> str:
    sign, man, exp, _bc = c._mpf_
    m = -int(man) if sign else int(man)
    return f"bin:{m}:{exp}"


def _mpf_from_token(tok: str):
    from mpmath import mp

    _, man, exp = tok.split(":")
    return mp.ldexp(int(man), int(exp))


def parse_series_header(line: str):
    fields = line.strip().split()
    if not fields or fields[0] != "ncseries":
        raise ValueError("not a series file: bad header")
    opts = {}
    for field in fields[1:]:
        if "=" not in field:
            raise ValueError(f"bad header field {field!r}")
        k, v = field.split("=", 1)
        opts[k] = v
    if "W" not in opts or "kind" not in opts:
        raise ValueError("header must carry W= and kind=")
    return opts


def load_series(path) -> NCSeries:
    from mpmath import mp

    with open(path) as fh:
        raw = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not raw:
        raise ValueError("empty series file")
    opts = parse_series_header(raw[0])
    W = int(opts["W"])
    kind = opts["kind"]
    if kind not in ("rational", "decimal"):
        raise ValueError(f"unknown scalar kind {kind!r}")
    digits = int(opts["digits"]) if kind == "decimal" else None
    coeffs = {}
    for ln in raw[1:]:
        parts = ln.split()
        wtok = parts[0]
        w = "" if wtok == "e" else wtok
        if w and (set(w) - {"0", "1"}):
            raise ValueError(f"bad word token {wtok!r}")
        if len(w) > W:
            raise ValueError(f"word {wtok!r} exceeds truncation {W}")
        if w in coeffs:
            raise ValueError(f"duplicate word {wtok!r}")
        if kind == "rational":
            if len(parts) != 2:
                raise ValueError(f"bad line {ln!r}")
            coeffs[w] = Fraction(parts[1])
        else:
            if len(parts) not in (2, 3):
                raise ValueError(f"bad line {ln!r}")
            with mp.workdps(digits + 10):
                if len(parts) == 3 and parts[2].startswith("bin:"):
                    coeffs[w] = _mpf_from_token(parts[2])
                else:
                    coeffs[w] = mp.mpf(parts[1])
    return NCSeries(W, coeffs)

"""Horizontal chord algebras on three and four strands.

Generators t_ij (i < j) with the locality relations: t_ij commutes with
t_kl for disjoint index pairs, and [t_ij, t_ik + t_jk] = 0 for every
triple.  Letters are small ints:

    0 = t12   1 = t13   2 = t23   3 = t14   4 = t24   5 = t34

and 6 stands for the central element c = t12 + t13 + t23 of the
three-strand algebra, which only ever appears in normal forms.

Monomial basis, with the strand-4 block leftmost:

    a3:  (word over {t13, t23}) * c^k
    a4:  (word over {t14, t24, t34}) * (word over {t13, t23}) * c^k

The rewriting engine is a left-multiplication fold: prepending a letter to
a normal-form monomial lands back in normal form after at most one pass of
quadratic corrections, because the strand-4 letters span an ideal on which
the three-strand letters act by derivations.  The nine quadratic rules are
derived from the defining relations (each is one instance of
[t_ij, t_ik + t_jk] = 0 combined with a disjointness swap) and are pinned
by regression tests rather than trusted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Tuple

from .ncseries import NCSeries, concat_mul, is_grouplike
from .scalars import (
    QuadExt,
    is_zero_scalar,
    scalar_div_int,
    scalar_inv,
    scalar_magnitude,
)

T12, T13, T23, T14, T24, T34 = range(6)
_C = 6

LETTER_NAMES = {0: "t12", 1: "t13", 2: "t23", 3: "t14", 4: "t24", 5: "t34", 6: "c"}

_ARENA_LETTERS = {"a3": frozenset({0, 1, 2}), "a4": frozenset({0, 1, 2, 3, 4, 5})}

# [s, f] for an a3 letter s acting on a strand-4 letter f, written in the
# free block; empty tuple means they commute.
_S_COMM = {
    (1, 3): (((3, 5), 1), ((5, 3), -1)),
    (1, 4): (),
    (1, 5): (((5, 3), 1), ((3, 5), -1)),
    (2, 3): (),
    (2, 4): (((4, 5), 1), ((5, 4), -1)),
    (2, 5): (((5, 4), 1), ((4, 5), -1)),
}

# [c, f]: c differs from the full four-strand center by -(t14+t24+t34),
# so [c, f] = f*T - T*f with T = t14 + t24 + t34.
_C_COMM = {
    3: (((3, 4), 1), ((3, 5), 1), ((4, 3), -1), ((5, 3), -1)),
    4: (((4, 3), 1), ((4, 5), 1), ((3, 4), -1), ((5, 4), -1)),
    5: (((5, 3), 1), ((5, 4), 1), ((3, 5), -1), ((4, 5), -1)),
}

Key = Tuple[bytes, bytes, int]
_UNIT_KEY: Key = (b"", b"", 0)


def _kdeg(key: Key) -> int:
    return len(key[0]) + len(key[1]) + key[2]


def _acc(d, key, c):
    if key in d:
        v = d[key] + c
        if v == 0:
            del d[key]
        else:
            d[key] = v
    else:
        d[key] = c


def _lmul_f(letter: int, terms, bound: int):
    out = {}
    b = bytes([letter])
    for key, c in terms.items():
        if _kdeg(key) + 1 > bound:
            continue
        _acc(out, (b + key[0], key[1], key[2]), c)
    return out


def _lmul_s(letter: int, terms, bound: int):
    out = {}
    b = bytes([letter])
    for (f, s, k), c in terms.items():
        if len(f) + len(s) + k + 1 > bound:
            continue
        _acc(out, (f, b + s, k), c)
        for i, fl in enumerate(f):
            for pair, sign in _S_COMM[(letter, fl)]:
                _acc(out, (f[:i] + bytes(pair) + f[i + 1:], s, k), sign * c)
    return out


def _lmul_c(terms, bound: int):
    out = {}
    for (f, s, k), c in terms.items():
        if len(f) + len(s) + k + 1 > bound:
            continue
        _acc(out, (f, s, k + 1), c)
        for i, fl in enumerate(f):
            for pair, sign in _C_COMM[fl]:
                _acc(out, (f[:i] + bytes(pair) + f[i + 1:], s, k), sign * c)
    return out


def _lmul(letter: int, terms, bound: int):
    if letter in (3, 4, 5):
        return _lmul_f(letter, terms, bound)
    if letter in (1, 2):
        return _lmul_s(letter, terms, bound)
    if letter == _C:
        return _lmul_c(terms, bound)
    if letter == 0:
        # t12 = c - t13 - t23
        out = _lmul_c(terms, bound)
        for key, c in _lmul_s(1, terms, bound).items():
            _acc(out, key, -c)
        for key, c in _lmul_s(2, terms, bound).items():
            _acc(out, key, -c)
        return out
    raise ValueError(f"unknown letter {letter}")


def _left_apply_key(key: Key, terms, W: int):
    """Normal-form product key * (sum of terms), truncated at W."""
    f, s, k = key
    d = _kdeg(key)
    E = {k2: c2 for k2, c2 in terms.items() if _kdeg(k2) + d <= W}
    if not E:
        return E
    for j in range(k):
        E = _lmul_c(E, W - (k - 1 - j) - len(s) - len(f))
        if not E:
            return E
    for idx in range(len(s) - 1, -1, -1):
        E = _lmul_s(s[idx], E, W - idx - len(f))
        if not E:
            return E
    if f:
        out = {}
        for (f2, s2, k2), c in E.items():
            if len(f) + len(f2) + len(s2) + k2 <= W:
                _acc(out, (f + f2, s2, k2), c)
        E = out
    return E


class BraidElement:
    """Sparse element of the three- or four-strand chord algebra, truncated
    in total degree."""

    __slots__ = ("arena", "W", "terms")

    def __init__(self, arena: str, W: int, terms=None, _normalized=False):
        if arena not in _ARENA_LETTERS:
            raise ValueError(f"unknown arena {arena!r}")
        self.arena = arena
        self.W = W
        if terms is None:
            self.terms = {}
        elif _normalized:
            self.terms = terms
        else:
            self.terms = {
                key: c
                for key, c in terms.items()
                if _kdeg(key) <= W and not is_zero_scalar(c)
            }
        if arena == "a3":
            for key in self.terms:
                if key[0]:
                    raise ValueError("three-strand element with strand-4 letters")

    @classmethod
    def unit(cls, arena: str, W: int, one=1) -> "BraidElement":
        return cls(arena, W, {_UNIT_KEY: one})

    @classmethod
    def letter(cls, arena: str, W: int, i: int, c=1) -> "BraidElement":
        if i not in _ARENA_LETTERS[arena]:
            raise ValueError(f"letter {i} not in arena {arena}")
        return element_from_letter_words(arena, W, [((i,), c)])

    def _check(self, other: "BraidElement"):
        if self.arena != other.arena:
            raise ValueError("arena mismatch")
        if self.W != other.W:
            raise ValueError("truncation order mismatch")

    def coeff(self, key: Key):
        return self.terms.get(key, 0)

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            _acc(out, key, c)
        return BraidElement(self.arena, self.W, out, _normalized=True)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            _acc(out, key, -c)
        return BraidElement(self.arena, self.W, out, _normalized=True)

    def __neg__(self):
        return BraidElement(
            self.arena, self.W, {k: -c for k, c in self.terms.items()}, _normalized=True
        )

    def scale(self, s):
        if is_zero_scalar(s):
            return BraidElement(self.arena, self.W, {}, _normalized=True)
        return BraidElement(
            self.arena, self.W, {k: c * s for k, c in self.terms.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, BraidElement):
            return self.scale(other)
        self._check(other)
        out = {}
        for key, cA in self.terms.items():
            for k2, c in _left_apply_key(key, other.terms, self.W).items():
                _acc(out, k2, cA * c)
        return BraidElement(self.arena, self.W, out, _normalized=True)

    def __rmul__(self, other):
        return self.scale(other)

    def truncate(self, W: int) -> "BraidElement":
        if W > self.W:
            raise ValueError("cannot extend truncation")
        return BraidElement(
            self.arena, W, {k: c for k, c in self.terms.items() if _kdeg(k) <= W},
            _normalized=True,
        )

    def degree_terms(self, n: int) -> Dict[Key, object]:
        return {k: c for k, c in self.terms.items() if _kdeg(k) == n}

    def max_abs(self):
        if not self.terms:
            return 0
        return max(scalar_magnitude(c) for c in self.terms.values())

    def is_zero(self, tol=0) -> bool:
        return all(is_zero_scalar(c, tol) for c in self.terms.values())

    def equals(self, other, tol=0) -> bool:
        self._check(other)
        for key in set(self.terms) | set(other.terms):
            if not is_zero_scalar(self.coeff(key) - other.coeff(key), tol):
                return False
        return True

    def __repr__(self):
        return f"BraidElement({self.arena}, W={self.W}, {len(self.terms)} terms)"


def element_from_letter_words(arena: str, W: int, items) -> BraidElement:
    """Sum of letter words, each given as (tuple of letters, coefficient)."""
    allowed = _ARENA_LETTERS[arena]
    total = {}
    for letters, c in items:
        bad = [l for l in letters if l not in allowed]
        if bad:
            raise ValueError(f"letters {bad} not in arena {arena}")
        if len(letters) > W:
            continue
        E = {_UNIT_KEY: 1}
        for pos in range(len(letters) - 1, -1, -1):
            E = _lmul(letters[pos], E, W - pos)
            if not E:
                break
        for key, m in E.items():
            _acc(total, key, c * m)
    return BraidElement(arena, W, total)


def braid_exp(x: BraidElement) -> BraidElement:
    if not is_zero_scalar(x.coeff(_UNIT_KEY)):
        raise ValueError("exp needs a zero constant term")
    out = BraidElement.unit(x.arena, x.W)
    term = BraidElement.unit(x.arena, x.W)
    for j in range(1, x.W + 1):
        term = term * x
        if not term.terms:
            break
        term = BraidElement(
            x.arena, x.W,
            {k: scalar_div_int(c, j) for k, c in term.terms.items()},
            _normalized=True,
        )
        out = out + term
    return out


def braid_inverse(x: BraidElement) -> BraidElement:
    c0 = x.coeff(_UNIT_KEY)
    if is_zero_scalar(c0):
        raise ValueError("constant term must be invertible")
    inv0 = scalar_inv(c0)
    u = (x - BraidElement.unit(x.arena, x.W, c0)).scale(inv0)
    out = BraidElement.unit(x.arena, x.W)
    p = BraidElement.unit(x.arena, x.W)
    for j in range(1, x.W + 1):
        p = p * u
        if not p.terms:
            break
        out = out + (p if j % 2 == 0 else -p)
    return out.scale(inv0)


# ---------------------------------------------------------------------------
# normal-form contract surface

def a4_normal_form(letters, W: int = None, strategy: str = "fold", seed=None):
    """Normal form of a letter word as {(free word, a3 word, c power): int}.

    strategy 'fold' is the production path; 'rewrite' applies local rewrite
    steps picking the first descent, 'rewrite-random' picks descents with a
    seeded rng.  All strategies must agree; tests lean on that.
    """
    letters = tuple(letters)
    if W is None:
        W = len(letters)
    if strategy == "fold":
        E = {_UNIT_KEY: 1}
        for pos in range(len(letters) - 1, -1, -1):
            E = _lmul(letters[pos], E, W - pos)
        return E
    if strategy in ("rewrite", "rewrite-random"):
        rng = random.Random(seed) if strategy == "rewrite-random" else None
        return _nf_rewrite(letters, rng)
    raise ValueError(f"unknown strategy {strategy!r}")


def a3_normal_form(letters, W: int = None, strategy: str = "fold", seed=None):
    """Normal form in the three-strand algebra: {(a3 word, c power): int}."""
    letters = tuple(letters)
    if set(letters) - {0, 1, 2}:
        raise ValueError("three-strand words use letters 0, 1, 2 only")
    full = a4_normal_form(letters, W=W, strategy=strategy, seed=seed)
    out = {}
    for (f, s, k), m in full.items():
        assert not f
        out[(s, k)] = m
    return out


_RANK = {3: 0, 4: 0, 5: 0, 1: 1, 2: 1, 6: 2}

_REWRITE = {}
for _s in (1, 2):
    for _f in (3, 4, 5):
        _REWRITE[(_s, _f)] = (((_f, _s), 1),) + _S_COMM[(_s, _f)]
for _f in (3, 4, 5):
    _REWRITE[(6, _f)] = (((_f, 6), 1),) + _C_COMM[_f]
for _s in (1, 2):
    _REWRITE[(6, _s)] = (((_s, 6), 1),)


def _expand_t12(letters) -> List[Tuple[Tuple[int, ...], int]]:
    words = [((), 1)]
    for l in letters:
        if l == 0:
            words = [
                (w + (r,), sgn * rs)
                for w, sgn in words
                for r, rs in ((6, 1), (1, -1), (2, -1))
            ]
        else:
            words = [(w + (l,), sgn) for w, sgn in words]
    return words


def _nf_rewrite(letters, rng=None):
    out = {}
    work = _expand_t12(letters)
    while work:
        w, coeff = work.pop()
        descents = [
            i for i in range(len(w) - 1) if _RANK[w[i]] > _RANK[w[i + 1]]
        ]
        if not descents:
            f = bytes(l for l in w if l in (3, 4, 5))
            s = bytes(l for l in w if l in (1, 2))
            k = sum(1 for l in w if l == 6)
            _acc(out, (f, s, k), coeff)
            continue
        i = rng.choice(descents) if rng else descents[0]
        for repl, sign in _REWRITE[(w[i], w[i + 1])]:
            work.append((w[:i] + repl + w[i + 2:], coeff * sign))
    return out


def basis_keys(arena: str, n: int) -> List[Key]:
    """All monomial basis keys of total degree n."""
    fletters = (3, 4, 5) if arena == "a4" else ()
    out = []
    for i in range(n + 1):
        if i and not fletters:
            continue
        for j in range(n - i + 1):
            k = n - i - j
            for f in product(fletters, repeat=i):
                for s in product((1, 2), repeat=j):
                    out.append((bytes(f), bytes(s), k))
    return out


def basis_dimension(arena: str, n: int) -> int:
    return len(basis_keys(arena, n))


# ---------------------------------------------------------------------------
# associator equations

# slot images for the five-term equation on four strands, as
# (image of X0, image of X1); the two left slots enter positively.
_PENTAGON_SLOTS = (
    ((T12,), (T23, T24)),
    ((T13, T23), (T34,)),
    ((T23,), (T34,)),
    ((T12, T13), (T24, T34)),
    ((T12,), (T23,)),
)


def _slot_element(phi: NCSeries, img0, img1, W: int, arena: str = "a4") -> BraidElement:
    items = []
    for w, c in phi.coeffs.items():
        if len(w) > W:
            continue
        pools = [img0 if ch == "0" else img1 for ch in w]
        for choice in product(*pools):
            items.append((choice, c))
    return element_from_letter_words(arena, W, items)


def pentagon_residual(phi: NCSeries, W: int = None) -> BraidElement:
    """Five-slot compatibility defect of a candidate series, in the
    four-strand algebra.  Zero exactly when the five-term equation holds up
    to the truncation order."""
    if W is None:
        W = phi.W
    elif W > phi.W:
        raise ValueError("W exceeds the series truncation")
    s = [_slot_element(phi, i0, i1, W) for i0, i1 in _PENTAGON_SLOTS]
    return s[0] * s[1] - s[2] * (s[3] * s[4])


def pentagon_word_columns(word: str, W: int) -> Dict[Key, int]:
    """Linear contribution of a single unknown word to the degree-|word|
    slice of the five-term defect (all other slots at their constant 1)."""
    cols = {}
    for sidx, (img0, img1) in enumerate(_PENTAGON_SLOTS):
        sign = 1 if sidx < 2 else -1
        pools = [img0 if ch == "0" else img1 for ch in word]
        for choice in product(*pools):
            E = {_UNIT_KEY: 1}
            for pos in range(len(choice) - 1, -1, -1):
                E = _lmul(choice[pos], E, W - pos)
            for key, m in E.items():
                _acc(cols, key, sign * m)
    return cols


def _phi_slot_a3(phi: NCSeries, a: int, b: int, W: int, conv) -> BraidElement:
    items = []
    for w, c in phi.coeffs.items():
        if len(w) > W:
            continue
        letters = tuple(a if ch == "0" else b for ch in w)
        items.append((letters, conv(c)))
    return element_from_letter_words("a3", W, items)


def hexagon_residuals(phi: NCSeries, mu2, one=Fraction(1)):
    """Defects of the two six-slot equations, in the three-strand algebra.

    The deformation parameter mu enters only through mu^2; coefficients are
    QuadExt pairs (even part, odd part) over the context d = mu2.  mu2 == 0
    means the parameter itself is zero, which collapses the exponential
    factors to 1.
    """
    W = phi.W
    if is_zero_scalar(mu2):
        def conv(c):
            return c

        def exp_elem(letters):
            return BraidElement.unit("a3", W, one)
    else:
        zero = one - one
        half = one / 2

        def conv(c):
            return QuadExt(c * one, zero, mu2)

        muhalf = QuadExt(zero, half, mu2)

        def exp_elem(letters):
            x = element_from_letter_words("a3", W, [((l,), muhalf) for l in letters])
            return braid_exp(x)

    p13_12 = _phi_slot_a3(phi, 1, 0, W, conv)
    p13_23 = _phi_slot_a3(phi, 1, 2, W, conv)
    p12_23 = _phi_slot_a3(phi, 0, 2, W, conv)
    p23_13 = _phi_slot_a3(phi, 2, 1, W, conv)
    p12_13 = _phi_slot_a3(phi, 0, 1, W, conv)

    e13 = exp_elem((1,))
    e23 = exp_elem((2,))
    e12 = exp_elem((0,))

    lhs_a = exp_elem((1, 2))
    rhs_a = p13_12 * e13 * braid_inverse(p13_23) * e23 * p12_23
    res_a = lhs_a - rhs_a

    lhs_b = exp_elem((0, 1))
    rhs_b = braid_inverse(p23_13) * e13 * p12_13 * e12 * braid_inverse(p12_23)
    res_b = lhs_b - rhs_b
    return res_a, res_b


def hexagon_word_columns(word: str, W: int):
    """Linear contributions of one unknown word to the degree-|word| slices
    of the two six-slot defects."""

    def E(a, b):
        letters = tuple(a if ch == "0" else b for ch in word)
        out = {_UNIT_KEY: 1}
        for pos in range(len(letters) - 1, -1, -1):
            out = _lmul(letters[pos], out, W - pos)
        return out

    col_a, col_b = {}, {}
    for terms, sign in ((E(1, 0), -1), (E(1, 2), 1), (E(0, 2), -1)):
        for key, m in terms.items():
            _acc(col_a, key, sign * m)
    for terms, sign in ((E(2, 1), 1), (E(0, 1), -1), (E(0, 2), 1)):
        for key, m in terms.items():
            _acc(col_b, key, sign * m)
    return col_a, col_b


def two_cycle_residual(phi: NCSeries) -> NCSeries:
    """Defect of the order-two symmetry: swap the two letters throughout,
    multiply back, and compare with 1."""
    swapped = NCSeries(
        phi.W, {w.translate(str.maketrans("01", "10")): c for w, c in phi.coeffs.items()}
    )
    unit = NCSeries.one(phi.W, 1)
    return concat_mul(swapped, phi) - unit


def is_degenerate_associator(phi: NCSeries, tol=0) -> bool:
    """Group-like, five-term defect zero, and both six-slot defects zero
    with the deformation parameter set to zero."""
    if not is_grouplike(phi, tol):
        return False
    if not pentagon_residual(phi).is_zero(tol):
        return False
    res_a, res_b = hexagon_residuals(phi, 0)
    return res_a.is_zero(tol) and res_b.is_zero(tol)


@dataclass
class AssociatorCandidate:
    """A solved or loaded series plus the data needed to check it."""

    phi: NCSeries
    mu2: object = None
    source: str = ""
    seed: int = None
    dims: Tuple[int, ...] = None

    @property
    def W(self) -> int:
        return self.phi.W

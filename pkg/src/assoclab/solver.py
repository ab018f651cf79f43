"""Degree-by-degree construction of rational associators.

At each degree n the pentagon and shuffle conditions are affine-linear in
the 2^n unknown word coefficients: every nonlinear term only involves
degrees below n.  Solving the stacked system and picking the free
coordinates at random therefore walks out an exact group-like series whose
pentagon residual vanishes through the truncation order.  Hexagon rows are
optional; when they are omitted the hexagons still come out satisfied for
mu^2 = -24 * (coefficient-of-(2) reading), which is the point.
"""

import random
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .ncseries import NCSeries, shuffle_words, words_of_length, zeta_of
from .braid import (
    AssociatorCandidate,
    hexagon_residuals,
    hexagon_word_columns,
    pentagon_residual,
    pentagon_word_columns,
)


class AffineSystem(NamedTuple):
    degree: int
    words: List[str]            # column order
    rows: List[Tuple[Dict[str, object], object]]  # (coefficients, rhs)


def _pad_below(phi: NCSeries, n: int) -> NCSeries:
    return NCSeries(n, {w: c for w, c in phi.coeffs.items() if len(w) < n})


def constraints_at_degree(
    phi_below: NCSeries,
    n: int,
    mu2=None,
    pentagon: bool = True,
    shuffle: bool = True,
) -> AffineSystem:
    """Affine rows satisfied by the degree-n coefficients of any solution.

    phi_below must carry all degrees < n.  Rows are indexed by normal-form
    basis monomials (pentagon, hexagons) and by word pairs (shuffle); each
    row is (column coefficients, right-hand side).  Hexagon rows are added
    when mu2 is given; their scale-odd components carry no unknowns and
    appear as consistency rows.
    """
    if n < 1:
        raise ValueError("degree must be positive")
    if phi_below.W < n - 1:
        raise ValueError(f"lower degrees incomplete: series truncated at {phi_below.W} < {n - 1}")
    if phi_below.coeff("") != 1:
        raise ValueError("phi must have constant term 1")
    pad = _pad_below(phi_below, n)
    words = sorted(words_of_length(n), reverse=True)
    rows = []

    if pentagon:
        const = pentagon_residual(pad).degree_terms(n)
        cols = {w: pentagon_word_columns(w, n) for w in words}
        keys = set(const)
        for col in cols.values():
            keys.update(col)
        for key in sorted(keys):
            coeffs = {w: Fraction(cols[w][key]) for w in words if key in cols[w] and cols[w][key]}
            rhs = -const.get(key, 0)
            if coeffs or rhs:
                rows.append((coeffs, rhs))

    if shuffle:
        for a in range(1, n // 2 + 1):
            b = n - a
            us = list(words_of_length(a))
            vs = list(words_of_length(b))
            for u in us:
                for v in vs:
                    if a == b and u > v:
                        continue
                    coeffs = {w: Fraction(m) for w, m in shuffle_words(u, v).items()}
                    rows.append((coeffs, pad.coeff(u) * pad.coeff(v)))

    if mu2 is not None:
        res_a, res_b = hexagon_residuals(pad, mu2)
        cols = {w: hexagon_word_columns(w, n) for w in words}
        for side, res in ((0, res_a), (1, res_b)):
            const = res.degree_terms(n)
            keys = set(const)
            for col_pair in cols.values():
                keys.update(col_pair[side])
            for key in sorted(keys):
                coeffs = {
                    w: Fraction(cols[w][side][key])
                    for w in words
                    if key in cols[w][side] and cols[w][side][key]
                }
                cval = const.get(key)
                if cval is None:
                    ca = cb = 0
                elif mu2 == 0:
                    ca, cb = cval, 0
                else:
                    ca, cb = cval.a, cval.b
                if coeffs or ca:
                    rows.append((coeffs, -ca))
                if cb:
                    rows.append(({}, -cb))  # no unknown carries the odd scale part

    return AffineSystem(n, words, rows)


def solve_affine(system: AffineSystem):
    """Reduced-echelon solve over exact scalars.

    Returns (particular, basis, free_words): particular maps words to
    values with every free coordinate set to 0; basis holds one homogeneous
    vector per free word, normalized to 1 there.
    """
    words = system.words
    ncols = len(words)
    col_of = {w: j for j, w in enumerate(words)}
    seen = set()
    matrix = []
    for coeffs, rhs in system.rows:
        if not coeffs:
            if rhs != 0:
                raise ValueError(
                    f"inconsistent constraint at degree {system.degree}: 0 = {rhs}; "
                    "a failure here would falsify the implementation"
                )
            continue
        row = [Fraction(0)] * (ncols + 1)
        for w, c in coeffs.items():
            row[col_of[w]] = Fraction(c)
        row[ncols] = rhs if isinstance(rhs, Fraction) else Fraction(rhs)
        lead = next(c for c in row[:ncols] if c)
        key = tuple(c / lead for c in row)
        if key in seen:
            continue
        seen.add(key)
        matrix.append(row)

    pivots = []  # (row index, column index)
    r = 0
    for j in range(ncols):
        sel = None
        for i in range(r, len(matrix)):
            if matrix[i][j]:
                sel = i
                break
        if sel is None:
            continue
        matrix[r], matrix[sel] = matrix[sel], matrix[r]
        inv = 1 / matrix[r][j]
        matrix[r] = [c * inv for c in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][j]:
                f = matrix[i][j]
                matrix[i] = [a - f * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append((r, j))
        r += 1
    for i in range(r, len(matrix)):
        if matrix[i][ncols]:
            raise ValueError(
                f"inconsistent constraint at degree {system.degree}; "
                "a failure here would falsify the implementation"
            )

    pivot_cols = {j for _, j in pivots}
    free_cols = [j for j in range(ncols) if j not in pivot_cols]
    particular = {}
    for i, j in pivots:
        if matrix[i][ncols]:
            particular[words[j]] = matrix[i][ncols]
    basis = []
    for f in free_cols:
        vec = {words[f]: Fraction(1)}
        for i, j in pivots:
            if matrix[i][f]:
                vec[words[j]] = -matrix[i][f]
        basis.append(vec)
    return particular, basis, [words[f] for f in free_cols]


def solve_generic(
    W: int,
    seed: Optional[int] = None,
    params: Optional[Dict[int, Sequence[Fraction]]] = None,
    hexagon_mu2=None,
    shuffle: bool = True,
) -> AssociatorCandidate:
    """Exact rational associator through degree W.

    Free coordinates are drawn from the seed as p/q with |p| <= 100,
    q <= 10, unless `params` supplies explicit per-degree values.  The
    per-degree affine dimensions are reported on the candidate; nothing is
    asserted about them here.
    """
    if W < 2:
        raise ValueError("W must be at least 2")
    rng = random.Random(seed)
    phi = NCSeries.one(W, Fraction(1))
    dims = {}
    for n in range(1, W + 1):
        system = constraints_at_degree(phi, n, mu2=hexagon_mu2, shuffle=shuffle)
        particular, basis, free_words = solve_affine(system)
        dims[n] = len(free_words)
        values = dict(particular)
        chosen = params.get(n) if params else None
        if chosen is not None and len(chosen) != len(free_words):
            raise ValueError(f"degree {n} needs {len(free_words)} parameters, got {len(chosen)}")
        for i, vec in enumerate(basis):
            if chosen is not None:
                t = Fraction(chosen[i])
            else:
                t = Fraction(rng.randint(-100, 100), rng.randint(1, 10))
            if not t:
                continue
            for w, c in vec.items():
                values[w] = values.get(w, Fraction(0)) + t * c
        coeffs = dict(phi.coeffs)
        for w, c in values.items():
            if c:
                coeffs[w] = c
        phi = NCSeries(W, coeffs)
    mu2 = hexagon_mu2 if hexagon_mu2 is not None else mu_from_phi(phi)
    hx = "on" if hexagon_mu2 is not None else "off"
    return AssociatorCandidate(
        phi=phi,
        mu2=mu2,
        source=f"generic(W={W}, seed={seed}, hexagons={hx})",
        seed=seed,
        dims=dims,
    )


def mu_from_phi(phi: NCSeries):
    """The square of the hexagon scale any pentagon+shuffle solution admits."""
    return -24 * zeta_of(phi, (2,))

"""The truncated KZ associator over high-precision floats.

Admissible coefficients are (-1)^dp times numeric zeta values; everything
else follows from the regularization that group-likeness forces.  The
hexagon scale never appears bare: all checks consume it through
mu^2 = -4*pi^2, kept as a real quantity.
"""

from dataclasses import dataclass

from mpmath import mp

from .ncseries import (
    NCSeries,
    is_convergent_word,
    load_series,
    parse_series_header,
    save_series,
    series_from_admissible,
    shuffle_words,
    word_to_index,
    words_of_length,
    zeta_of,
)
from .braid import hexagon_residuals, pentagon_residual, two_cycle_residual
from .mzv import mzv_table


@dataclass(frozen=True)
class KZTruncation:
    phi: NCSeries
    W: int
    digits: int
    mu2: object  # mpf, negative


def build_kz(W: int = 10, digits: int = 50, cache=None) -> KZTruncation:
    """Assemble the truncation from a numeric zeta table."""
    if W < 2:
        raise ValueError("W must be at least 2")
    table = mzv_table(W, digits, cache)
    values = {idx: bf.value for idx, bf in table.items()}
    with mp.workdps(digits + 10):
        phi = series_from_admissible(W, lambda k: values[k], one=mp.mpf(1))
        mu2 = -4 * mp.pi ** 2
    return KZTruncation(phi, W, digits, mu2)


def grouplike_defect(f: NCSeries):
    """Largest violation of coeff(u sh v) = coeff(u)coeff(v)."""
    worst = abs(f.coeff("") - 1)
    by_len = {n: list(words_of_length(n)) for n in range(1, f.W)}
    for a in range(1, f.W):
        for b in range(a, f.W + 1 - a):
            for u in by_len[a]:
                cu = f.coeff(u)
                for v in by_len[b]:
                    lhs = sum(mult * f.coeff(w) for w, mult in shuffle_words(u, v).items())
                    dev = abs(lhs - cu * f.coeff(v))
                    if dev > worst:
                        worst = dev
    return worst


def check_kz(t: KZTruncation, W: int = None, tol=None) -> dict:
    """Run the four associator checks, reporting the residual maxima.

    W defaults to min(t.W, 8): the pentagon product cost grows geometrically
    with the truncation order.
    """
    if W is None:
        W = min(t.W, 8)
    if W > t.W:
        raise ValueError(f"cannot check at W={W}: truncation only carries {t.W}")
    with mp.workdps(t.digits + 10):
        if tol is None:
            tol = mp.mpf(10) ** -40
        else:
            tol = mp.mpf(tol)
        phi = t.phi.truncate(W) if W < t.W else t.phi
        checks = {}
        checks["grouplike"] = grouplike_defect(phi)
        checks["pentagon"] = pentagon_residual(phi).max_abs()
        res_a, res_b = hexagon_residuals(phi, t.mu2, one=mp.mpf(1))
        checks["hexagon_a"] = res_a.max_abs()
        checks["hexagon_b"] = res_b.max_abs()
        checks["two_cycle"] = two_cycle_residual(phi).max_abs()
        ok = all(v < tol for v in checks.values())
    return {"W": W, "digits": t.digits, "tolerance": tol, "checks": checks, "pass": ok}


def _mpf_token(x) -> str:
    sign, man, exp, _ = x._mpf_
    m = -int(man) if sign else int(man)
    return f"{m}:{exp}"


def save_kz(t: KZTruncation, path) -> None:
    save_series(t.phi, path, digits=t.digits, extra_header=f"mu2={_mpf_token(t.mu2)}")


def load_kz(path) -> KZTruncation:
    with open(path) as fh:
        header = fh.readline()
    opts = parse_series_header(header)
    if opts.get("kind") != "decimal" or "mu2" not in opts or "digits" not in opts:
        raise ValueError("not a KZ truncation file: missing decimal kind, digits or mu2")
    digits = int(opts["digits"])
    man, exp = opts["mu2"].split(":")
    with mp.workdps(digits + 10):
        mu2 = mp.ldexp(int(man), int(exp))
    phi = load_series(path)
    return KZTruncation(phi, int(opts["W"]), digits, mu2)


def kz_zeta_table(t: KZTruncation) -> dict:
    """Read the zeta values back off the truncation, index -> scalar."""
    out = {}
    # the depth sign flip must not round: negate at full working precision
    with mp.workdps(t.digits + 10):
        for w in range(2, t.W + 1):
            for word in words_of_length(w):
                if is_convergent_word(word):
                    idx = word_to_index(word)
                    out[idx] = zeta_of(t.phi, idx)
    return out

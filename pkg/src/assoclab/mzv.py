"""Arbitrary-precision multiple zeta values.

zeta(k1,...,km) sums 1/(n1^k1 ... nm^km) over 0 < n1 < ... < nm and
converges exactly when km >= 2.  The nested partial sum converges like
M^(1-km), hopeless for dozens of digits, so the production evaluator
rewrites the iterated-integral form of zeta(k) as a convolution of
multiple-polylogarithm tails at z = 1/2; every factor then converges
geometrically and D digits cost O(D) series terms.

A persistent line-oriented cache keeps evaluated values; records are
append-only and a higher-precision record always wins.  Appends must be
serialized (single writer); reads are safe to share.
"""

import hashlib
import os
from dataclasses import dataclass
from functools import lru_cache

from mpmath import mp
from mpmath.libmp import repr_dps

from .scalars import BigFloat
from .ncseries import check_index, is_admissible, is_convergent_word, word_to_index, words_of_length

DEFAULT_DIGITS = 60


def _require_admissible(index):
    index = check_index(index)
    if not is_admissible(index):
        raise ValueError(
            f"index {index} is not admissible: the nested sum converges only "
            "when the last entry is at least 2"
        )
    return index


@dataclass(frozen=True)
class MZVResult:
    index: tuple
    digits: int
    value: BigFloat
    method: str


def mzv_partial_sum(index, M: int, digits: int = 30) -> BigFloat:
    """Finite nested sum over 0 < n1 < ... < nm <= M.

    The brute-force oracle: monotonically increasing in M, independent of
    the accelerated evaluator's internals.
    """
    index = _require_admissible(index)
    if M < len(index):
        raise ValueError(f"cutoff M={M} below depth {len(index)}")
    with mp.workdps(digits + 10):
        # g[n] = sum over chains ending at nm = n of the product so far
        g = [mp.mpf(0)] * (M + 1)
        for n in range(1, M + 1):
            g[n] = mp.mpf(1) / mp.mpf(n) ** index[0]
        for k in index[1:]:
            run = mp.mpf(0)
            out = [mp.mpf(0)] * (M + 1)
            for n in range(1, M + 1):
                run += g[n - 1]
                out[n] = run / mp.mpf(n) ** k
            g = out
        total = mp.fsum(g)
    return BigFloat(total, digits)


# -- accelerated evaluator ------------------------------------------------

def _integral_word(index) -> str:
    # iterated-integral encoding, leftmost letter nearest the origin
    return "".join("1" + "0" * (k - 1) for k in index)


def _swap_rev(word: str) -> str:
    return "".join("1" if ch == "0" else "0" for ch in reversed(word))


@lru_cache(maxsize=None)
def _polylog_half(word: str, M: int, prec: int):
    """Value at z=1/2 of the word-indexed polylogarithm series.

    Series coefficients are built letter by letter: a '0' divides by the
    exponent, a '1' takes prefix sums first.  Truncation error ~ 2^-M.
    """
    if word == "":
        return mp.mpf(1)
    old = mp.prec
    mp.prec = prec
    try:
        c = [mp.mpf(0)] * (M + 1)
        c[0] = mp.mpf(1)
        for ch in word:
            if ch == "0":
                c = [mp.mpf(0)] + [c[n] / n for n in range(1, M + 1)]
            else:
                out = [mp.mpf(0)] * (M + 1)
                run = mp.mpf(0)
                for n in range(1, M + 1):
                    run += c[n - 1]
                    out[n] = run / n
                c = out
        half = mp.mpf(1) / 2
        acc = mp.mpf(0)
        for n in range(M, 0, -1):
            acc = (acc + c[n]) * half
    finally:
        mp.prec = old
    return acc


def _eval_accelerated(index, digits: int):
    wdps = digits + 15
    M = int(3.33 * wdps) + 25
    with mp.workdps(wdps):
        word = _integral_word(index)
        prec = mp.prec
        total = mp.mpf(0)
        for j in range(len(word) + 1):
            total += _polylog_half(_swap_rev(word[j:]), M, prec) * _polylog_half(word[:j], M, prec)
    return total


def _roundtrip_decimal(value, digits: int) -> str:
    wdps = digits + 15
    with mp.workdps(wdps):
        n = repr_dps(mp.prec)
        s = mp.nstr(value, n)
        if mp.mpf(s) != value:  # widen until the decimal reparses exactly
            while mp.mpf(s) != value:
                n += 2
                s = mp.nstr(value, n)
    return s


def mzv_eval(index, digits: int = DEFAULT_DIGITS, cache: "MZVCache" = None) -> MZVResult:
    index = _require_admissible(index)
    if digits < 1:
        raise ValueError("digits must be positive")
    if cache is not None:
        hit = cache.get(index, digits)
        if hit is not None:
            return hit
    value = _eval_accelerated(index, digits)
    result = MZVResult(index, digits, BigFloat(value, digits), "accelerated")
    if cache is not None:
        cache.put_all([result])
    return result


def mzv_table(max_weight: int, digits: int = DEFAULT_DIGITS, cache: "MZVCache" = None):
    """Evaluate every admissible index of weight <= max_weight.

    Returns a dict index -> BigFloat.  New values are appended to the cache
    in one batch so a failure mid-run leaves it untouched.
    """
    if max_weight < 2:
        raise ValueError("max_weight must be at least 2")
    table = {}
    fresh = []
    for w in range(2, max_weight + 1):
        for word in sorted(words_of_length(w)):
            if not is_convergent_word(word):
                continue
            index = word_to_index(word)
            hit = cache.get(index, digits) if cache is not None else None
            if hit is not None:
                table[index] = hit.value
                continue
            value = _eval_accelerated(index, digits)
            result = MZVResult(index, digits, BigFloat(value, digits), "accelerated")
            table[index] = result.value
            fresh.append(result)
    if cache is not None and fresh:
        cache.put_all(fresh)
    return table


class MZVCache:
    """Append-only text cache, one `index;digits;decimal;method` per line."""

    def __init__(self, path):
        self.path = os.fspath(path)
        self._records = {}
        if os.path.exists(self.path):
            self._load()

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line:
                    continue
                parts = line.split(";")
                if len(parts) != 4:
                    raise ValueError(f"{self.path}:{lineno}: malformed cache record")
                idx_s, dig_s, dec, method = parts
                try:
                    index = tuple(int(t) for t in idx_s.split(","))
                    digits = int(dig_s)
                except ValueError as exc:
                    raise ValueError(f"{self.path}:{lineno}: malformed cache record") from exc
                if not index or digits < 1 or not dec:
                    raise ValueError(f"{self.path}:{lineno}: malformed cache record")
                old = self._records.get(index)
                if old is None or digits >= old[0]:
                    self._records[index] = (digits, dec, method)

    def get(self, index, digits: int):
        """Stored result, or None.  Never serves below the requested precision."""
        index = check_index(index)
        rec = self._records.get(index)
        if rec is None or rec[0] < digits:
            return None
        stored_digits, dec, method = rec
        with mp.workdps(stored_digits + 15):
            value = mp.mpf(dec)
        return MZVResult(index, stored_digits, BigFloat(value, stored_digits), method)

    def put_all(self, results) -> None:
        lines = []
        for r in results:
            old = self._records.get(r.index)
            if old is not None and old[0] >= r.digits:
                continue
            dec = _roundtrip_decimal(r.value.value, r.digits)
            self._records[r.index] = (r.digits, dec, r.method)
            idx_s = ",".join(str(k) for k in r.index)
            lines.append(f"{idx_s};{r.digits};{dec};{r.method}")
        if not lines:
            return
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    def digest(self) -> str:
        if not os.path.exists(self.path):
            return ""
        h = hashlib.sha256()
        with open(self.path, "rb") as fh:
            h.update(fh.read())
        return h.hexdigest()

    def __len__(self):
        return len(self._records)

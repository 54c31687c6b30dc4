"""Degree sequences and bivariate degree distributions for digraphs.

A degree sequence assigns each vertex an (in-degree, out-degree) pair; it is
*valid* when the in- and out-sums agree (both equal the edge count m) and
*graphical* when some simple digraph (no self-loops, no parallel edges)
realizes it.  A degree distribution is a sparse probability table p[j, k]
over (in, out) pairs with cached partial moments

    mu_il = sum_{j,k} j^i k^l p[j, k],   i, l in {0, 1, 2},

so mu = mu_10 = mu_01 is the mean degree and mu_11 the mean in*out product.
Directed balance (mu_10 == mu_01) is enforced at construction: a table that
cannot be the limit of valid sequences is rejected rather than silently
repaired.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
from scipy import stats

from .errors import (
    DistributionFormatError,
    EmptySequenceError,
    ImbalanceError,
    InvalidSequenceError,
    RepairFailedError,
)

__all__ = [
    "DegreeSequence",
    "DegreeDistribution",
    "PropernessReport",
    "Validity",
    "validate",
    "is_graphical",
    "empirical_distribution",
    "properness_report",
    "realize_sequence",
    "total_variation",
    "distribution_from_spec",
    "read_distribution",
    "write_distribution",
    "read_sequence",
    "write_sequence",
]

MOMENT_ORDERS = tuple((i, l) for i in range(3) for l in range(3))

# Tail mass removed when truncating infinite-support families (shared between
# the two marginals, so each keeps all but half of it).
FAMILY_TAIL_MASS = 1e-12


class DegreeSequence:
    """Immutable per-vertex (in-degree, out-degree) pairs.

    Parameters
    ----------
    pairs : iterable of (int, int)
        One (in-degree, out-degree) pair per vertex.

    Attributes
    ----------
    in_degrees, out_degrees : ndarray of int64, read-only
    """

    def __init__(self, pairs: Iterable[tuple[int, int]]):
        arr = np.asarray(list(pairs), dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("pairs must be (in, out) 2-tuples")
        if arr.size and arr.min() < 0:
            raise ValueError("degrees must be nonnegative")
        self._init_arrays(arr[:, 0].copy(), arr[:, 1].copy())

    def _init_arrays(self, in_degrees: np.ndarray, out_degrees: np.ndarray):
        in_degrees.setflags(write=False)
        out_degrees.setflags(write=False)
        self.in_degrees = in_degrees
        self.out_degrees = out_degrees
        self._in_sum = int(in_degrees.sum())
        self._out_sum = int(out_degrees.sum())

    @classmethod
    def from_arrays(cls, in_degrees, out_degrees) -> "DegreeSequence":
        """Build a sequence from separate in/out degree arrays (copied)."""
        ins = np.asarray(in_degrees, dtype=np.int64).copy()
        outs = np.asarray(out_degrees, dtype=np.int64).copy()
        if ins.shape != outs.shape or ins.ndim != 1:
            raise ValueError("in/out arrays must be 1-d of equal length")
        if ins.size and min(ins.min(), outs.min()) < 0:
            raise ValueError("degrees must be nonnegative")
        obj = cls.__new__(cls)
        obj._init_arrays(ins, outs)
        return obj

    @property
    def n(self) -> int:
        return self.in_degrees.size

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.in_degrees.tolist(), self.out_degrees.tolist()))

    @property
    def in_sum(self) -> int:
        return self._in_sum

    @property
    def out_sum(self) -> int:
        return self._out_sum

    @property
    def m(self) -> int:
        """Edge count; equals the in-degree sum (== out-degree sum when valid)."""
        return self._in_sum

    @property
    def d_max(self) -> int:
        if self.n == 0:
            return 0
        return int(max(self.in_degrees.max(), self.out_degrees.max()))

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, DegreeSequence):
            return NotImplemented
        return np.array_equal(self.in_degrees, other.in_degrees) and np.array_equal(
            self.out_degrees, other.out_degrees
        )

    def __repr__(self) -> str:
        return f"DegreeSequence(n={self.n}, m={self.m}, d_max={self.d_max})"


class Validity:
    """Verdict of :func:`validate`: equal in/out sums make a sequence valid."""

    __slots__ = ("valid", "in_sum", "out_sum")

    def __init__(self, valid: bool, in_sum: int, out_sum: int):
        self.valid = valid
        self.in_sum = in_sum
        self.out_sum = out_sum

    def __iter__(self):
        return iter((self.valid, self.in_sum, self.out_sum))

    def __repr__(self) -> str:
        return f"Validity(valid={self.valid}, in_sum={self.in_sum}, out_sum={self.out_sum})"


def validate(seq: DegreeSequence) -> Validity:
    """Check directed balance: sum of in-degrees == sum of out-degrees."""
    return Validity(seq.in_sum == seq.out_sum, seq.in_sum, seq.out_sum)


def is_graphical(seq: DegreeSequence) -> bool:
    """Decide whether a simple digraph (loopless, no parallel edges) realizes ``seq``.

    Uses the Fulkerson-Chen-Anstee inequalities on the sequence sorted in
    nonincreasing lexicographic order (in-degree first, out-degree second):
    for every prefix length k,

        sum_{i<=k} d_in[i] <= sum_{i<=k} min(d_out[i], k-1)
                              + sum_{i>k} min(d_out[i], k).

    Inequalities with k > d_max + 1 hold automatically (every min() saturates
    at d_out), so only k <= d_max + 1 are evaluated.

    Raises
    ------
    InvalidSequenceError
        If the in- and out-degree sums differ.
    """
    v = validate(seq)
    if not v.valid:
        raise InvalidSequenceError(
            f"in-degree sum {v.in_sum} != out-degree sum {v.out_sum}"
        )
    cached = getattr(seq, "_graphical", None)
    if cached is None:
        cached = _fulkerson_chen_anstee(seq)
        seq._graphical = cached
    return cached


def _fulkerson_chen_anstee(seq: DegreeSequence) -> bool:
    n = seq.n
    if n == 0:
        return True
    if seq.d_max >= n:
        return False
    order = np.lexsort((-seq.out_degrees, -seq.in_degrees))
    a = seq.in_degrees[order]
    b = seq.out_degrees[order]
    prefix_a = np.cumsum(a)
    for k in range(1, min(n, seq.d_max + 1) + 1):
        rhs = int(np.minimum(b[:k], k - 1).sum()) + int(np.minimum(b[k:], k).sum())
        if prefix_a[k - 1] > rhs:
            return False
    return True


class DegreeDistribution:
    """Sparse bivariate probability table p[j, k] over (in, out) degree pairs.

    The table is renormalized to total mass exactly 1 at construction (the
    input must already sum to 1 within ``mass_tol``) and rejected with
    :class:`ImbalanceError` if the mean in-degree and mean out-degree differ
    by more than 1e-9.

    Attributes
    ----------
    support : dict[(int, int), float]
        Probability per stored (in, out) pair.
    moments : dict[(int, int), float]
        Cached mu_il for i, l in {0, 1, 2}, computed over the stored support.
    truncation_loss : float
        Tail mass removed when the table was truncated (0 unless built from
        an infinite-support family).
    """

    BALANCE_TOL = 1e-9

    def __init__(
        self,
        probs: Mapping[tuple[int, int], float],
        truncation_loss: float = 0.0,
        mass_tol: float = 1e-6,
    ):
        items = sorted((int(j), int(k), float(p)) for (j, k), p in probs.items())
        if not items:
            raise DistributionFormatError("empty distribution")
        js = np.array([j for j, _, _ in items], dtype=np.int64)
        ks = np.array([k for _, k, _ in items], dtype=np.int64)
        ps = np.array([p for _, _, p in items], dtype=np.float64)
        if js.min() < 0 or ks.min() < 0:
            raise DistributionFormatError("degrees must be nonnegative")
        if ps.min() < 0:
            raise DistributionFormatError("probabilities must be nonnegative")
        total = ps.sum()
        if not math.isfinite(total) or abs(total - 1.0) > mass_tol:
            raise DistributionFormatError(
                f"probabilities sum to {total!r}, expected 1 +/- {mass_tol}"
            )
        keep = ps > 0.0
        js, ks, ps = js[keep], ks[keep], ps[keep]
        ps = ps / total
        for arr in (js, ks, ps):
            arr.setflags(write=False)
        self.js = js
        self.ks = ks
        self.ps = ps
        self.truncation_loss = float(truncation_loss)
        self.support = {(int(j), int(k)): float(p) for j, k, p in zip(js, ks, ps)}
        jf = js.astype(np.float64)
        kf = ks.astype(np.float64)
        self.moments = {
            (i, l): float(np.sum(jf**i * kf**l * ps)) for i, l in MOMENT_ORDERS
        }
        mu10, mu01 = self.moments[(1, 0)], self.moments[(0, 1)]
        if abs(mu10 - mu01) > self.BALANCE_TOL * max(1.0, mu10, mu01):
            raise ImbalanceError(
                f"mean in-degree {mu10!r} != mean out-degree {mu01!r}; "
                "a balanced table is required"
            )
        self._cum = None

    @property
    def mu(self) -> float:
        """Mean degree mu = mu_10 = mu_01."""
        return self.moments[(1, 0)]

    @property
    def mu11(self) -> float:
        return self.moments[(1, 1)]

    @property
    def mu20(self) -> float:
        return self.moments[(2, 0)]

    @property
    def mu02(self) -> float:
        return self.moments[(0, 2)]

    def moment(self, i: int, l: int) -> float:
        return self.moments[(i, l)]

    @property
    def max_in(self) -> int:
        return int(self.js.max())

    @property
    def max_out(self) -> int:
        return int(self.ks.max())

    def sample_pairs(self, count: int, rng: np.random.Generator):
        """Draw ``count`` iid (in, out) pairs; returns (in_array, out_array)."""
        idx = self._draw_indices(count, rng)
        return self.js[idx].copy(), self.ks[idx].copy()

    def _draw_indices(self, count, rng):
        if self._cum is None:
            cum = np.cumsum(self.ps)
            cum[-1] = 1.0
            self._cum = cum
        return np.searchsorted(self._cum, rng.random(count), side="right")

    def __repr__(self) -> str:
        return (
            f"DegreeDistribution({len(self.ps)} support points, mu={self.mu:.6g}, "
            f"mu11={self.mu11:.6g})"
        )

    # ----- named families -------------------------------------------------

    @classmethod
    def poisson(cls, lam: float, tail: float = FAMILY_TAIL_MASS) -> "DegreeDistribution":
        """Independent in/out Poisson(lam) marginals, truncated at ``tail`` mass."""
        if lam < 0:
            raise ValueError("lam must be nonnegative")
        if lam == 0:
            return cls({(0, 0): 1.0})
        kmax = int(stats.poisson.ppf(1.0 - tail / 2.0, lam))
        while stats.poisson.sf(kmax, lam) >= tail / 2.0:
            kmax += 1
        marg = stats.poisson.pmf(np.arange(kmax + 1), lam)
        return cls._from_product(marg, tail)

    @classmethod
    def constant(cls, d: int) -> "DegreeDistribution":
        """Point mass at (d, d)."""
        if d < 0:
            raise ValueError("d must be nonnegative")
        return cls({(int(d), int(d)): 1.0})

    @classmethod
    def geometric(cls, p: float, tail: float = FAMILY_TAIL_MASS) -> "DegreeDistribution":
        """Independent in/out Geometric(p) marginals on {0, 1, ...}: P(k) = (1-p)^k p."""
        if not 0.0 < p <= 1.0:
            raise ValueError("p must lie in (0, 1]")
        if p == 1.0:
            return cls({(0, 0): 1.0})
        kmax = max(0, math.ceil(math.log(tail / 2.0) / math.log1p(-p)) - 1)
        while (1.0 - p) ** (kmax + 1) >= tail / 2.0:
            kmax += 1
        marg = p * (1.0 - p) ** np.arange(kmax + 1, dtype=np.float64)
        return cls._from_product(marg, tail)

    @classmethod
    def _from_product(cls, marginal: np.ndarray, tail: float) -> "DegreeDistribution":
        table = np.outer(marginal, marginal)
        kept = table.sum()
        loss = 1.0 - kept
        if loss >= tail * 2:
            raise DistributionFormatError(
                f"truncation removed {loss!r} mass, more than requested"
            )
        probs = {
            (j, k): table[j, k]
            for j in range(table.shape[0])
            for k in range(table.shape[1])
            if table[j, k] > 0.0
        }
        return cls(probs, truncation_loss=max(loss, 0.0))


def empirical_distribution(
    seq: DegreeSequence,
) -> tuple[DegreeDistribution, dict[tuple[int, int], int]]:
    """Empirical degree distribution p[j,k] = N[j,k] / n, plus the raw counts.

    Raises
    ------
    EmptySequenceError
        If the sequence has no vertices.
    ImbalanceError
        If the sequence is invalid (the empirical table would be unbalanced).
    """
    if seq.n == 0:
        raise EmptySequenceError("cannot form a distribution from zero vertices")
    pairs, counts = _degree_counts(seq)
    n = seq.n
    probs = {jk: c / n for jk, c in zip(pairs, counts)}
    dist = DegreeDistribution(probs)
    return dist, dict(zip(pairs, (int(c) for c in counts)))


def _degree_counts(seq: DegreeSequence):
    """Distinct (j, k) pairs of ``seq`` with their multiplicities N[j,k]."""
    stacked = np.stack([seq.in_degrees, seq.out_degrees], axis=1)
    uniq, counts = np.unique(stacked, axis=0, return_counts=True)
    pairs = [(int(j), int(k)) for j, k in uniq]
    return pairs, counts


@dataclass(frozen=True)
class PropernessReport:
    """Finite-n diagnostics for the regularity conditions on degree progressions.

    The asymptotic conditions (d_max below n^(1/12)/ln n, rho(n) = o(d_max))
    have no canonical finite-n pass/fail, so this report never blocks
    anything; it only surfaces the measured quantities.
    """

    n: int
    d_max: int
    d_max_bound: float
    rho: float
    empirical_moments: dict[tuple[int, int], float]
    valid: bool
    graphical: bool
    d_max_ok: bool
    rho_vs_dmax_ratio: float


def properness_report(seq: DegreeSequence) -> PropernessReport:
    """Measure d_max, rho(n), and empirical moments for a valid sequence.

    rho(n) = max( sum j^2 k N[j,k],  sum j k^2 N[j,k] ) / (mu(n) * n), with
    mu(n) = m / n.  The d_max bound uses the natural logarithm.

    Raises
    ------
    InvalidSequenceError
        If the in- and out-degree sums differ.
    """
    v = validate(seq)
    if not v.valid:
        raise InvalidSequenceError(
            f"in-degree sum {v.in_sum} != out-degree sum {v.out_sum}"
        )
    n = seq.n
    d_max = seq.d_max
    if n >= 2:
        bound = n ** (1.0 / 12.0) / math.log(n)
    else:
        bound = math.inf
    if n > 0:
        pairs, counts = _degree_counts(seq)
        jf = np.array([j for j, _ in pairs], dtype=np.float64)
        kf = np.array([k for _, k in pairs], dtype=np.float64)
        cf = counts.astype(np.float64)
        moments = {
            (i, l): float(np.sum(jf**i * kf**l * cf) / n) for i, l in MOMENT_ORDERS
        }
        if seq.m > 0:
            mu_n = seq.m / n
            rho = max(
                float(np.sum(jf**2 * kf * cf)), float(np.sum(jf * kf**2 * cf))
            ) / (mu_n * n)
        else:
            rho = 0.0
    else:
        moments = {il: 0.0 for il in MOMENT_ORDERS}
        rho = 0.0
    return PropernessReport(
        n=n,
        d_max=d_max,
        d_max_bound=bound,
        rho=rho,
        empirical_moments=moments,
        valid=True,
        graphical=is_graphical(seq),
        d_max_ok=d_max <= bound,
        rho_vs_dmax_ratio=rho / d_max if d_max > 0 else 0.0,
    )


def realize_sequence(
    dist: DegreeDistribution,
    n: int,
    rng: np.random.Generator,
    max_redraw_factor: int = 100,
) -> DegreeSequence:
    """Draw a valid n-vertex degree sequence approximately iid from ``dist``.

    Pairs are drawn iid; while the in- and out-sums disagree, one uniformly
    chosen vertex has its pair redrawn from ``dist``.  The redraw budget is
    ``max_redraw_factor * n``; exceeding it raises :class:`RepairFailedError`
    (this happens for pathological tables whose sums can never balance).

    The repair perturbs the iid marginals only slightly: when the table is
    balanced in expectation the sum difference is a mean-zero random walk
    that typically needs O(n) redraws.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    ins, outs = dist.sample_pairs(n, rng)
    diff = int(ins.sum()) - int(outs.sum())
    budget = max_redraw_factor * n
    redraws = 0
    while diff != 0:
        if redraws >= budget:
            raise RepairFailedError(
                f"degree-sum repair failed after {budget} redraws "
                f"(residual imbalance {diff})"
            )
        v = int(rng.integers(n))
        i = int(dist._draw_indices(1, rng)[0])
        diff += int(dist.js[i] - dist.ks[i]) - int(ins[v] - outs[v])
        ins[v] = dist.js[i]
        outs[v] = dist.ks[i]
        redraws += 1
    return DegreeSequence.from_arrays(ins, outs)


def total_variation(a: DegreeDistribution, b: DegreeDistribution) -> float:
    """Total-variation distance (1/2) sum |a[j,k] - b[j,k]| over the union support."""
    keys = set(a.support) | set(b.support)
    return 0.5 * sum(abs(a.support.get(jk, 0.0) - b.support.get(jk, 0.0)) for jk in keys)


# ----- file formats and named-family specs ---------------------------------


def distribution_from_spec(spec: str) -> DegreeDistribution:
    """Build a distribution from a CLI-style spec string.

    Supported forms: ``poisson:<lam>`` (independent in/out Poisson),
    ``const:<d>`` (point mass at (d, d)), ``geometric:<p>``, and
    ``file:<path>`` for the `j k p` text format.
    """
    name, sep, arg = spec.partition(":")
    if not sep:
        raise DistributionFormatError(
            f"distribution spec {spec!r} must look like name:value"
        )
    try:
        if name == "poisson":
            return DegreeDistribution.poisson(float(arg))
        if name == "const":
            return DegreeDistribution.constant(int(arg))
        if name == "geometric":
            return DegreeDistribution.geometric(float(arg))
    except ValueError as exc:
        raise DistributionFormatError(f"bad parameter in {spec!r}: {exc}") from exc
    if name == "file":
        return read_distribution(arg)
    raise DistributionFormatError(f"unknown distribution family {name!r}")


def read_distribution(path) -> DegreeDistribution:
    """Read a `j k p` table (one entry per line, ``#`` comments allowed).

    The probabilities must sum to 1 within 1e-6 before renormalization.
    """
    probs: dict[tuple[int, int], float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 3:
                raise DistributionFormatError(
                    f"{path}:{lineno}: expected 'j k p', got {raw.strip()!r}"
                )
            try:
                j, k, p = int(fields[0]), int(fields[1]), float(fields[2])
            except ValueError as exc:
                raise DistributionFormatError(f"{path}:{lineno}: {exc}") from exc
            if (j, k) in probs:
                raise DistributionFormatError(
                    f"{path}:{lineno}: duplicate entry for ({j}, {k})"
                )
            probs[(j, k)] = p
    return DegreeDistribution(probs)


def write_distribution(dist: DegreeDistribution, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# j k p\n")
        for (j, k), p in sorted(dist.support.items()):
            fh.write(f"{j} {k} {p!r}\n")


def read_sequence(path) -> DegreeSequence:
    """Read a degree sequence: one `d_in d_out` pair per line, ``#`` comments."""
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 2:
                raise DistributionFormatError(
                    f"{path}:{lineno}: expected 'd_in d_out', got {raw.strip()!r}"
                )
            try:
                pairs.append((int(fields[0]), int(fields[1])))
            except ValueError as exc:
                raise DistributionFormatError(f"{path}:{lineno}: {exc}") from exc
    return DegreeSequence(pairs)


def write_sequence(seq: DegreeSequence, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for d_in, d_out in zip(seq.in_degrees.tolist(), seq.out_degrees.tolist()):
            fh.write(f"{d_in} {d_out}\n")

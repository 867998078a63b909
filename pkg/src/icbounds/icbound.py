"""Lower bounds on one-way communication complexity from information causality.

For a function f, an input distribution for x, an ordering y^0, ..., y^{|Y|-1}
of Bob's inputs, and a guess channel, this module evaluates

    sum_i I(g; f(x, y^i) | {f(x, y^j)}_{j<i}, y = y^i)

in bits.  Any one-way protocol whose guess g meets the channel's success rate
on every input must send at least this many bits, so a larger total is a
stronger lower bound.

The history {f(x, y^j)}_{j<i} partitions X into cells of inputs that share
the same value vector.  Each step therefore costs one pass over X: for every
cell with probability mass w and conditional probability q of f(x, y^i) = 1,
the step contributes w * phi(q), where phi depends on the channel:

    errorless:            phi(q) = h(q)
    symmetric eps:        phi(q) = h(eps + q(1-2eps)) - h(eps)
    type-I/II (eI, eII):  phi(q) = h(q(1-eII) + (1-q) eI) - q h(eII) - (1-q) h(eI)

after which every cell splits by the value of f(., y^i) and empty parts are
dropped.  Cells where q is 0 or 1 contribute nothing and never split further
in effect, which is what makes deterministic histories prune.

Channel semantics: the success constraint is taken at equality -- the guess
is correct with probability exactly one minus the stated error rate,
independently for every input pair.  Every report records this convention.

``direct_oracle`` recomputes the same quantity along an independent path
(explicit joint tables over history value vectors fed to the generic
conditional-mutual-information routine) and exists to cross-check the
closed-form evaluator.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .boolfn import (
    BooleanFunction,
    Disjointness,
    Equality,
    FunctionFamily,
    Index,
    InnerProduct,
    InputDistribution,
    KIntersect,
)
from .errors import ArgumentError, ExhaustiveSearchRefusal
from .infocalc import (
    TOLERANCE,
    JointTable,
    binary_entropy,
    binary_entropy_vec,
    conditional_mutual_information,
)

#: Recorded in every report: how the guess channel is pinned down.
CHANNEL_SEMANTICS = (
    "success probability taken at equality: Pr[g = f(x,y) | x, y] equals the "
    "stated rate, independently for every input pair"
)

#: Exhaustive ordering search refuses beyond this |Y| unless overridden.
EXHAUSTIVE_LIMIT = 8


# ---------------------------------------------------------------------------
# Guess channels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Deterministic:
    """Errorless guess: g always equals the function value."""

    def phi(self, q: np.ndarray) -> np.ndarray:
        return binary_entropy_vec(q)

    def guess_probabilities(self, value: int) -> tuple:
        """(P(g=0), P(g=1)) conditioned on f = value."""
        return (1.0, 0.0) if value == 0 else (0.0, 1.0)

    def describe(self) -> dict:
        return {"kind": "deterministic"}


@dataclass(frozen=True)
class Symmetric:
    """Guess errs with the same probability eps < 1/2 on both function values."""

    eps: float

    def __post_init__(self):
        if not 0.0 <= self.eps < 0.5:
            raise ArgumentError(f"symmetric channel requires eps in [0, 0.5), got {self.eps!r}")

    def phi(self, q: np.ndarray) -> np.ndarray:
        return binary_entropy_vec(self.eps + q * (1.0 - 2.0 * self.eps)) - binary_entropy(self.eps)

    def guess_probabilities(self, value: int) -> tuple:
        e = self.eps
        return (1.0 - e, e) if value == 0 else (e, 1.0 - e)

    def describe(self) -> dict:
        return {"kind": "symmetric", "eps": self.eps}


@dataclass(frozen=True)
class Asymmetric:
    """Type-I error eps_i when f = 0 and type-II error eps_ii when f = 1."""

    eps_i: float
    eps_ii: float

    def __post_init__(self):
        for name, value in (("eps_i", self.eps_i), ("eps_ii", self.eps_ii)):
            if not 0.0 <= value < 0.5:
                raise ArgumentError(f"asymmetric channel requires {name} in [0, 0.5), got {value!r}")

    def phi(self, q: np.ndarray) -> np.ndarray:
        mix = q * (1.0 - self.eps_ii) + (1.0 - q) * self.eps_i
        return binary_entropy_vec(mix) - (
            q * binary_entropy(self.eps_ii) + (1.0 - q) * binary_entropy(self.eps_i)
        )

    def guess_probabilities(self, value: int) -> tuple:
        if value == 0:
            return (1.0 - self.eps_i, self.eps_i)
        return (self.eps_ii, 1.0 - self.eps_ii)

    def describe(self) -> dict:
        return {"kind": "asymmetric", "eps_i": self.eps_i, "eps_ii": self.eps_ii}


ChannelModel = Union[Deterministic, Symmetric, Asymmetric]


# ---------------------------------------------------------------------------
# Orderings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ordering:
    """A permutation of Bob's input indices driving the step sum."""

    perm: tuple
    strategy: str = "custom"

    def __post_init__(self):
        perm = tuple(int(v) for v in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise ArgumentError(f"not a permutation of 0..{len(perm) - 1}: {perm!r}")
        object.__setattr__(self, "perm", perm)

    def __len__(self) -> int:
        return len(self.perm)


def _as_ordering(ordering, y_size: int) -> Ordering:
    if not isinstance(ordering, Ordering):
        ordering = Ordering(tuple(ordering))
    if len(ordering) != y_size:
        raise ArgumentError(f"ordering length {len(ordering)} != y_size {y_size}")
    return ordering


@dataclass(frozen=True)
class BoundReport:
    """Per-step terms and total of the information lower bound, with provenance."""

    ordering: tuple
    ordering_strategy: str
    channel: ChannelModel
    distribution: str
    terms: tuple
    total: float
    channel_semantics: str = CHANNEL_SEMANTICS


# ---------------------------------------------------------------------------
# Partition-refinement evaluator
# ---------------------------------------------------------------------------


def _support(f: BooleanFunction, dist: InputDistribution):
    """Active inputs and their weights; xs is None when all of X is active."""
    if dist.x_size != f.x_size:
        raise ArgumentError(f"distribution length {dist.x_size} != x_size {f.x_size}")
    w = dist.weights
    if np.all(w > 0.0):
        return None, w
    xs = np.flatnonzero(w > 0.0)
    return xs, w[xs]


def _bound_terms(f: BooleanFunction, xs, wts: np.ndarray, perm, channel: ChannelModel) -> list:
    """Step terms for one ordering.

    The partition of X by the history of function values is held as one
    integer cell label per active input.  Cells reduced to a single input
    have a conditional probability of exactly 0 or 1 and contribute nothing
    to any later term, so they are retired from the active set as soon as
    they appear; once nothing is active the remaining terms are zero.
    """
    if xs is None:
        xs = np.arange(f.x_size, dtype=np.int64)
    labels = np.zeros(wts.size, dtype=np.int64)
    ncells = 1
    terms = []
    for y in perm:
        if xs.size == 0:
            terms.append(0.0)
            continue
        col = f.bits_at(xs, y).astype(np.int64)
        mass = np.bincount(labels, weights=wts, minlength=ncells)
        ones = np.bincount(labels, weights=wts * col, minlength=ncells)
        q = np.clip(ones / mass, 0.0, 1.0)
        terms.append(float(mass @ channel.phi(q)))
        # Split every cell by the new value; relabel compactly without sorting.
        key = labels * 2 + col
        counts = np.bincount(key, minlength=2 * ncells)
        nonzero = counts > 0
        remap = np.cumsum(nonzero) - 1
        labels = remap[key]
        ncells = int(nonzero.sum())
        sizes = counts[nonzero]
        if ncells and int(sizes.min()) == 1:
            keep = sizes[labels] > 1
            xs, wts, labels = xs[keep], wts[keep], labels[keep]
            if xs.size:
                member_counts = np.bincount(labels, minlength=ncells)
                alive = member_counts > 0
                labels = (np.cumsum(alive) - 1)[labels]
                ncells = int(alive.sum())
            else:
                ncells = 0
    return terms


def compute_bound(
    f: BooleanFunction,
    dist: InputDistribution,
    ordering,
    channel: ChannelModel,
) -> BoundReport:
    """Evaluate the information lower bound by partition refinement.

    Cost is O(|Y| * |X|) plus bookkeeping; suitable up to |X| = |Y| = 2**14.
    """
    ordering = _as_ordering(ordering, f.y_size)
    xs, wts = _support(f, dist)
    terms = _bound_terms(f, xs, wts, ordering.perm, channel)
    return BoundReport(
        ordering=ordering.perm,
        ordering_strategy=ordering.strategy,
        channel=channel,
        distribution=dist.label,
        terms=tuple(terms),
        total=math.fsum(terms),
    )


def direct_oracle(
    f: BooleanFunction,
    dist: InputDistribution,
    ordering,
    channel: ChannelModel,
) -> BoundReport:
    """Same contract as ``compute_bound``, by an independent route.

    At each step the joint distribution of (history value vector, function
    value, guess) is materialized explicitly from all x and handed to the
    generic conditional-mutual-information routine.  Exponential in the worst
    case; intended for |X| * |Y| up to about 2**20.
    """
    ordering = _as_ordering(ordering, f.y_size)
    xs, wts = _support(f, dist)
    if xs is None:
        xs = np.arange(f.x_size)
    histories = [() for _ in range(len(xs))]
    terms = []
    for y in ordering.perm:
        groups: dict = {}
        values = []
        for pos, x in enumerate(xs):
            v = f.bit(int(x), int(y))
            values.append(v)
            cell = groups.setdefault(histories[pos], [0.0, 0.0])
            cell[v] += float(wts[pos])
        probs = np.zeros((len(groups), 2, 2))
        for h, (_, masses) in enumerate(groups.items()):
            for v in (0, 1):
                g0, g1 = channel.guess_probabilities(v)
                probs[h, v, 0] = masses[v] * g0
                probs[h, v, 1] = masses[v] * g1
        table = JointTable((len(groups), 2, 2), probs.ravel())
        terms.append(conditional_mutual_information(table, 2, 1, (0,)))
        histories = [hist + (v,) for hist, v in zip(histories, values)]
    return BoundReport(
        ordering=ordering.perm,
        ordering_strategy=ordering.strategy,
        channel=channel,
        distribution=dist.label,
        terms=tuple(terms),
        total=math.fsum(terms),
    )


# ---------------------------------------------------------------------------
# Ordering strategies
# ---------------------------------------------------------------------------


def _natural_perm(y_size: int) -> tuple:
    return tuple(range(y_size))


def _unit_first_perm(y_size: int) -> tuple:
    n = y_size.bit_length() - 1
    if (1 << n) != y_size:
        raise ArgumentError(f"unit-first ordering requires |Y| a power of two, got {y_size}")
    units = [1 << (n - 1 - i) for i in range(n)]
    rest = sorted(set(range(y_size)) - set(units))
    return tuple(units + rest)


def _kint_proof_perm(y_size: int, k: int) -> tuple:
    n = y_size.bit_length() - 1
    if (1 << n) != y_size:
        raise ArgumentError(f"kint-proof ordering requires |Y| a power of two, got {y_size}")
    if not 1 <= k <= n:
        raise ArgumentError(f"kint-proof ordering requires 1 <= k <= {n}, got k={k}")
    weight_k = sorted((v for v in range(y_size) if v.bit_count() == k), reverse=True)
    rest = sorted((v for v in range(y_size) if v.bit_count() != k), reverse=True)
    return tuple(weight_k + rest)


def _greedy_perm(f: BooleanFunction, dist: InputDistribution, channel: ChannelModel) -> tuple:
    xs, wts = _support(f, dist)
    labels = np.zeros(wts.size, dtype=np.int64)
    ncells = 1
    unused = list(range(f.y_size))
    perm = []
    while unused:
        mass = np.bincount(labels, weights=wts, minlength=ncells)
        best_y, best_term, best_col = -1, -math.inf, None
        for y in unused:
            col = f.column(y)
            if xs is not None:
                col = col[xs]
            col = col.astype(np.int64)
            ones = np.bincount(labels, weights=wts * col, minlength=ncells)
            q = np.clip(ones / mass, 0.0, 1.0)
            term = float(mass @ channel.phi(q))
            if term > best_term:
                best_y, best_term, best_col = y, term, col
        perm.append(best_y)
        unused.remove(best_y)
        key = labels * 2 + best_col
        counts = np.bincount(key, minlength=2 * ncells)
        remap = np.cumsum(counts > 0) - 1
        labels = remap[key]
        ncells = int((counts > 0).sum())
    return tuple(perm)


def _exhaustive_perm(
    f: BooleanFunction,
    dist: InputDistribution,
    channel: ChannelModel,
    threads: int,
    allow_big: bool,
) -> tuple:
    y_size = f.y_size
    if y_size > EXHAUSTIVE_LIMIT and not allow_big:
        raise ExhaustiveSearchRefusal(
            f"exhaustive ordering over |Y| = {y_size} means evaluating "
            f"{y_size}! = {math.factorial(y_size)} permutations; "
            "pass allow_big_exhaustive to override"
        )
    xs, wts = _support(f, dist)

    def best_of(perms):
        top_total, top_perm = -math.inf, None
        for perm in perms:
            total = math.fsum(_bound_terms(f, xs, wts, perm, channel))
            if total > top_total:
                top_total, top_perm = total, perm
        return top_total, top_perm

    perms = list(itertools.permutations(range(y_size)))
    if threads <= 1 or len(perms) < 64:
        return best_of(perms)[1]
    # Chunked max-reduction merged in chunk order: the winner is independent
    # of thread scheduling, and exact ties keep the lexicographically
    # smallest permutation because chunks preserve enumeration order.
    bounds = np.linspace(0, len(perms), threads * 4 + 1).astype(int)
    chunks = [perms[bounds[i]:bounds[i + 1]] for i in range(len(bounds) - 1)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(best_of, chunks))
    top_total, top_perm = -math.inf, None
    for total, perm in results:
        if perm is not None and total > top_total:
            top_total, top_perm = total, perm
    return top_perm


_STRATEGIES = ("natural", "unit-first", "kint-proof", "greedy", "exhaustive")


def make_ordering(
    strategy: str,
    f: BooleanFunction,
    dist: Optional[InputDistribution] = None,
    channel: Optional[ChannelModel] = None,
    *,
    k: Optional[int] = None,
    threads: int = 1,
    allow_big_exhaustive: bool = False,
) -> Ordering:
    """Build an ordering of Bob's inputs.

    natural      identity order 0, 1, ...
    unit-first   the n unit-vector strings 10..0, 01..0, ..., 00..1 first,
                 then the remaining y in increasing order
    kint-proof   all Hamming-weight-k strings in decreasing order (x0-MSB
                 convention), then the rest in decreasing order; needs ``k``
    greedy       repeatedly append the unused y maximizing the next step term
                 (ties to the smallest index); needs the distribution/channel
    exhaustive   the permutation maximizing the total (ties to the
                 lexicographically smallest); refuses |Y| > 8 unless
                 ``allow_big_exhaustive`` is set
    """
    name = strategy.replace("_", "-").lower()
    if name == "unit-vectors-first":
        name = "unit-first"
    if name not in _STRATEGIES:
        raise ArgumentError(f"unknown ordering strategy {strategy!r}; choose from {_STRATEGIES}")
    if name == "natural":
        return Ordering(_natural_perm(f.y_size), "natural")
    if name == "unit-first":
        return Ordering(_unit_first_perm(f.y_size), "unit-first")
    if name == "kint-proof":
        if k is None:
            raise ArgumentError("kint-proof ordering requires k")
        return Ordering(_kint_proof_perm(f.y_size, int(k)), "kint-proof")
    dist = dist if dist is not None else InputDistribution.uniform(f.x_size)
    channel = channel if channel is not None else Deterministic()
    if name == "greedy":
        return Ordering(_greedy_perm(f, dist, channel), "greedy")
    return Ordering(
        _exhaustive_perm(f, dist, channel, threads, allow_big_exhaustive), "exhaustive"
    )


def standard_ordering(family: FunctionFamily) -> Ordering:
    """The ordering under which each built-in family's reference bound holds."""
    if isinstance(family, (Index, Equality)):
        return Ordering(_natural_perm(family.y_size), "natural")
    if isinstance(family, (InnerProduct, Disjointness)):
        return Ordering(_unit_first_perm(family.y_size), "unit-first")
    if isinstance(family, KIntersect):
        return Ordering(_kint_proof_perm(family.y_size, family.k), "kint-proof")
    raise ArgumentError(f"no standard ordering for {family!r}")


# ---------------------------------------------------------------------------
# Closed-form reference values
# ---------------------------------------------------------------------------


def eq_closed_form_deterministic(n: int) -> float:
    """Errorless bound for equality on [2**n] under the natural ordering: exactly n.

    Evaluates the telescoping sum sum_{i=2}^{2^n} (i log i - (i-1) log(i-1)) / 2^n
    as a numerical guard before returning the exact value.
    """
    if n < 1:
        raise ArgumentError(f"n must be >= 1, got {n}")
    size = 1 << n
    total = math.fsum(
        (i * math.log2(i) - (i - 1) * math.log2(i - 1)) / size for i in range(2, size + 1)
    )
    assert abs(total - n) <= TOLERANCE
    return float(n)


def eq_closed_form_symmetric(n: int, eps: float) -> float:
    """Symmetric-channel bound for equality under the natural ordering:

    (1/2^n) * sum_{i=2}^{2^n} i * (h(eps + (1-2 eps)/i) - h(eps)).
    """
    if n < 1:
        raise ArgumentError(f"n must be >= 1, got {n}")
    if not 0.0 < eps < 0.5:
        raise ArgumentError(f"eps must lie in (0, 0.5), got {eps!r}")
    size = 1 << n
    h_eps = binary_entropy(eps)
    return math.fsum(
        i * (binary_entropy(eps + (1.0 - 2.0 * eps) / i) - h_eps) for i in range(2, size + 1)
    ) / size


def eq_closed_form_one_sided(n: int, eps_ii: float) -> float:
    """One-sided bound for equality (errors allowed only when f = 1):

    sum_{i=0}^{2^n-2} ((2^n - i)/2^n) h((1 - eps_ii)/(2^n - i))
      - ((2^n - 1)/2^n) h(eps_ii).
    """
    if n < 1:
        raise ArgumentError(f"n must be >= 1, got {n}")
    if not 0.0 <= eps_ii < 0.5:
        raise ArgumentError(f"eps_ii must lie in [0, 0.5), got {eps_ii!r}")
    size = 1 << n
    head = math.fsum(
        ((size - i) / size) * binary_entropy((1.0 - eps_ii) / (size - i))
        for i in range(0, size - 1)
    )
    return head - ((size - 1) / size) * binary_entropy(eps_ii)


def kint_analytic_bound(n: int, k: int, eps: float) -> float:
    """Closed-form lower bound for the k-intersect family:

    (1 - h(eps)) * sum_{i=k}^{n-1} 2^{-i} C(i-1, k-1) (n - i),

    which collapses the k-fold nested sum arising from the proof ordering and
    is itself at least (n - 2k)(1 - h(eps)).
    """
    if n < 1 or not 1 <= k <= n // 2:
        raise ArgumentError(f"requires n >= 1 and 1 <= k <= floor(n/2), got n={n}, k={k}")
    if not 0.0 <= eps < 0.5:
        raise ArgumentError(f"eps must lie in [0, 0.5), got {eps!r}")
    inner = math.fsum(
        math.comb(i - 1, k - 1) * (n - i) / (1 << i) for i in range(k, n)
    )
    return (1.0 - binary_entropy(eps)) * inner


# ---------------------------------------------------------------------------
# Randomized cross-check corpus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OracleCheckResult:
    cases: int
    seed: int
    max_size: int
    max_deviation: float

    @property
    def ok(self) -> bool:
        return self.max_deviation <= TOLERANCE


def oracle_check(cases: int = 100, seed: int = 1783, max_size: int = 16) -> OracleCheckResult:
    """Compare ``compute_bound`` and ``direct_oracle`` on random cases.

    Random functions, distributions, orderings and channels (all three kinds)
    with x_size, y_size up to ``max_size``; returns the largest per-term or
    total deviation observed.
    """
    if cases < 1:
        raise ArgumentError(f"cases must be >= 1, got {cases}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for case in range(cases):
        x_size = int(rng.integers(1, max_size + 1))
        y_size = int(rng.integers(1, max_size + 1))
        f = BooleanFunction(x_size, y_size, rng.integers(0, 2, x_size * y_size))
        if case % 2 == 0:
            dist = InputDistribution.uniform(x_size)
        else:
            dist = InputDistribution(rng.random(x_size) + 1e-3)
        ordering = Ordering(tuple(int(v) for v in rng.permutation(y_size)))
        kind = case % 3
        if kind == 0:
            channel: ChannelModel = Deterministic()
        elif kind == 1:
            channel = Symmetric(float(rng.uniform(0.0, 0.5)))
        else:
            channel = Asymmetric(float(rng.uniform(0.0, 0.5)), float(rng.uniform(0.0, 0.5)))
        fast = compute_bound(f, dist, ordering, channel)
        slow = direct_oracle(f, dist, ordering, channel)
        worst = max(
            worst,
            abs(fast.total - slow.total),
            max(abs(a - b) for a, b in zip(fast.terms, slow.terms)),
        )
    return OracleCheckResult(cases=cases, seed=seed, max_size=max_size, max_deviation=worst)

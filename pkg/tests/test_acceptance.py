"""Acceptance suite: one test per criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every assertion uses the tolerance stated next to it.
"""

import itertools
import math
import time

import numpy as np
import pytest

from icbounds import (
    Asymmetric,
    BooleanFunction,
    Deterministic,
    Disjointness,
    Equality,
    Index,
    InnerProduct,
    InputDistribution,
    JointTable,
    KIntersect,
    Ordering,
    Symmetric,
    binary_entropy,
    box_count,
    build_family,
    census,
    classify_function,
    compute_bound,
    conditional_mutual_information,
    decompose,
    eq_closed_form_one_sided,
    eq_closed_form_symmetric,
    hierarchy_check,
    kint_analytic_bound,
    merge_variables,
    oracle_check,
    signature,
    standard_ordering,
    success_probability,
    violation_check,
)

TOL = 1e-9


def report(criterion, detail):
    print(f"PASS criterion {criterion}: {detail}")


def uniform_bound(family, ordering, channel):
    f = build_family(family)
    return compute_bound(f, InputDistribution.uniform(f.x_size), ordering, channel)


def test_criterion_01_equality_deterministic_is_exactly_n():
    elapsed_at_10 = None
    for n in range(1, 11):
        start = time.perf_counter()
        rep = uniform_bound(Equality(n), standard_ordering(Equality(n)), Deterministic())
        elapsed = time.perf_counter() - start
        assert rep.total == pytest.approx(float(n), abs=TOL)
        if n == 10:
            elapsed_at_10 = elapsed
    assert elapsed_at_10 < 10.0
    report(1, f"EQ(n) deterministic = n for n=1..10; n=10 in {elapsed_at_10:.2f}s")


def test_criterion_02_index_closed_form_under_random_orderings():
    rng = np.random.default_rng(2024)
    for n in range(1, 13):
        f = build_family(Index(n))
        dist = InputDistribution.uniform(f.x_size)
        for eps in (0.0, 0.05, 0.1, 0.25):
            expected = n * (1.0 - binary_entropy(eps))
            channel = Symmetric(eps)
            for _ in range(10):
                perm = Ordering(tuple(int(v) for v in rng.permutation(n)))
                total = compute_bound(f, dist, perm, channel).total
                assert total == pytest.approx(expected, abs=TOL)
    report(2, "INDEX(n) = n(1-h(eps)) for n<=12, eps in {0,.05,.1,.25}, 10 orderings each")


def test_criterion_03_ip_and_disj_term_structure():
    for family_cls in (InnerProduct, Disjointness):
        for n in range(1, 11):
            family = family_cls(n)
            f = build_family(family)
            dist = InputDistribution.uniform(f.x_size)
            ordering = standard_ordering(family)
            for eps in (0.0, 0.1, 0.25):
                channel = Deterministic() if eps == 0.0 else Symmetric(eps)
                rep = compute_bound(f, dist, ordering, channel)
                head = 1.0 - binary_entropy(eps)
                for i, term in enumerate(rep.terms):
                    expected = head if i < n else 0.0
                    assert term == pytest.approx(expected, abs=TOL)
    report(3, "IP/DISJ unit-first terms: n heads of 1-h(eps), zero tail, n<=10")


def test_criterion_04_kint_inequality_and_analytic_identity():
    for n in range(2, 15):
        for k in range(1, n // 2 + 1):
            family = KIntersect(n, k)
            f = build_family(family)
            dist = InputDistribution.uniform(f.x_size)
            ordering = standard_ordering(family)
            for eps in (0.0, 0.1):
                channel = Deterministic() if eps == 0.0 else Symmetric(eps)
                total = compute_bound(f, dist, ordering, channel).total
                floor = (n - 2 * k) * (1.0 - binary_entropy(eps))
                assert total >= floor - TOL, (n, k, eps)

    def nested(n, k):
        m = n - k - 1
        coeff = [(n - k - i) / 2.0 ** (k + i) for i in range(m + 1)]

        def rec(depth, lo):
            if depth == 1:
                return sum(coeff[lo:])
            return sum(rec(depth - 1, j) for j in range(lo, m + 1))

        return rec(k, 0)

    for n in range(2, 11):
        for k in range(1, n // 2 + 1):
            assert kint_analytic_bound(n, k, 0.0) == pytest.approx(nested(n, k), abs=TOL)
            assert kint_analytic_bound(n, k, 0.1) == pytest.approx(
                nested(n, k) * (1.0 - binary_entropy(0.1)), abs=TOL
            )
    report(4, "k-INT proof-ordering total >= (n-2k)(1-h(eps)) for n<=14; "
              "analytic bound matches k-fold nested sum for n<=10")


def test_criterion_05_equality_symmetric_cap_and_closed_form():
    cap = 2.535940 + 1e-6  # (1-2eps) log2((1-eps)/eps) at eps = 0.1
    for n in range(1, 13):
        rep = uniform_bound(Equality(n), standard_ordering(Equality(n)), Symmetric(0.1))
        assert rep.total <= cap
        assert rep.total == pytest.approx(eq_closed_form_symmetric(n, 0.1), abs=TOL)
    report(5, "EQ(n) symmetric eps=.1 total <= 2.535940 and matches closed form, n<=12")


def test_criterion_06_equality_one_sided_growth():
    for n in range(1, 13):
        rep = uniform_bound(
            Equality(n), standard_ordering(Equality(n)), Asymmetric(0.0, 0.1)
        )
        assert rep.total == pytest.approx(eq_closed_form_one_sided(n, 0.1), abs=TOL)
        assert rep.total >= 0.9 * n - 2.0
    report(6, "EQ(n) one-sided eps_II=.1 matches closed form and is >= 0.9n-2, n<=12")


def test_criterion_07_census_eight_classes_and_hierarchy():
    start = time.perf_counter()
    result = census()
    elapsed = time.perf_counter() - start
    assert len(result) == 8
    assert sum(entry.count for entry in result.values()) == 65536
    ip = build_family(InnerProduct(2))
    disj = build_family(Disjointness(2))
    assert signature(ip) == signature(disj)
    assert classify_function(ip) == classify_function(disj) == "IV"
    checks = hierarchy_check()
    assert [(c.source, c.target, c.passed) for c in checks] == [
        ("II", "III", True),
        ("IV", "V", True),
    ]
    assert elapsed < 60.0
    report(7, f"census: 8 classes over 65536 functions in {elapsed:.1f}s; "
              "IP2 and DISJ2 both class IV; hierarchy II->III and IV->V pass")


def test_criterion_08_prbox_layer():
    assert box_count(build_family(Index(2))) == 1
    assert box_count(build_family(InnerProduct(2))) == 2
    assert box_count(build_family(Disjointness(2))) == 3

    worst = 0
    for fid in range(1 << 16):
        bits = [(fid >> i) & 1 for i in range(16)]
        worst = max(worst, box_count(BooleanFunction(4, 4, bits)))
    assert worst == 3

    rng = np.random.default_rng(8)
    subsets = [s for r in (1, 2, 3, 4) for s in itertools.combinations(range(4), r)]
    pool = [(0, 1, 0, 1), (0, 0, 1, 1), (0, 1, 1, 0), (1, 0, 0, 1)]
    for n_boxes in range(1, 9):
        # assemble a function with exactly n_boxes x-dependent coefficients
        coefficients = {subsets[i]: pool[i % len(pool)] for i in range(n_boxes)}
        bits = []
        for x in range(4):
            for y in range(16):
                acc = 0
                for subset, cbits in coefficients.items():
                    mono = all((y >> (3 - i)) & 1 for i in subset)
                    acc ^= cbits[x] & int(mono)
                bits.append(acc)
        d = decompose(BooleanFunction(4, 16, bits))
        assert d.box_count == n_boxes
        biases = [float(b) for b in rng.uniform(-1.0, 1.0, n_boxes)]
        expected = (1.0 + math.prod(biases)) / 2.0
        assert success_probability(d, biases) == pytest.approx(expected, abs=1e-12)

    for n in (2, 4, 8):
        boxes = decompose(build_family(Index(n))).box_count
        outcome = violation_check(Index(n), [1.0] * boxes, 1)
        assert outcome.violated
    report(8, "box counts (1,2,3); max over 65536 functions = 3; success = "
              "(1+prod e)/2 up to 8 boxes; perfect-box INDEX violates m=1")


def test_criterion_09_oracle_equivalence_on_100_cases():
    result = oracle_check(cases=100, seed=1783, max_size=16)
    assert result.max_deviation <= TOL
    report(9, f"compute_bound vs direct_oracle max deviation "
              f"{result.max_deviation:.3e} over 100 random cases")


def test_criterion_10_information_axioms():
    rng = np.random.default_rng(10)

    def random_table(dims):
        p = rng.random(int(np.prod(dims)))
        return JointTable(tuple(dims), p / p.sum())

    for _ in range(100):
        dims = tuple(int(d) for d in rng.integers(2, 5, size=3))
        t = random_table(dims)
        # (i) non-negativity
        value = conditional_mutual_information(t, 0, 1, (2,))
        assert value >= -TOL
        # (ii) chain rule: I(A;B,C) = I(A;C) + I(A;B|C)
        lhs = conditional_mutual_information(merge_variables(t, 1, 2), 0, 1)
        rhs = conditional_mutual_information(t, 0, 2) + value
        assert lhs == pytest.approx(rhs, abs=TOL)
        # (iii) data processing under deterministic coarse-graining of A
        mapping = [int(v) for v in rng.integers(0, 2, size=dims[0])]
        arr = t.probs.reshape(dims)
        coarse = np.zeros((2,) + dims[1:])
        for src, dst in enumerate(mapping):
            coarse[dst] += arr[src]
        coarse_t = JointTable((2,) + dims[1:], coarse.reshape(-1))
        assert value >= conditional_mutual_information(coarse_t, 0, 1, (2,)) - TOL
        # (iv) symmetry under relabelling values of any variable
        axis = int(rng.integers(0, 3))
        perm = rng.permutation(dims[axis])
        relabeled = JointTable(dims, np.take(arr, perm, axis=axis).reshape(-1))
        assert conditional_mutual_information(relabeled, 0, 1, (2,)) == pytest.approx(
            value, abs=TOL
        )
    report(10, "non-negativity, chain rule, data processing, relabelling "
               "symmetry on 100 random joint tables")

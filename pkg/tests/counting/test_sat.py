from fractions import Fraction
from sys import argv

from numpy.random import default_rng
from pytest import mark, raises

from leafcomm.core import (
    CapacityError,
    MonochromaticityError,
    RoundingGapError,
    ValidationError,
    XorMask,
    parse_formula,
    random_formula,
    skeleton,
    truth_table,
)
from leafcomm.counting import (
    BACKENDS,
    LeafDevice,
    Restriction,
    choose_nprime,
    count_sat_bruteforce,
    count_sat_fast,
    count_sat_protocols,
    count_sat_randomized,
    expand_terms,
    leaf_error_target,
    restricted_counts,
    run_sat_fast,
    run_sat_randomized,
    skeleton_polynomial,
    term_count_bound,
    term_count_formula,
    whole_run_trials,
)
from leafcomm.polynomial import MultilinearPoly, max_error
from leafcomm.protocols import XorProtocol


def test_count_sat_01_fixture():
    f = parse_formula("(and (xor 1 2) (var 4))")
    d = LeafDevice.from_formula(f)

    assert count_sat_bruteforce(f) == 4
    assert count_sat_bruteforce(d) == 4
    assert count_sat_protocols(d) == 4
    for nprime in (1, 2):
        assert count_sat_fast(d, nprime) == 4


def test_Restriction_01():
    restriction = Restriction(7, 3)
    assert (restriction.alice_width, restriction.bob_width) == (4, 3)
    assert restriction.variables == (0, 1, 4)
    assert (restriction.alice_free, restriction.bob_free) == (2, 2)
    alice, bob = restriction.domains(0b101)
    assert alice.tolist() == [0b01, 0b0101, 0b1001, 0b1101]
    assert bob.tolist() == [1, 3, 5, 7]
    for nprime in (0, 6):
        with raises(ValidationError):
            Restriction(7, nprime)


def test_choose_nprime_01():
    assert choose_nprime(1024, 16, 2) == 8
    assert choose_nprime(1024, 16, 2, c=2) == 4
    assert choose_nprime(4, 16, 2) == 1
    assert choose_nprime(10, 1, 0) == 8
    with raises(ValidationError):
        choose_nprime(10, 0, 1)


@mark.parametrize("gate_class", ("xor", "var", "sym", "ltf", "table", "mixed"))
@mark.parametrize("seed", range(3))
def test_run_sat_fast_01(gate_class: str, seed: int):
    f = random_formula(6 + seed, 5, gate_class, rng_seed=seed)
    d = LeafDevice.from_formula(f)
    expected = count_sat_bruteforce(d)

    report = run_sat_fast(d, 2)
    assert report.count == expected
    assert report.nprime == 2
    assert report.to_dict()["restricted"] == list(Restriction(d.n, 2).variables)
    assert run_sat_fast(d).count == expected


@mark.parametrize("backend", BACKENDS)
def test_run_sat_fast_02_backends(backend: str):
    f = random_formula(8, 6, "mixed", rng_seed=21)
    d = LeafDevice.from_formula(f)
    report = run_sat_fast(d, 3, backend=backend)
    assert report.count == count_sat_bruteforce(f)
    assert report.backend == backend


def test_run_sat_fast_03_poly_modes():
    rng = default_rng(5)
    for _ in range(6):
        n, s = int(rng.integers(5, 9)), int(rng.integers(2, 7))
        f = random_formula(n, s, "xor", rng=rng)
        d = LeafDevice.from_formula(f)
        expected = count_sat_bruteforce(f)

        report = run_sat_fast(d, 1)
        assert report.mode == "approx"
        assert report.count == expected
        assert run_sat_fast(d, 1, mode="exact").count == expected

    # the default polynomial is certified within 1/(3 2^n') of the skeleton
    f = parse_formula("(or (var 1) (xor 2 3))", nvars=5)
    poly = skeleton_polynomial(f, 2)
    assert max_error(poly, truth_table(skeleton(f))) <= Fraction(1, 12)


def test_restricted_counts_01_rounding_gap():
    f = parse_formula("(xor 1 2)", nvars=4)
    d = LeafDevice.from_formula(f)
    restriction = Restriction(4, 1)
    protocols = d.two_party_protocols()

    # every free input has one restriction value with x1 xor x2 = 1
    exact = MultilinearPoly(1, {1: 1})
    counts = restricted_counts(expand_terms(protocols, f, exact, restriction))
    assert counts.tolist() == [[1] * 4] * 2

    # half the leaf value lands halfway between two integers
    loose = MultilinearPoly(1, {1: Fraction(1, 2)})
    with raises(RoundingGapError):
        restricted_counts(expand_terms(protocols, f, loose, restriction))
    # within 1/3 of an integer still rounds
    close = MultilinearPoly(1, {1: Fraction(2, 3)})
    counts = restricted_counts(expand_terms(protocols, f, close, restriction))
    assert counts.tolist() == [[1] * 4] * 2


def test_run_sat_fast_04_terms():
    f = random_formula(7, 5, "mixed", rng_seed=8)
    d = LeafDevice.from_formula(f)
    nprime = 2
    poly = skeleton_polynomial(f, nprime)
    report = run_sat_fast(d, nprime)

    assert report.m == term_count_formula(d, poly, nprime)
    assert report.m <= term_count_bound(d, poly, nprime)
    with raises(CapacityError):
        run_sat_fast(d, nprime, term_cap=report.m - 1)


def test_run_sat_fast_05_nih():
    # symmetric leaves over four parties, seen as two-party protocols
    f = random_formula(8, 4, "sym", rng_seed=2)
    d = LeafDevice.from_formula(f, k=4)
    assert all(p.parties == 4 for p in d.protocols)
    assert run_sat_fast(d, 2).count == count_sat_bruteforce(f)
    assert count_sat_protocols(d) == count_sat_bruteforce(f)


def test_run_sat_fast_06_invalid():
    d = LeafDevice.from_formula(parse_formula("(xor 1 2)"))
    with raises(ValidationError):
        run_sat_fast(d)
    f = parse_formula("(or (var 1) (xor 2 3))", nvars=4)
    with raises(ValidationError):
        skeleton_polynomial(f, 1, eps="1/5")
    with raises(ValidationError):
        skeleton_polynomial(f, 1, mode="lp")


def test_run_sat_fast_07_wrong_protocol():
    f = parse_formula("(and (xor 1 3) (var 2))", nvars=4)
    wrong = LeafDevice(f, [XorProtocol(XorMask(0b0101, n=4)), XorProtocol(XorMask(0b0110, n=4))])
    with raises(MonochromaticityError):
        wrong.check()
    with raises(MonochromaticityError):
        run_sat_fast(wrong, 1)
    assert run_sat_fast(wrong, 1, check=False).count == count_sat_protocols(wrong)


def test_LeafDevice_01():
    f = parse_formula("(or (ltf (1 1 -1 2) 2) (not (xor 1 4)))")
    d = LeafDevice.from_formula(f, kind="randomized", delta="1/4")

    assert not d.deterministic
    assert d.error_bound <= Fraction(1, 4)
    d.check()
    with raises(ValidationError):
        d.two_party_protocols()
    sampled = d.sample(default_rng(1))
    assert sampled.deterministic
    assert len(sampled.two_party_protocols()) == 2
    assert d.reduce_error("1/100").error_bound <= Fraction(1, 100)


def test_LeafDevice_02_invalid():
    f = parse_formula("(and (xor 1 2) (var 3))")
    with raises(ValidationError):
        LeafDevice(f, [XorProtocol(XorMask(3, n=3))])
    with raises(ValidationError):
        LeafDevice(f, [XorProtocol(XorMask(3, n=4)), XorProtocol(XorMask(4, n=4))])
    with raises(ValidationError):
        LeafDevice.from_formula(f, kind="quantum")


def test_LeafDevice_03_parties():
    f = parse_formula("(or (ltf (1 1 1) 2) (xor 1 3))")
    d = LeafDevice.from_formula(f, 3, "randomized", "1/2")

    assert [p.widths for p in d.protocols] == [(1, 1, 1)] * 2
    assert d.protocols[0].random_bits == 8
    assert d.error_bound == Fraction(1, 2)
    d.check()
    with raises(ValidationError):
        LeafDevice.from_formula(parse_formula("(ltf (1 1 1 1) 2)"), 3, "randomized")


def test_whole_run_trials_01():
    assert leaf_error_target(3, 2) == Fraction(1, 36)
    trials = whole_run_trials(6, 2, Fraction(99, 100))
    assert trials % 2 == 1
    assert trials == 133


def test_run_sat_randomized_01():
    f = parse_formula("(or (and (ltf (2 -1 1 1 -2 1) 1) (xor 2 5)) (ltf (1 1 1 1 1 1) 4))")
    d = LeafDevice.from_formula(f, kind="randomized")
    report = run_sat_randomized(d, 2, rng=default_rng(4))

    assert report.count == count_sat_bruteforce(f)
    assert report.extra["trials"] == 133
    assert report.extra["leaf_error"] == Fraction(1, 36)
    assert count_sat_randomized(d, 2, seed=4, trials=5) >= 0


def test_run_sat_randomized_02_deterministic():
    f = random_formula(6, 4, "xor", rng_seed=1)
    d = LeafDevice.from_formula(f, kind="randomized")
    report = run_sat_randomized(d, 2, seed=0)
    assert report.count == count_sat_bruteforce(f)
    assert "trials" not in report.extra


def test_run_sat_randomized_03_invalid():
    d = LeafDevice.from_formula(parse_formula("(ltf (1 1 1 1) 2)"), kind="randomized")
    with raises(ValidationError):
        run_sat_randomized(d, 1, confidence=1)
    with raises(ValidationError):
        run_sat_randomized(d, 1, trials=4)


def test_expand_terms_01_empty_leaf():
    # the second gate never accepts under any restriction
    f = parse_formula("(or (var 1) (ltf (1 1 1 1) 9))")
    d = LeafDevice.from_formula(f)
    poly = skeleton_polynomial(f, 1)
    expansion = expand_terms(d.two_party_protocols(), f, poly, Restriction(4, 1))
    assert expansion.m == sum(expansion.per_z)
    assert count_sat_fast(d, 1) == 8


@mark.skipif("--include-long-time-tests" not in argv, reason="long-time tests switched off")
def test_run_sat_fast_08_many():
    rng = default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(4, 15))
        s = int(rng.integers(1, 17))
        f = random_formula(n, s, "xor", rng=rng)
        d = LeafDevice.from_formula(f)
        assert count_sat_fast(d, mode="approx") == count_sat_bruteforce(f)

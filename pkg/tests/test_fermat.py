"""Tests for Fermat numbers, factor tables, and factored group orders."""

import pytest

from nimtower import fermat
from nimtower.errors import MissingFactorization, ParseError, ValidationError
from nimtower.fermat import (
    FactoredOrder,
    FermatFactorization,
    fermat_number,
    group_order,
    is_probable_prime,
    load_factor_table,
    merge_tables,
    validate,
)


def test_fermat_number_values():
    assert fermat_number(0) == 3
    assert fermat_number(4) == 65537
    assert fermat_number(5) == 4294967297
    assert fermat_number(11) == (1 << 2048) + 1


def test_builtin_table_contents(table):
    by_level = {e.j: e for e in table}
    assert sorted(by_level) == list(range(12))
    assert by_level[1].factors == (5,)
    assert by_level[6].factors == (274177, 67280421310721)
    assert len(by_level[11].factors) == 5


def test_builtin_products(table):
    for entry in table:
        product = 1
        for p in entry.factors:
            product *= p
        assert product == fermat_number(entry.j)


def test_load_factor_table():
    loaded = load_factor_table(
        """
        # a comment
        N5: 641 6700417

        N6: 274177 67280421310721
        """
    )
    assert [e.j for e in loaded] == [5, 6]
    assert loaded[0].factors == (641, 6700417)


def test_load_rejects_bad_product():
    with pytest.raises(ValidationError):
        load_factor_table("N5: 641 6700418")


def test_load_rejects_grammar_violations():
    for bad in ("N5 641", "M5: 641", "N5:", "Nx: 3", "N5: 6,41"):
        with pytest.raises(ParseError):
            load_factor_table(bad)
    with pytest.raises(ParseError):
        load_factor_table("N5: 641 6700417\nN5: 641 6700417")


def test_merge_tables(table):
    override = load_factor_table("N5: 641 6700417")
    merged = merge_tables(table, override)
    assert len(merged) == 12
    assert {e.j for e in merged} == set(range(12))


def test_validate_builtin_passes(table):
    report = validate(table)
    assert report.passed
    ids = {r.check_id for r in report.records}
    assert "table.N05.product" in ids
    assert "table.N05.divisor-congruence" in ids
    assert "table.pairwise-distinct" in ids
    assert "fermat.recurrence.i11" in ids
    assert "fermat.successor-coprime.i11" in ids


def test_divisor_congruence_value():
    # 6700417 - 1 = 52347 * 2^7
    assert (6700417 - 1) % (1 << 7) == 0
    assert (6700417 - 1) // (1 << 7) == 52347


def test_validate_flags_duplicate_prime_across_levels():
    # hand-built broken entries bypass the load-time checks on purpose
    t = [
        FermatFactorization(0, (3,)),
        FermatFactorization(1, (3,)),
    ]
    report = validate(t)
    dup = [r for r in report.records if r.check_id == "table.pairwise-distinct"]
    assert dup and not dup[0].ok


def test_validate_flags_wrong_product():
    report = validate([FermatFactorization(5, (641, 6700419))])
    bad = [r for r in report.records if r.check_id == "table.N05.product"]
    assert bad and not bad[0].ok


def test_validate_primality(table):
    report = validate(table[:7], check_primality=True, mr_rounds=16)
    assert report.passed
    broken = validate([FermatFactorization(0, (3,)), FermatFactorization(2, (17,)),
                       FermatFactorization(1, (5,))], check_primality=True)
    assert broken.passed
    report = validate(
        [FermatFactorization(9, tuple(sorted((2424833 * 7455602825647884208337395736200454918783366342657,
                                               fermat_number(9) // 2424833 // 7455602825647884208337395736200454918783366342657))))],
        check_primality=True,
        mr_rounds=16,
    )
    prim = [r for r in report.records if r.check_id == "table.N09.primality"]
    assert prim and not prim[0].ok  # composite cofactor detected


def test_recurrence_identity():
    for i in range(1, 12):
        product = 1
        for j in range(i):
            product *= fermat_number(j)
        assert fermat_number(i) == product + 2


def test_successor_coprimality():
    from nimtower.fermat import _gcd

    for i in range(2, 12):
        for j in range(1, i):
            assert _gcd(fermat_number(i) + 1, fermat_number(j)) == 1


def test_group_order(table):
    go = group_order(2, table)
    assert go.value == 255
    assert go.factors == ((3, 1), (5, 1), (17, 1))
    assert group_order(0, table).value == 3
    with pytest.raises(MissingFactorization):
        group_order(12, table)


def test_group_order_value_identity(table):
    for i in range(0, 12):
        assert group_order(i, table).value + 1 == 1 << (1 << (i + 1))


def test_group_order_with_repeated_primes():
    # user tables need not be squarefree across a synthetic override
    t = [FermatFactorization(0, (3,)), FermatFactorization(1, (5,)),
         FermatFactorization(2, (17,))]
    go = group_order(2, t)
    assert go.value == 255


def test_factored_order_invariants():
    fo = FactoredOrder.from_prime_powers({5: 1, 3: 2})
    assert fo.value == 45
    assert fo.factors == ((3, 2), (5, 1))
    assert fo.format() == "3^2 * 5"
    assert FactoredOrder.from_prime_powers({}).format() == "1"
    with pytest.raises(ValidationError):
        FactoredOrder(10, ((3, 1),))
    with pytest.raises(ValidationError):
        FactoredOrder(15, ((5, 1), (3, 1)))


def test_miller_rabin():
    assert is_probable_prime(2)
    assert is_probable_prime(641)
    assert is_probable_prime(65537)
    assert is_probable_prime((1 << 127) - 1, rounds=16)
    assert not is_probable_prime(1)
    assert not is_probable_prime(561)  # Carmichael
    assert not is_probable_prime(6700417 * 641, rounds=16)
    big = fermat_number(9) // 2424833
    assert not is_probable_prime(big, rounds=8)  # known composite cofactor

import pytest

from e7spectra import oracle
from e7spectra.errors import DomainError

PRIMES = [3, 5, 7, 11, 13]


@pytest.mark.parametrize(
    "q, expected",
    [(3, (4, 6)), (5, (4, 6, 10)), (7, (6, 8, 14))],
)
def test_sl2_omega(q, expected):
    assert oracle.sl2_omega(q).values == expected


def test_sl2_full_spectrum_q5():
    assert oracle.sl2_orders(5) == {1, 2, 3, 4, 5, 6, 10}
    assert len(oracle.sl2_elements(5)) == 120


@pytest.mark.parametrize("q", PRIMES)
def test_group_order(q):
    assert len(oracle.sl2_elements(q)) == q * (q * q - 1)


@pytest.mark.parametrize("q, expected", [(3, (2, 4)), (5, (4, 6))])
def test_torus_exponents(q, expected):
    assert oracle.sl2_torus_exponents(q).values == expected


@pytest.mark.parametrize("q", PRIMES)
def test_oracle_consistency(q):
    ok, detail = oracle.check_oracle(q)
    assert ok, detail
    tor = oracle.sl2_torus_exponents(q)
    assert tor.values == (q - 1, q + 1)
    for t in tor:
        assert any(w % t == 0 for w in oracle.sl2_omega(q))
    for k in oracle.semisimple_orders(q):
        assert (q - 1) % k == 0 or (q + 1) % k == 0


def test_refusals():
    for bad in (2, 9, 17):
        with pytest.raises(DomainError):
            oracle.sl2_omega(bad)
    with pytest.raises(DomainError):
        oracle.sl2_torus_exponents(15)

import pytest

from e7spectra import weyl


@pytest.fixture(scope="session")
def w_group() -> weyl.WeylGroup:
    return weyl.enumerate_w()


@pytest.fixture(scope="session")
def whole(w_group) -> weyl.Subgroup:
    return w_group.whole()


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(test_acceptance.RESULTS):
        ok, detail = test_acceptance.RESULTS[n]
        terminalreporter.write_line(test_acceptance._line(n, ok, detail))

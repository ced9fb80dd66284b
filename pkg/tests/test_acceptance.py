"""One line per acceptance criterion; each criterion replays a verification suite."""
import pytest

from inexgames.verify import SUITES, run_suite

@pytest.mark.parametrize("name", list(SUITES))
def test_criterion(name, capsys):
    r = run_suite(name, seed=0, max_universe=3)
    with capsys.disabled():
        print("\n" + r.line())
        for f in r.failures[:5]:
            print("    " + f)
    assert r.passed, r.failures[:5]

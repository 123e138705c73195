import pytest

from hopfbrace.acceptance import CRITERIA, run_criterion, status_line

STATUS = {}


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    rep, secs = run_criterion(k, seed=0)
    STATUS[k] = status_line(k, CRITERIA[k][0], rep, secs)
    print(STATUS[k])
    assert rep.ok, rep.summary()

import json

import pytest

from tauvalues.pipeline import (
    ExclusionReport,
    FirstExample,
    classify_n_for_target,
    exceptional_sets,
    first_examples,
    p_cubed_branch_closed,
    power_of_two_scan,
    reports_to_json,
    run_theorem2,
    soundness_scan,
    theorem1_target,
    theorem2_target,
)

EXPECTED_SETS = {
    (1, 1): [461],
    (1, -1): [599],
    (2, 1): [],
    (2, -1): [587],
    (4, 1): [23, 449, 569, 863],
    (4, -1): [241, 397, 811],
    (8, 1): [457],
    (8, -1): [3, 293, 983],
}


@pytest.fixture(scope="module")
def sets():
    return exceptional_sets()


def test_exceptional_sets(sets):
    assert sets == EXPECTED_SETS
    assert sum(len(v) for v in sets.values()) == 14


def test_reason_chain_281(table):
    rep, survivors = theorem1_target(1, 281, table)
    assert rep.verdict == "excluded"
    assert [s.d for s in survivors] == [5]
    assert rep.reasons[-1].module == "diophantine.dj_exclude"
    assert rep.details["d=5"]["verdict"] == "excluded"


def test_small_and_known_targets(table):
    rep, _ = theorem1_target(1, 251, table)
    assert rep.verdict == "excluded" and "252" in rep.reasons[0].step
    rep, _ = theorem1_target(1, 691, table)
    assert rep.verdict == "excluded" and rep.reasons[-1].citation == "known-non-values"
    rep, _ = theorem1_target(1, 2411, None)
    assert rep.verdict == "evidence-only"


def test_exceptional_461(table):
    rep, _ = theorem1_target(1, 461, table)
    assert rep.verdict == "exceptional" and rep.shape == "n = p^4"


def test_theorem2_targets():
    rep = theorem2_target(-1, 2, 97)
    assert rep.verdict == "excluded" and rep.reasons[0].citation == "even-values-prior"
    rep = theorem2_target(-1, 8, 3, {-24: [2]})
    assert rep.verdict == "exceptional" and rep.details["realized_by"] == [2]
    assert theorem2_target(1, 4, 23).verdict == "exceptional"
    with pytest.raises(ValueError):
        run_theorem2(3)
    with pytest.raises(ValueError):
        theorem2_target(1, 4, 2053)
    assert p_cubed_branch_closed(2039) and not p_cubed_branch_closed(2053)


def test_first_examples():
    ex = first_examples()
    got = {k: v[0] for k, v in ex.items()}
    assert got[(-1, 2)] == FirstExample(-1, 2, 277, 8209466002937)
    assert got[(1, 2)] == FirstExample(1, 2, 1297, 58734858143062873)
    assert got[(-1, 4)] == FirstExample(-1, 4, 163, 89458189897)
    assert got[(1, 4)] == FirstExample(1, 4, 4603, 56958468932026008713)
    assert got[(-1, 8)] == FirstExample(-1, 8, 2, 3)
    assert got[(1, 8)] == FirstExample(1, 8, 967, 2311913038549627)
    assert str(got[(-1, 8)]) == "tau(2) = -8 * 3"
    second = first_examples(per_shape=2)[(1, 8)]
    assert second[1] == FirstExample(1, 8, 2647, 1344910678663379137)


def test_classify_shapes(sets):
    c = classify_n_for_target((-1, 8, 3), 1000, sets)
    assert 2 in c["instances"]
    assert c["shapes"]  # the prime shape with tau(p) = -24 is allowed
    c = classify_n_for_target((1, 1, 461), 1000, sets)
    assert c["shapes"] == ["p1^4 with tau = 461"]
    c = classify_n_for_target((-1, 4, 241), 1000, sets)
    assert c["all_shapes"] == [
        ("p1 with tau = -964", True),
        ("p1*p2 with tau = -482", False),
        ("p1*p2*p3^4 with tau = -241", False),
    ]
    assert c["tau_equals_2"] == []


def test_power_of_two_scan():
    scan = power_of_two_scan(10_000)
    assert scan == {}


def test_soundness_and_json(table):
    reports = run_theorem2(8, 200) + [theorem1_target(-1, 919, table)[0]]
    assert soundness_scan(reports, 10_000) == []
    data = json.loads(reports_to_json(reports))
    assert len(data) == len(reports)
    assert {d["verdict"] for d in data} <= {"excluded", "exceptional", "evidence-only"}


def test_soundness_catches_a_planted_value():
    bad = ExclusionReport((-1, 8, 3), "excluded")
    assert soundness_scan([bad], 100) == [((-1, 8, 3), [2])]

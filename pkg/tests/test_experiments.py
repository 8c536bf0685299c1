import json
import random
from pathlib import Path

import pytest

from fanoverify.errors import EmptySystem, PreconditionFailed
from fanoverify.experiments import (
    TrialConfig,
    extend_from_section,
    random_curve,
    restrict_to_coordinates,
    sample_hypersurface_containing,
    section_lift_check,
    verify_witness,
    very_free_search,
)
from fanoverify.field import FieldSpec
from fanoverify.forms import BinaryForm, MultiForm
from fanoverify.geometry import Hypersurface, RationalCurve, contains_curve, pullback_tangent_splitting

FIXTURE = Path(__file__).parent / "fixtures" / "very_free_n3_e3_F101.json"


def twisted_cubic(F):
    return RationalCurve(F, tuple(BinaryForm.monomial(F, 3, k) for k in range(4)))


def test_sample_through_twisted_cubic():
    F = FieldSpec(5)
    X = sample_hypersurface_containing(twisted_cubic(F), 3, random.Random(0))
    assert X.d == 3 and contains_curve(X, twisted_cubic(F))


def test_sample_through_line_kills_pure_monomials():
    F = FieldSpec(7)
    L = RationalCurve.line_through(F, [1, 0, 0, 0, 0], [0, 1, 0, 0, 0])
    for seed in range(5):
        X = sample_hypersurface_containing(L, 4, random.Random(seed))
        assert all(any(e[2:]) for e in X.F.terms)


def test_sampling_is_deterministic():
    F = FieldSpec(101)
    a = sample_hypersurface_containing(twisted_cubic(F), 3, random.Random(42))
    b = sample_hypersurface_containing(twisted_cubic(F), 3, random.Random(42))
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)


def test_empty_linear_system():
    F = FieldSpec(0)
    with pytest.raises(EmptySystem):
        sample_hypersurface_containing(twisted_cubic(F), 1, random.Random(0))


def test_random_curve_has_no_common_root():
    F = FieldSpec(2)
    rng = random.Random(3)
    for _ in range(20):
        f, _ = random_curve(F, 3, 2, rng)
        assert f.degree == 2


def test_trial_config_validation():
    with pytest.raises(ValueError):
        TrialConfig(3, 3, 3, FieldSpec(5), 0, 1)
    with pytest.raises(ValueError):
        TrialConfig(3, 3, 4, FieldSpec(5), 10, 1)
    cfg = TrialConfig(4, 4, 2, FieldSpec(101), 10, 9)
    assert TrialConfig.from_json(cfg.to_json()) == cfg


def test_search_is_deterministic_and_schedule_free():
    cfg = TrialConfig(3, 3, 2, FieldSpec(101), 12, 5)
    a = very_free_search(cfg).to_json()
    b = very_free_search(cfg).to_json()
    c = very_free_search(cfg, workers=3).to_json()
    assert a == b == c


def test_lines_are_never_very_free():
    stats = very_free_search(TrialConfig(4, 4, 1, FieldSpec(5), 40, 7))
    assert stats.counts["very_free"] == 0
    assert stats.counts["on_hypersurface"] == 40


def test_counts_and_witnesses_are_consistent():
    stats = very_free_search(TrialConfig(3, 3, 3, FieldSpec(101), 30, 2))
    c = stats.counts
    assert c["on_hypersurface"] + c["errors"] == 30
    assert c["very_free"] <= c["smooth_along"] <= c["on_hypersurface"]
    assert sum(stats.splittings.values()) == c["smooth_along"]
    for key in stats.splittings:
        assert sum(int(x) for x in key.split(",")) == 3 * (3 + 1 - 3)
    for cat in ("very_free", "typical", "on_hypersurface"):
        assert len(stats.witnesses[cat]) <= 5
        for w in stats.witnesses[cat]:
            assert verify_witness(json.loads(json.dumps(w)), cat)


def test_stored_witness():
    w = json.loads(FIXTURE.read_text())
    assert verify_witness(w, "very_free")
    X = Hypersurface.from_json(w["hypersurface"])
    f = RationalCurve.from_json(X.field, w["curve"])
    assert pullback_tangent_splitting(X, f).degrees == (2, 1)


def test_stored_witness_is_reproduced_by_its_seed():
    w = json.loads(FIXTURE.read_text())
    stats = very_free_search(TrialConfig(3, 3, 3, FieldSpec(101), 500, 1), stop_after=1)
    assert stats.witnesses["very_free"][0] == w


def section_witness():
    w = json.loads(FIXTURE.read_text())
    S = Hypersurface.from_json(w["hypersurface"])
    return S, RationalCurve.from_json(S.field, w["curve"])


@pytest.mark.parametrize("section_vars", [[0, 1, 2, 3], [4, 2, 0, 1]])
def test_section_lift_cubic_threefold(section_vars):
    S, f = section_witness()
    Y = extend_from_section(S, 4, section_vars, random.Random(11))
    assert restrict_to_coordinates(Y, section_vars) == S
    rep = section_lift_check(Y, section_vars, f)
    assert rep.section_splitting.degrees == (2, 1)
    assert rep.splitting.rank == 3 and rep.splitting.c1 == 3 * (4 + 1 - 3)
    assert rep.very_free and all(a >= 1 for a in rep.splitting.degrees)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_section_lift_quadrics(n):
    F = FieldSpec(101)
    stats = very_free_search(TrialConfig(2, 2, 2, F, 5, n), stop_after=1)
    w = stats.witnesses["very_free"][0]
    S = Hypersurface.from_json(w["hypersurface"])
    f = RationalCurve.from_json(F, w["curve"])
    Y = extend_from_section(S, n, [0, 1, 2], random.Random(n))
    rep = section_lift_check(Y, [0, 1, 2], f)
    assert rep.very_free and rep.splitting.c1 == 2 * (n + 1 - 2)


def test_section_lift_needs_very_free_curve():
    F = FieldSpec(7)
    x = [MultiForm.variable(F, 4, i) for i in range(4)]
    S = Hypersurface.from_form(x[0] * x[0] * x[0] + x[1] * x[1] * x[1] + x[2] * x[2] * x[2] + x[3] * x[3] * x[3])
    line = RationalCurve.line_through(F, [1, F(-1), 0, 0], [0, 0, 1, F(-1)])
    assert pullback_tangent_splitting(S, line).degrees == (2, -1)
    Y = extend_from_section(S, 4, [0, 1, 2, 3], random.Random(0))
    with pytest.raises(PreconditionFailed):
        section_lift_check(Y, [0, 1, 2, 3], line)
    with pytest.raises(PreconditionFailed):
        section_lift_check(Y, [0, 1, 2], line)
    with pytest.raises(PreconditionFailed):
        section_lift_check(Y, [0, 1, 2, 2], line)

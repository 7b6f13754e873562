import math
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from quadcount.config import ExperimentConfig
from quadcount.counting import brute_force_count
from quadcount.errors import (ConstraintUnsatisfiable, HeightRegimeError, InvalidInput,
                              InvariantViolation, NonClassical)
from quadcount.experiment import (CSV_COLUMNS, _disc_is_square, count_points, experiment_forms,
                                  growth_experiment, random_form, satisfies_constraint, theorem_rhs)
from quadcount.forms import build_form, diagonal_form, form_from_json
from quadcount.localarith import pi_B


def scaled(Q, k):
    return build_form(4, {key: k * v for key, v in Q.coeffs().items()})


# -- config -----------------------------------------------------------------

def test_config_defaults_and_roundtrip(tmp_path):
    cfg = ExperimentConfig(seed=3, B_grid=[1, 4, 9], constraint="nonsquare")
    assert cfg.B_grid == (1, 4, 9)
    p = tmp_path / "cfg.json"
    import json
    p.write_text(json.dumps(cfg.to_dict()))
    assert ExperimentConfig.load(p) == cfg


@pytest.mark.parametrize("bad", [
    {"B_grid": (5, 2)}, {"B_grid": (0, 1)}, {"B_grid": ()}, {"coeff_bound": 0}, {"workers": 0},
    {"brute_budget": 0}, {"constraint": "cube"}, {"epsilon": -1.0},
])
def test_config_validation(bad):
    with pytest.raises(InvalidInput):
        ExperimentConfig(**bad)


def test_config_rejects_unknown_keys(tmp_path):
    with pytest.raises(InvalidInput):
        ExperimentConfig.from_dict({"seed": 1, "colour": "red"})
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(InvalidInput):
        ExperimentConfig.load(p)


# -- random forms -----------------------------------------------------------

@pytest.mark.parametrize("constraint", [None, "square", "nonsquare", "squarefree"])
def test_random_form_deterministic_and_constrained(constraint):
    cfg = ExperimentConfig(seed=11, coeff_bound=5, constraint=constraint)
    a, b = random_form(cfg, 2), random_form(cfg, 2)
    assert a == b and a.disc != 0 and a.classical and a.height <= 5
    assert satisfies_constraint(a, constraint)


def test_random_form_seeds_differ():
    forms = [random_form(ExperimentConfig(seed=s)) for s in range(100)]
    assert all(Q.disc != 0 for Q in forms)
    assert len({Q.gram2 for Q in forms}) >= 95


def test_random_nonclassical_forms():
    Q = random_form(ExperimentConfig(seed=5, classical=False, coeff_bound=3), 0)
    assert Q.height <= 3 and Q.disc != 0


def test_constraint_unsatisfiable():
    # bound 1, classical: forms are diagonal with entries +-1, so |disc| = 1 and
    # a single draw fails the square constraint whenever the disc is -1
    raised = 0
    for s in range(40):
        cfg = ExperimentConfig(seed=s, coeff_bound=1, constraint="square", max_rejections=1)
        try:
            Q = random_form(cfg)
        except ConstraintUnsatisfiable:
            raised += 1
        else:
            assert _disc_is_square(Q.disc)
    assert raised > 0


def test_experiment_forms_puts_explicit_forms_first():
    cfg = ExperimentConfig(n_forms=2, forms=({"n": 4, "coeffs": {"1,1": 1, "2,2": 1, "3,3": 1, "4,4": -1}},))
    ids = [fid for fid, _ in experiment_forms(cfg)]
    assert ids == ["x0", "r0", "r1"]


# -- count_points -----------------------------------------------------------

def test_count_points_methods():
    Q = diagonal_form(1, 1, 1, -1)
    assert {count_points(Q, 5, m).count for m in ("brute", "sliced", "both")} == {108}
    with pytest.raises(InvalidInput):
        count_points(Q, 5, "guess")


def test_count_points_mismatch_is_an_invariant_violation(monkeypatch):
    from quadcount import experiment
    from quadcount.counting import CountReport
    monkeypatch.setattr(experiment, "sliced_count", lambda Q, B, w: CountReport(B, -1, "sliced"))
    with pytest.raises(InvariantViolation):
        count_points(diagonal_form(1, 1, 1, -1), 3, "both")


# -- the bound --------------------------------------------------------------

def test_bound_standard_form():
    Q = diagonal_form(1, 1, 1, -1)
    rep = theorem_rhs(Q, 100, 0.0)
    assert rep.varpi == 1 and rep.delta_bad == 1 and rep.delta == -1
    expected = float(pi_B(-1, 100)) * (100 ** (4 / 3) + 100 ** 2)
    assert rep.rhs == pytest.approx(expected, rel=1e-12)
    assert rep.hypothesis_ok and rep.count == brute_force_count(Q, 100).count
    assert rep.ratio == pytest.approx(rep.count / rep.rhs)


def test_bound_lower_family_scaling():
    Q = diagonal_form(1, 1, 1, -1)
    rep2 = theorem_rhs(scaled(Q, 2), 10, count=0)
    assert rep2.delta_bad == 16


@pytest.mark.parametrize("k", [2, 3, 5, 7])
def test_scaling_invariance(k):
    Q = diagonal_form(1, 2, -3, -5)
    kQ = scaled(Q, k)
    for B in (1, 4, 9):
        assert brute_force_count(kQ, B).count == brute_force_count(Q, B).count
    a, b = theorem_rhs(Q, 9), theorem_rhs(kQ, 9)
    assert a.count == b.count
    if math.gcd(k, a.delta) == 1:
        assert b.delta_bad == k ** 4 * a.delta_bad


def test_square_discriminant_rhs_dominates_B2logB():
    Q = diagonal_form(1, 1, -1, -1)
    for B in (10, 100, 1000, 10 ** 4):
        rep = theorem_rhs(Q, B, count=0)
        assert rep.rhs >= B * B * math.log(B) * 0.1


def test_bound_errors():
    with pytest.raises(NonClassical):
        theorem_rhs(build_form(4, {(0, 1): 1, (2, 2): 1, (3, 3): -1}), 10)
    with pytest.raises(InvalidInput):
        theorem_rhs(diagonal_form(1, 1, 1, -1), 1)
    with pytest.raises(HeightRegimeError):
        theorem_rhs(diagonal_form(1, 1, 1, -(2 ** 25)), 2, count=0)


# -- growth experiment ------------------------------------------------------

def _strip_elapsed(text):
    rows = [r.split(",") for r in text.strip().split("\n")]
    i = rows[0].index("elapsed")
    return [r[:i] + r[i + 1:] for r in rows]


def test_growth_experiment_rows_and_determinism(tmp_path):
    cfg = ExperimentConfig(seed=2, n_forms=2, B_grid=(1, 2, 5), out=str(tmp_path / "a.csv"),
                           forms=({"n": 4, "coeffs": {"1,1": 1, "2,2": 1, "3,3": 1, "4,4": -1}},))
    res = growth_experiment(experiment_forms(cfg), cfg.B_grid, cfg)
    assert len(res.rows) == 9 and res.skipped == 0
    assert res.rows[0]["N"] == 12 and res.rows[0]["form_id"] == "x0"
    assert res.csv_text.split("\n")[0] == ",".join(CSV_COLUMNS)
    assert (tmp_path / "a.csv").read_text() == res.csv_text
    again = growth_experiment(experiment_forms(cfg), cfg.B_grid, replace(cfg, out=None, workers=2))
    assert _strip_elapsed(again.csv_text) == _strip_elapsed(res.csv_text)
    assert res.max_N_over_B2_nonsquare == max(r["N_over_B2"] for r in res.rows)


def test_growth_experiment_skips_over_budget_cells():
    cfg = ExperimentConfig(seed=2, n_forms=1, B_grid=(2, 60), brute_budget=10 ** 4, sliced_max_B=10)
    res = growth_experiment(experiment_forms(cfg), cfg.B_grid, cfg)
    assert [r["method"] for r in res.rows] == ["both", "skipped"]
    assert res.skipped == 1 and res.rows[1]["N"] is None
    assert res.csv_text.strip().split("\n")[2].split(",")[5] == ""


def test_growth_experiment_scaling_family():
    Q = diagonal_form(1, 1, 1, -1)
    cfg = ExperimentConfig(n_forms=0, B_grid=(1, 3, 6))
    res = growth_experiment([("q", Q), ("2q", scaled(Q, 2)), ("3q", scaled(Q, 3))], cfg.B_grid, cfg)
    by_B = {}
    for r in res.rows:
        by_B.setdefault(r["B"], set()).add(r["N"])
    assert all(len(v) == 1 for v in by_B.values())

from pathlib import Path

import pytest

import antsched

DATA = Path(__file__).resolve().parents[2] / "tests" / "data"


def test_ladder_and_lateness():
    ladder = antsched.QualityLadder.default()
    assert len(ladder) == 3
    assert ladder.sizes == pytest.approx([1.77, 3.69, 4.51])
    assert ladder[2].label == "high"
    assert antsched.lateness(5, 2) == 3
    assert antsched.lateness(1, 4) == 0
    with pytest.raises(ValueError):
        antsched.QualityLadder.from_sizes([3.0, 2.0])


def test_schedulers_on_small_scenario():
    ladder = antsched.QualityLadder.default()
    scenario = antsched.Scenario(3, 10.0, [[10.0, 0.0, 5.0], [4.6, 4.6, 4.6]])
    for name in ("bufferFirst", "qualityFirst", "fill", "exact"):
        run = antsched.schedule(name, scenario, ladder)
        assert run.status == antsched.SolveStatus.OPTIMAL
        assert antsched.validate_schedule(run.schedule, scenario, ladder) == []
    exact = antsched.schedule("exact", scenario, ladder).schedule
    heur = antsched.schedule("fill", scenario, ladder).schedule
    assert antsched.objective_value(exact, ladder) <= antsched.objective_value(heur, ladder) + 1e-9
    report = antsched.compute_metrics(exact, scenario, ladder)
    assert report.avg_lateness_seconds == 0.0
    with pytest.raises(ValueError):
        antsched.schedule("bogus", scenario, ladder)


def test_infeasible_exact():
    ladder = antsched.QualityLadder.default()
    scenario = antsched.Scenario(2, 10.0, [[0.0, 0.0]])
    run = antsched.schedule("exact", scenario, ladder)
    assert run.status == antsched.SolveStatus.INFEASIBLE
    assert run.schedule is None


def test_schedule_csv_round_trip():
    text = (DATA / "sample_schedule.csv").read_text()
    sched = antsched.Schedule.from_csv(text, 8)
    assert sched.users[0][4].quality == 0
    assert antsched.Schedule.from_csv(sched.to_csv(antsched.QualityLadder.default()), 8) == sched
    with pytest.raises(antsched.ParseError):
        antsched.Schedule.from_csv("user,segment\n", 8)


def test_channel_model():
    loss = antsched.path_loss_db(1.0)
    assert loss == pytest.approx(128.1)
    assert 0.0 < antsched.shannon_rate_mbps(loss) <= 30.0
    assert sum(antsched.allocate_proportional_fair([40.0, 40.0], 30.0)) == pytest.approx(30.0)
    scenario = antsched.build_scenario("numBaseStations=6\nnumUsers=2\nshadowingSigmaDb=0\n")
    assert scenario.num_users == 2
    assert scenario.num_slots == 6


def test_hls_join_matches_golden():
    master = (DATA / "master.m3u8").read_text()
    variants = [(DATA / f"variant_{q}.m3u8").read_text() for q in ("low", "med", "high")]
    sched = antsched.Schedule.from_csv((DATA / "sample_schedule.csv").read_text(), 8)
    joined = antsched.join_playlists(master, variants, sched, 0, 0, 10)
    assert joined == (DATA / "joined.m3u8").read_text()
    assert antsched.playlist_buffer_size(joined) == 2
    with pytest.raises(antsched.ConsistencyError):
        antsched.join_playlists(master, variants[:2], sched, 0, 0, 10)


def test_experiment_and_oracle():
    out = antsched.run_experiment("numBaseStations=8\nremovalCounts=0,2\nrunsPerPoint=2\n")
    assert out["results"].startswith("removed_bs,run,scheduler")
    assert out["quality"].count("\n") > 1
    report = antsched.oracle_check(4, 30, 7)
    assert report["instances"] == 30
    assert report["mismatches"] == 0
    mean, half = antsched.confidence_interval([1.0, 2.0, 3.0])
    assert mean == pytest.approx(2.0)
    assert half > 0

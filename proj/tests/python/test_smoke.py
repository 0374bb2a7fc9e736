import json
import math
import os
import pathlib
import random

import pytest

import oilcast

SOURCE = pathlib.Path(os.environ.get("OILCAST_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
FIXTURE = SOURCE / "data" / "fixtures" / "seven_close.csv"


def reference_pearson(x, y):
    mx, my = sum(x) / len(x), sum(y) / len(y)
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def test_pearson_matches_reference():
    assert oilcast.pearson([1, 2, 3, 4, 5], [2, 4, 5, 4, 5]) == pytest.approx(6 / math.sqrt(60), abs=1e-12)
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(3, 60)
        x = [rng.uniform(-5, 5) for _ in range(n)]
        y = [rng.uniform(-5, 5) for _ in range(n)]
        assert oilcast.pearson(x, y) == pytest.approx(reference_pearson(x, y), abs=1e-12)


def test_constant_input_raises_degenerate():
    with pytest.raises(oilcast.DegenerateError):
        oilcast.pearson([1, 1, 1], [1, 2, 3])
    assert issubclass(oilcast.DegenerateError, oilcast.OilcastError)


def test_correlation_matrix_on_fixture():
    frame = oilcast.read_frame(FIXTURE)
    assert len(frame["dates"]) == 250
    columns = list(frame["columns"].items())
    labels, rows = oilcast.correlation_matrix(frame["dates"], columns)
    assert labels == [name for name, _ in columns]
    for i in range(len(labels)):
        assert rows[i][i] == pytest.approx(1.0, abs=1e-12)
        for j in range(len(labels)):
            assert rows[i][j] == pytest.approx(rows[j][i], abs=1e-12)
            assert -1.0 <= rows[i][j] <= 1.0


def test_windowed_histogram_accounts_for_every_window():
    frame = oilcast.read_frame(FIXTURE)
    a = frame["columns"]["BP.L.close"]
    b = frame["columns"]["WTI.close"]
    report = oilcast.windowed_correlations(a, b, 40)
    assert report["total_windows"] == 6
    assert sum(report["histogram"]["counts"]) + report["skipped_windows"] == 6
    assert sum(report["histogram"]["percents"]) == pytest.approx(100.0)
    assert report["stats"]["mean"] == pytest.approx(sum(report["correlations"]) / len(report["correlations"]))


def test_acf_and_lookback():
    acf = oilcast.autocorrelation([float(i) for i in range(100)], 20)
    assert acf[0] == 1.0
    assert all(acf[k] >= acf[k + 1] for k in range(20))
    assert oilcast.select_lookback(acf, 0.5) >= 1


def test_param_count_and_gradient_check():
    assert oilcast.param_count(6, 50, 64) == 14729
    report = oilcast.gradient_check(seed=3)
    assert report["max_relative_error"] < 1e-5
    assert report["parameters_checked"] == oilcast.param_count(2, 3, 2)


def test_evaluate_worked_example():
    m = oilcast.evaluate([100, 200], [110, 180])
    assert m["mse"] == 250.0
    assert m["mae"] == 15.0
    assert m["mape"] == pytest.approx(10.0)
    with pytest.raises(oilcast.DataError):
        oilcast.evaluate([1, 0], [1, 1])


def test_parse_csv_rejects_bad_rows():
    s = oilcast.parse_csv("date,open,high,low,close\n2021-01-04,1,2,0.5,1.5\n", "X")
    assert s["dates"] == ["2021-01-04"] and s["close"] == [1.5]
    with pytest.raises(oilcast.ParseError):
        oilcast.parse_csv("date,open,high,low,close\n2021-01-04,1,2,oops,1.5\n", "X")


def test_small_experiment_end_to_end(tmp_path):
    market = oilcast.synthetic_market(days=160, seed=17)
    dates = market["dates"]
    frame_path = tmp_path / "frame.csv"
    names = list(market["columns"])
    with open(frame_path, "w") as f:
        f.write(",".join(["date"] + names) + "\n")
        for i, d in enumerate(dates):
            f.write(",".join([d] + [repr(market["columns"][n][i]) for n in names]) + "\n")
    spec = {
        "data": str(frame_path),
        "target": "OILCO",
        "variant": "+WTI",
        "train_last": dates[119],
        "test_first": dates[120],
        "test_last": dates[-1],
        "lstm": {"hidden_dim": 4, "dense_dim": 3, "lookback": 5},
        "train": {"epochs": 2, "batch_size": 10, "seed": 21},
    }
    a = oilcast.run_experiment(spec, frame_path, tmp_path / "runs")
    b = oilcast.run_experiment(json.dumps(spec), frame_path)
    assert a["hash"] == b["hash"] and len(a["hash"]) == 16
    assert a["predicted"] == b["predicted"]
    assert len(a["truth"]) == len(dates) - 120
    assert len(a["train_loss"]) == 2
    assert pathlib.Path(a["run_dir"]).is_dir()
    assert b["run_dir"] is None
    bad = dict(spec, target="NOPE")
    with pytest.raises(oilcast.PipelineError):
        oilcast.run_experiment(bad, frame_path)

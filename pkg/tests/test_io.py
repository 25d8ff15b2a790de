import json

import numpy as np
import pytest

from period_scope.models.period import MonteCarloParams
from period_scope.utils.errors import SignalIOError
from period_scope.utils.io import (
    read_json,
    read_signal_csv,
    write_json,
    write_signal_csv,
    write_table_csv,
)


def test_signal_round_trip_is_bit_faithful(tmp_path, rng):
    samples = rng.standard_normal(50) * 1e3
    path = tmp_path / "nested" / "signal.csv"
    write_signal_csv(path, samples, header=["periods 8,11,16"])
    assert path.read_text().startswith("# periods 8,11,16\n")
    np.testing.assert_array_equal(read_signal_csv(path), samples)
    assert [p.name for p in path.parent.iterdir()] == ["signal.csv"]


def test_comments_and_blank_lines_are_skipped(tmp_path):
    path = tmp_path / "signal.csv"
    path.write_text("# header\n\n1.5\n  -2\n# trailing\n3e-1\n")
    np.testing.assert_array_equal(read_signal_csv(path), [1.5, -2.0, 0.3])


@pytest.mark.parametrize("content", ["1.0\nabc\n", "# only a comment\n", ""])
def test_bad_signal_files(tmp_path, content):
    path = tmp_path / "signal.csv"
    path.write_text(content)
    with pytest.raises(SignalIOError):
        read_signal_csv(path)


def test_missing_files(tmp_path):
    with pytest.raises(SignalIOError):
        read_signal_csv(tmp_path / "absent.csv")
    with pytest.raises(SignalIOError):
        read_json(tmp_path / "absent.json")


def test_table_csv(tmp_path):
    path = tmp_path / "table.csv"
    write_table_csv(path, ["q", "strength", "note"], [[1, 0.25, None], [2, np.float64(0.75), "x"]])
    assert path.read_text() == "q,strength,note\n1,0.25,\n2,0.75,x\n"


def test_json_documents(tmp_path):
    path = tmp_path / "params.json"
    write_json(path, MonteCarloParams(resends=2))
    assert json.loads(read_json(path))["resends"] == 2

    write_json(path, {"period": 91})
    assert json.loads(read_json(path)) == {"period": 91}

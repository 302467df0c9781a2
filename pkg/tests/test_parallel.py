import pytest

from chamber_forge import parallel


def square(x):
    return x * x


@pytest.mark.parametrize("raw,expect", [("", 1), ("abc", 1), ("0", 1), ("-4", 1), ("1", 1)])
def test_worker_count_parsing(monkeypatch, raw, expect):
    monkeypatch.setenv(parallel.ENV_VAR, raw)
    assert parallel.worker_count() == expect


def test_worker_count_capped(monkeypatch):
    monkeypatch.setenv(parallel.ENV_VAR, "100000")
    assert 1 <= parallel.worker_count() <= 100000


def test_worker_count_default(monkeypatch):
    monkeypatch.delenv(parallel.ENV_VAR, raising=False)
    assert parallel.worker_count() == 1


@pytest.mark.parametrize("workers", [1, 2])
def test_ordered_map_preserves_order(workers):
    items = list(range(600, 0, -1))
    assert parallel.ordered_map(square, items, workers=workers, chunksize=16) == [x * x for x in items]

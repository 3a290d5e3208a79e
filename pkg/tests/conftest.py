import pytest


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    path = tmp_path / "dims.jsonl"
    monkeypatch.setenv("LCSLAB_CACHE", str(path))
    return path

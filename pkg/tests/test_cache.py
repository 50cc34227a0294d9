import pytest

from sternct.cache import (CacheDir, CacheError, default_cache_dir, dump_numerator, dump_recurrence,
                           dump_table, load_numerator, load_recurrence, load_table)
from sternct.gf import build_coeff_table, solve_component
from sternct.holonomic import derive_rec_u, derive_rec_v


def test_table_round_trip(tmp_path):
    table = build_coeff_table(3, 5)
    path = tmp_path / "t.txt"
    dump_table(table, path)
    assert path.read_text().splitlines()[0] == "STERNCT-CACHE 1 table 3 5"
    back = load_table(path)
    assert (back.n_seed, back.m, back.rows, back.support) == (table.n_seed, table.m, table.rows, table.support)


def test_numerator_round_trip(tmp_path):
    num = solve_component(4).numerator
    path = tmp_path / "n.txt"
    dump_numerator(num, 4, path)
    assert load_numerator(path) == (4, num)


@pytest.mark.parametrize("kind,derive", [("rec-u", derive_rec_u), ("rec-v", derive_rec_v)])
def test_recurrence_round_trip(tmp_path, kind, derive):
    rec = derive()
    path = tmp_path / f"{kind}.txt"
    dump_recurrence(rec, kind, path)
    assert load_recurrence(path, kind) == rec
    with pytest.raises(CacheError):
        load_recurrence(path, "rec-u" if kind == "rec-v" else "rec-v")


@pytest.mark.parametrize("text", [
    "",
    "NOT-A-CACHE 1 table 3 5\n",
    "STERNCT-CACHE 2 table 3 5\n# support 0 0\n# rows 1\n",
    "STERNCT-CACHE 1 table 3 5\n# rows 1\n",
    "STERNCT-CACHE 1 table 3 5\n# support 0 0\n# rows 1\n0 -4 7\n",
    "STERNCT-CACHE 1 table 3 5\n# support 0 0\n# rows 1\n0 x 7\n",
])
def test_malformed_tables(tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(CacheError):
        load_table(path)


def test_default_dir_precedence(monkeypatch, tmp_path):
    monkeypatch.delenv("STERNCT_CACHE_DIR", raising=False)
    assert str(default_cache_dir()) == ".sternct-cache"
    monkeypatch.setenv("STERNCT_CACHE_DIR", str(tmp_path / "env"))
    assert default_cache_dir() == tmp_path / "env"
    assert default_cache_dir(tmp_path / "flag") == tmp_path / "flag"


def test_cache_dir_hits(tmp_path):
    c = CacheDir(tmp_path)
    first = c.table(3, 5)
    assert (c.hits, c.misses) == (0, 2)  # table and numerator built
    c2 = CacheDir(tmp_path)
    assert c2.table(3, 5).rows == first.rows and c2.hits == 1
    assert c2.rec_v() == derive_rec_v() and c2.rec_v() == derive_rec_v()
    assert c2.hits == 2


def test_disabled_cache_writes_nothing(tmp_path):
    c = CacheDir(tmp_path / "off", enabled=False)
    c.table(3, 5)
    assert not (tmp_path / "off").exists()


def test_corrupt_file_is_rebuilt(tmp_path):
    c = CacheDir(tmp_path)
    want = c.table(3, 5).rows
    (tmp_path / "table-3-5.txt").write_text("garbage\n")
    c2 = CacheDir(tmp_path)
    assert c2.table(3, 5).rows == want
    assert load_table(tmp_path / "table-3-5.txt").rows == want

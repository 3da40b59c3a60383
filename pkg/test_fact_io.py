import pytest

from autoindex.errors import FactFileError
from autoindex.utils.fact_io import read_facts, write_facts


def test_quotes_and_backslashes_survive_a_write(tmp_path):
    source = tmp_path / "in.tsv"
    source.write_text('say "hi"\tC:\\dir\n', encoding="utf-8")
    rows = read_facts(str(source), 2)
    assert rows == [['say "hi"', "C:\\dir"]]

    target = tmp_path / "out" / "copy.tsv"
    assert write_facts(str(target), rows) == 1
    assert target.read_text(encoding="utf-8") == 'say "hi"\tC:\\dir\n'
    assert read_facts(str(target), 2) == rows


@pytest.mark.parametrize("value", ["a\tb", "a\nb", "a\rb"])
def test_write_rejects_separators_inside_values(tmp_path, value):
    with pytest.raises(FactFileError):
        write_facts(str(tmp_path / "bad.tsv"), [[value, "x"]])


def test_read_errors(tmp_path):
    with pytest.raises(FactFileError, match="fact file not found"):
        read_facts(str(tmp_path / "missing.tsv"), 1)

    short = tmp_path / "short.tsv"
    short.write_text("1\t2\n\n3\n", encoding="utf-8")
    with pytest.raises(FactFileError, match="expected 2 columns"):
        read_facts(str(short), 2)

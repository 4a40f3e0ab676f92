import io

import numpy as np
import pytest

from labprec.errors import ConfigError, DataError
from labprec.ingest import ingest, load_manganese, read_csv


def read(text, wide=False):
    return read_csv(io.StringIO(text), wide=wide)


class TestManganese:
    def test_shape_and_first_row(self):
        d = load_manganese()
        assert (d.k, d.n) == (12, 4)
        assert d.values[0].tolist() == [0.0249, 0.0259, 0.0249, 0.0246]

    def test_lab_five_is_constant(self):
        assert load_manganese().values[4].tolist() == [0.0271] * 4

    def test_builtin_unknown(self):
        with pytest.raises(ConfigError):
            ingest("builtin:nickel")


class TestLong:
    def test_order_of_first_appearance(self):
        d = read("lab,replicate,value\nB,1,1\nA,1,5\nB,2,2\nA,2,6\n")
        assert d.values.tolist() == [[1.0, 2.0], [5.0, 6.0]]

    def test_header_case_and_spaces(self):
        d = read(" Lab , Replicate , Value \n1,1,1\n1,2,2\n2,1,3\n2,2,4\n")
        assert d.k == 2

    @pytest.mark.parametrize("text,code", [
        ("", "empty"),
        ("lab,replicate,value\n", "empty"),
        ("lab,rep,value\n1,1,1\n", "missing-header"),
        ("1,1,0.5\n1,2,0.6\n", "missing-header"),
        ("lab,replicate,value\n1,1,1\n1,2,2\n2,1,3\n", "unbalanced"),
        ("lab,replicate,value\n1,1,1,9\n", "unbalanced"),
        ("lab,replicate,value\n1,1,abc\n1,2,1\n2,1,1\n2,2,1\n", "non-numeric"),
        ("lab,replicate,value\n1,1,nan\n1,2,1\n2,1,1\n2,2,1\n", "non-finite"),
        ("lab,replicate,value\n1,1,1\n1,2,2\n", "too-few-labs"),
        ("lab,replicate,value\n1,1,1\n2,1,2\n", "too-few-replicates"),
    ])
    def test_errors(self, text, code):
        with pytest.raises(DataError) as e:
            read(text)
        assert e.value.code == code

    def test_blank_lines_ignored(self):
        d = read("lab,replicate,value\n1,1,1\n\n1,2,2\n2,1,3\n2,2,4\n\n")
        assert d.values.shape == (2, 2)


class TestWide:
    def test_basic(self):
        d = read("lab,r1,r2,r3\n1,1,2,3\n2,4,5,6\n", wide=True)
        assert d.values.tolist() == [[1, 2, 3], [4, 5, 6]]

    @pytest.mark.parametrize("text,code", [
        ("x,r1\n1,2\n", "missing-header"),
        ("lab,r1,r2\n1,1,2\n2,3\n", "unbalanced"),
        ("lab,r1,r2\n1,1,2\n1,3,4\n", "unbalanced"),
        ("lab,r1,r2\n1,1,\n2,3,4\n", "unbalanced"),
        ("lab,r1,r2\n1,1,x\n2,3,4\n", "non-numeric"),
    ])
    def test_errors(self, text, code):
        with pytest.raises(DataError) as e:
            read(text, wide=True)
        assert e.value.code == code

    def test_same_as_long(self, tmp_path):
        m = load_manganese().values
        p = tmp_path / "wide.csv"
        p.write_text("lab,a,b,c,d\n" + "".join(f"{i + 1}," + ",".join(map(repr, row)) + "\n"
                                              for i, row in enumerate(m.tolist())))
        assert np.array_equal(ingest(p, wide=True).values, m)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        ingest(tmp_path / "nope.csv")

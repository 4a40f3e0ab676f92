import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from labprec.report import SCHEMA_VERSION, Table, parse_csv, render, to_csv, to_json, to_markdown

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def table(rows):
    return Table("t one", ("name", "x", "y"), tuple(rows))


class TestCsv:
    @settings(max_examples=100)
    @given(st.lists(st.tuples(st.sampled_from(["a", "boot-i", "ANOVA"]), finite, st.none() | finite),
                    min_size=1, max_size=10))
    def test_round_trip_12_digits(self, rows):
        back = parse_csv(to_csv([table(rows), Table("second", ("v",), ((1.5,),))]))
        assert [t.name for t in back] == ["t one", "second"]
        for got, want in zip(back[0].rows, rows):
            assert got[0] == want[0]
            for g, w in zip(got[1:], want[1:]):
                if w is None:
                    assert g is None
                else:
                    assert g == pytest.approx(w, rel=5e-12, abs=0.0)
                    assert float(format(w, ".12g")) == g

    def test_layout(self):
        text = to_csv([table([("a", 1.0, None)])])
        assert text == "# t one\nname,x,y\na,1,\n"


class TestOther:
    def test_markdown(self):
        md = to_markdown([table([("a", 0.123456789, None)])])
        assert "### t one" in md and "| a | 0.123457 |  |" in md

    def test_json(self):
        doc = json.loads(to_json([table([("a", math.nan, 2.0)])], meta={"command": "x"}))
        assert doc["schema_version"] == SCHEMA_VERSION
        assert doc["tables"][0]["rows"] == [{"name": "a", "x": None, "y": 2.0}]
        assert doc["meta"] == {"command": "x"}

    def test_render_dispatch(self):
        t = [table([("a", 1.0, 2.0)])]
        assert render(t, "csv") == to_csv(t)
        with pytest.raises(ValueError):
            render(t, "xml")

import json

import numpy as np
import pytest

from lorlie import exact as ex
from lorlie import io
from lorlie.corpus import member
from lorlie.lie import JacobiError
from lorlie.search import SearchConfig, search

from conftest import FIXTURES

FIXTURE_FILES = sorted(FIXTURES.glob("*.json"))

H3_TEXT = """{
  "dim": 3,
  "mode": "exact",
  "metric": [
    ["1", "0", "0"],
    ["0", "1", "0"],
    ["0", "0", "1"]
  ],
  "brackets": [
    {"i": 1, "j": 2, "coeffs": ["0", "0", "1"]}
  ]
}
"""


def test_fixture_set_is_shipped():
    names = {f.stem for f in FIXTURE_FILES}
    assert {"h3_euclidean", "einstein_dext4", "einstein_dext4_params", "sl2_killing"} <= names


@pytest.mark.parametrize("path", FIXTURE_FILES, ids=lambda p: p.stem)
def test_fixture_round_trip_is_bit_exact(path):
    text = path.read_text()
    obj = io.read_json(path)
    if io.is_params_obj(obj):
        assert io.dumps_params(io.loads_params(text)) == text
    else:
        assert io.dumps_algebra(io.loads_algebra(text)) == text


def test_canonical_h3_text():
    p = io.loads_algebra(H3_TEXT)
    assert io.dumps_algebra(p) == H3_TEXT
    assert io.algebra_hash(p) == io.algebra_hash(io.loads_algebra(H3_TEXT))


@pytest.mark.parametrize("index", range(12))
def test_corpus_round_trip_exact_and_float(index):
    p = member(21, index).algebra
    text = io.dumps_algebra(p)
    q = io.loads_algebra(text)
    assert ex.allclose(q.alg.c, p.alg.c) and ex.allclose(q.g, p.g)
    assert io.dumps_algebra(q) == text
    f = p.to_float()
    ftext = io.dumps_algebra(f)
    g = io.loads_algebra(ftext)
    assert np.array_equal(g.alg.c, f.alg.c) and np.array_equal(g.g, f.g)
    assert io.dumps_algebra(g) == ftext


def test_rational_strings():
    obj = io.algebra_to_obj(io.loads_algebra(H3_TEXT.replace('["0", "0", "1"]}', '["0", "0", "-3/6"]}')))
    assert obj["brackets"][0]["coeffs"] == ["0", "0", "-1/2"]


def test_params_round_trip():
    text = (FIXTURES / "einstein_dext4_params.json").read_text()
    params = io.loads_params(text)
    assert params.n == 2 and params.mu == 0
    assert io.dumps_params(params) == text


def test_certificates_serialize():
    certs = search(SearchConfig(2, 4, 3, 2)).certificates
    obj = json.loads(io.dumps_certificates(certs))
    assert len(obj) == len(certs)
    for c in obj:
        assert c["kind"] == "certificate" and c["checks"]["ricci_direct_zero"] is True
        io.algebra_from_obj(c["algebra"])
        io.params_from_obj(c["params"])


# -- errors ---------------------------------------------------------------------------------------

def test_syntax_error_location():
    with pytest.raises(io.ParseError) as info:
        io.loads_algebra('{"dim": 3,\n  "mode": "exact",\n  oops}')
    assert (info.value.line, info.value.column) == (3, 3)


@pytest.mark.parametrize("old, new, path, line", [
    ('"i": 1, "j": 2', '"i": 2, "j": 1', "brackets[0]", 10),
    ('"i": 1, "j": 2', '"i": 1, "j": 4', "brackets[0]", 10),
    ('["0", "0", "1"]}', '["0", "0", 1.5]}', "brackets[0].coeffs[2]", 10),
    ('["0", "0", "1"]}', '["0", "x"]}', "brackets[0].coeffs", 10),
    ('["0", "1", "0"],', '["0", "1", "2"],', "metric", 4),
    ('"mode": "exact"', '"mode": "fuzzy"', "mode", 1),
    ('"dim": 3', '"dim": 0', "dim", 1),
])
def test_content_errors_report_path_and_line(old, new, path, line):
    text = H3_TEXT.replace(old, new, 1)
    with pytest.raises(io.ParseError) as info:
        io.loads_algebra(text)
    assert info.value.path == path
    assert info.value.line == line


def test_missing_field_and_degenerate_metric():
    with pytest.raises(io.ParseError, match="missing field 'brackets'"):
        io.loads_algebra('{"dim": 1, "mode": "exact", "metric": [["1"]]}')
    with pytest.raises(io.ParseError, match="degenerate"):
        io.loads_algebra('{"dim": 1, "mode": "exact", "metric": [["0"]], "brackets": []}')


def test_duplicate_pair_rejected():
    text = H3_TEXT.replace('{"i": 1, "j": 2, "coeffs": ["0", "0", "1"]}',
                           '{"i": 1, "j": 2, "coeffs": ["0", "0", "1"]},\n    {"i": 1, "j": 2, "coeffs": ["0", "0", "1"]}')
    with pytest.raises(io.ParseError, match="listed twice"):
        io.loads_algebra(text)


def test_jacobi_checked_on_load():
    text = H3_TEXT.replace('{"i": 1, "j": 2, "coeffs": ["0", "0", "1"]}',
                           '{"i": 1, "j": 2, "coeffs": ["0", "0", "1"]},\n    {"i": 1, "j": 3, "coeffs": ["1", "0", "0"]}')
    with pytest.raises(JacobiError):
        io.loads_algebra(text)
    assert io.loads_algebra(text, check=False).dim == 3


def test_float_file_rejects_strings():
    text = H3_TEXT.replace('"exact"', '"float"')
    with pytest.raises(io.ParseError, match="float entries"):
        io.loads_algebra(text)

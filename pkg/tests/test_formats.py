import json

import numpy as np
import pytest

from willmore_tori.energy import willmore_tensor
from willmore_tori.errors import FormatError, NotOnSphere
from willmore_tori.formats import (curve_from_text, curve_to_text, dumps, read_curve, read_torus, write_curve,
                                   write_torus)
from willmore_tori.sphere_curves import small_circle


def test_curve_round_trip_is_byte_identical(tmp_path, ejiri):
    p = tmp_path / "e.crv"
    write_curve(ejiri.left, p)
    first = p.read_bytes()
    c = read_curve(p)
    assert np.array_equal(c.samples, ejiri.left.samples)
    assert c.period == ejiri.left.period
    write_curve(c, p)
    assert p.read_bytes() == first


def test_curve_header():
    text = curve_to_text(small_circle(1.0, 3, 32))
    head = text.splitlines()[0].split()
    assert head[0] == "3" and head[2] == "32"
    assert float(head[1]) == pytest.approx(2 * np.pi / np.sqrt(2), rel=1e-16)
    assert len(text.splitlines()) == 33


def test_torus_round_trip(tmp_path, ejiri):
    p = tmp_path / "sub" / "ejiri.json"
    write_torus(ejiri, p, provenance="test")
    desc = json.loads(p.read_text())
    assert desc["format"] == "willmore-tori/torus" and desc["left"] == "ejiri.left.crv"
    t = read_torus(p)
    assert willmore_tensor(t).value == pytest.approx(willmore_tensor(ejiri).value, rel=1e-12)


@pytest.mark.parametrize("text", ["", "3 1.0\n", "2 6.28 4\n1 0\n0 1\n", "2 6.28 2\n1 0\nx y\n"])
def test_bad_curve_text(text):
    with pytest.raises(FormatError):
        curve_from_text(text)


def test_off_sphere_samples_rejected():
    with pytest.raises(NotOnSphere):
        t = np.linspace(0, 2 * np.pi, 8, endpoint=False)
        rows = "".join(f"{2 * np.cos(x)} {2 * np.sin(x)}\n" for x in t)
        curve_from_text(f"2 {4 * np.pi} 8\n" + rows)


def test_bad_descriptors(tmp_path, ejiri):
    with pytest.raises(FormatError):
        read_torus(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(FormatError):
        read_torus(bad)
    bad.write_text(json.dumps({"format": "other", "version": 1}))
    with pytest.raises(FormatError):
        read_torus(bad)
    bad.write_text(json.dumps({"format": "willmore-tori/torus", "version": 1, "left": 3, "right": "r.crv"}))
    with pytest.raises(FormatError):
        read_torus(bad)
    bad.write_text(json.dumps({"format": "willmore-tori/torus", "version": 1, "left": "l.crv", "right": "r.crv"}))
    with pytest.raises(FormatError):
        read_torus(bad)


def test_dumps():
    obj = {"b": [1.0, np.float64(0.1), np.inf], "a": True, "c": None, "n": np.int64(3), "s": "x"}
    text = dumps(obj)
    assert text == dumps(dict(reversed(list(obj.items()))))
    back = json.loads(text)
    assert list(back) == ["a", "b", "c", "n", "s"]
    assert back["b"] == [1.0, 0.1, None] and back["n"] == 3
    with pytest.raises(TypeError):
        dumps(object())

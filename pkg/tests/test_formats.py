import pytest
from hypothesis import given, strategies as st

from kspm import formats
from kspm.avalanches import record_log
from kspm.core import Configuration, fixed_point
from kspm.exceptions import IntegrityError, InputError
from kspm.waves import wave_sweep

slopes = st.lists(st.integers(0, 9), max_size=12).map(Configuration)


@given(slopes)
def test_config_roundtrips(c):
    assert formats.config_from_json(formats.config_to_json(c)) == c
    assert formats.config_from_csv(formats.config_to_csv(c)) == c
    h = formats.heights_from_json(formats.heights_to_json(c))
    assert len(h) == len(c)


def test_config_json_rejects_non_list():
    with pytest.raises(InputError):
        formats.config_from_json('{"a": 1}')


def test_avalanche_log_roundtrip():
    log = record_log(3, 300)
    text = formats.dumps_avalanche_log(log)
    assert text.count("\n") == 300
    back = formats.loads_avalanche_log(text, 3)
    assert back.avalanches == log.avalanches and back.final == log.final


def test_avalanche_log_detects_corruption():
    log = record_log(3, 50)
    lines = formats.dumps_avalanche_log(log).splitlines()
    bad = [l.replace('"dense_start":0', '"dense_start":9') for l in lines]
    if bad != lines:
        with pytest.raises(IntegrityError):
            formats.loads_avalanche_log("\n".join(bad), 3)
    with pytest.raises(IntegrityError):
        formats.loads_avalanche_log("\n".join(lines[1:]), 3)
    with pytest.raises(IntegrityError):
        formats.loads_avalanche_log('{"k": 1, "firings": [0, 0]}', 3)


def test_sweep_csv_roundtrip():
    rows = wave_sweep(3, 200)
    text = formats.sweep_to_csv(rows)
    assert text.splitlines()[0] == "N,i_N,L,width,match_mode"
    assert formats.sweep_from_csv(text) == rows


def test_ascii_renderings():
    art = formats.render_heights_ascii(fixed_point(3, 6))
    lines = art.splitlines()
    assert lines[-1] == "-" * len(lines[-2]) or set(lines[-1]) == {"-"}
    assert formats.render_heights_ascii(Configuration()) == "(empty pile)\n"
    log = record_log(4, 500)
    txt = formats.render_avalanches_ascii(log)
    body = txt.splitlines()
    assert body[0].endswith("L") and len(body[0].rstrip()) - 1 == len(str(500)) + 1 + 6
    assert all(set(l.split(" ", 1)[1].strip()) <= set(".+#") for l in body[1:])
    full = formats.render_avalanches_ascii(log, long_only=False)
    assert len(full.splitlines()) == 501


def test_svg_renderings_are_well_formed():
    import xml.dom.minidom

    xml.dom.minidom.parseString(formats.render_heights_svg(fixed_point(3, 30)))
    svg = formats.render_avalanches_svg(record_log(4, 200))
    doc = xml.dom.minidom.parseString(svg)
    assert doc.getElementsByTagName("title")[0].firstChild.data.startswith("KSPM(4)")

"""Serialization and rendering: JSON, JSON-lines, CSV, ASCII and SVG."""
import csv
import io
import json
from xml.sax.saxutils import escape

from .avalanches import Avalanche, AvalancheLog, global_density_column, long_avalanches
from .core import Configuration, Sandpile, heights
from .exceptions import IntegrityError, InputError
from .waves import SweepRow

# -- configurations --


def config_to_json(sigma):
    return json.dumps(list(Configuration(sigma).slopes))


def config_from_json(text):
    data = json.loads(text)
    if not isinstance(data, list):
        raise InputError("a configuration must be a JSON array of integers")
    return Configuration(data)


def heights_to_json(sigma):
    return json.dumps(list(heights(sigma)))


def heights_from_json(text):
    data = json.loads(text)
    if not isinstance(data, list):
        raise InputError("a height profile must be a JSON array of integers")
    return tuple(data)


def config_to_csv(sigma):
    sigma = Configuration(sigma)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["column", "slope", "height"])
    for i, (s, h) in enumerate(zip(sigma.slopes, heights(sigma))):
        w.writerow([i, s, h])
    return buf.getvalue()


def config_from_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    return Configuration([int(r["slope"]) for r in rows])


# -- avalanche logs (one JSON object per line) --


def avalanche_record(a):
    return {"k": a.k, "firings": list(a.firings), "peaks": list(a.peaks),
            "dense_start": a.dense_start}


def write_avalanche_log(log, fh):
    for a in log.avalanches:
        fh.write(json.dumps(avalanche_record(a), separators=(",", ":")) + "\n")


def dumps_avalanche_log(log):
    buf = io.StringIO()
    write_avalanche_log(log, buf)
    return buf.getvalue()


def read_avalanche_log(fh, D):
    """Parse a JSON-lines avalanche log; derived fields are re-checked."""
    avs = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        a = Avalanche.from_firings(rec["k"], rec["firings"])
        if "peaks" in rec and tuple(rec["peaks"]) != a.peaks:
            raise IntegrityError(f"avalanche {a.k}: stored peaks disagree with firings")
        if "dense_start" in rec and rec["dense_start"] != a.dense_start:
            raise IntegrityError(f"avalanche {a.k}: stored dense_start disagrees with firings")
        if a.k != len(avs) + 1:
            raise IntegrityError(f"avalanche records out of order at k={a.k}")
        avs.append(a)
    pile = Sandpile(D)
    for a in avs:
        pile.apply(a.firings)
    return AvalancheLog(D, len(avs), avs, pile.configuration())


def loads_avalanche_log(text, D):
    return read_avalanche_log(io.StringIO(text), D)


# -- sweep tables --

SWEEP_FIELDS = ["N", "i_N", "L", "width", "match_mode"]


def sweep_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_FIELDS)
    for r in rows:
        w.writerow([r.N, r.i_N, r.L, r.width, r.match_mode])
    return buf.getvalue()


def sweep_from_csv(text):
    out = []
    for r in csv.DictReader(io.StringIO(text)):
        out.append(SweepRow(int(r["N"]), int(r["i_N"]), int(r["L"]), int(r["width"]),
                            r["match_mode"] == "zero"))
    return out


# -- rendering --


def render_heights_ascii(sigma):
    """Staircase picture of the pile, tallest row first."""
    h = heights(sigma)
    if not h:
        return "(empty pile)\n"
    lines = []
    for level in range(h[0], 0, -1):
        lines.append("".join("#" if x >= level else " " for x in h).rstrip())
    lines.append("-" * len(h))
    return "\n".join(lines) + "\n"


def render_heights_svg(sigma, cell=8):
    h = heights(sigma)
    width = max(len(h), 1) * cell
    height = (h[0] if h else 1) * cell
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">']
    for i, x in enumerate(h):
        parts.append(f'<rect x="{i * cell}" y="{height - x * cell}" width="{cell}" '
                     f'height="{x * cell}" fill="#c8a165" stroke="#7a5c2e"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _rows(log, long_only):
    if long_only:
        L = global_density_column(log)
        return [log[k] for k in long_avalanches(log, L)]
    return list(log.avalanches)


def render_avalanches_ascii(log, long_only=True):
    """One line per avalanche: '.' idle, '+' fired, '#' peak.

    The header marks the global density column with ``L``.
    """
    L = global_density_column(log)
    rows = _rows(log, long_only)
    if not rows:
        return "(no long avalanches)\n" if long_only else "(no avalanches)\n"
    width = max(a.max_fired for a in rows if a.max_fired is not None) + 1
    label = len(str(log.N))
    lines = [" " * (label + 1) + " " * L + "L"]
    for a in rows:
        peaks = set(a.peaks)
        cells = "".join("#" if c in peaks else "+" if c in a.fired_set else "."
                        for c in range(width))
        lines.append(f"{a.k:>{label}} {cells}")
    return "\n".join(lines) + "\n"


def render_avalanches_svg(log, long_only=True, cell=8):
    L = global_density_column(log)
    rows = _rows(log, long_only)
    width = max((a.max_fired for a in rows if a.max_fired is not None), default=0) + 1
    W, H = width * cell, max(len(rows), 1) * cell
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">',
             f"<title>{escape(f'KSPM({log.D}) avalanches up to {log.N}')}</title>"]
    for r, a in enumerate(rows):
        peaks = set(a.peaks)
        for c in sorted(a.fired_set):
            fill = "#404040" if c in peaks else "#c0c0c0"
            parts.append(f'<rect x="{c * cell}" y="{r * cell}" width="{cell}" height="{cell}" '
                         f'fill="{fill}"/>')
    parts.append(f'<line x1="{L * cell}" y1="0" x2="{L * cell}" y2="{H}" '
                 f'stroke="black" stroke-width="2"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

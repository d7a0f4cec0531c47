"""CSV tables and dependency-free SVG line plots."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .exceptions import MissingColumn, ValidationError

__all__ = ["format_value", "write_csv", "read_csv", "svg_line_plot", "plot_csv"]


def format_value(v) -> str:
    """Shortest round-trip text for numbers; empty string for ``None``."""
    if v is None:
        return ""
    if isinstance(v, (bool, int, np.integer, np.bool_)):
        return str(int(v))
    try:
        return repr(float(v))
    except (TypeError, ValueError):
        return str(v)


def write_csv(target, columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Write rows to ``target`` (path or text stream) with ``\\n`` line endings.

    Returns the CSV text so callers can echo it.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    text = buf.getvalue()
    if isinstance(target, (str, Path)):
        Path(target).write_text(text)
    elif target is not None:
        target.write(text)
    return text


def read_csv(path) -> tuple[list[str], dict[str, list[float]]]:
    """Read a numeric CSV written by :func:`write_csv` into columns."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError(f"{path} is empty") from None
    cols: dict[str, list[float]] = {h: [] for h in header}
    for line in reader:
        if not line:
            continue
        for h, cell in zip(header, line):
            try:
                cols[h].append(float(cell) if cell != "" else math.nan)
            except ValueError:
                cols[h].append(math.nan)
    return header, cols


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _padded(lo: float, hi: float) -> tuple[float, float]:
    if hi > lo:
        return lo, hi
    pad = 0.05 * abs(lo) if lo != 0 else 0.5
    return lo - pad, hi + pad


def svg_line_plot(x: Sequence[float], y: Sequence[float], xlabel: str, ylabel: str,
                  width: int = 640, height: int = 420) -> str:
    """Single polyline with axes, five ticks per axis and axis titles."""
    pts = [(float(a), float(b)) for a, b in zip(x, y) if math.isfinite(a) and math.isfinite(b)]
    if not pts:
        raise ValidationError("nothing to plot: no finite data points")
    left, right, top, bottom = 80, 20, 20, 60
    pw, ph = width - left - right, height - top - bottom
    x0, x1 = _padded(min(p[0] for p in pts), max(p[0] for p in pts))
    y0, y1 = _padded(min(p[1] for p in pts), max(p[1] for p in pts))

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for v in _ticks(x0, x1):
        px = sx(v)
        out.append(f'<line x1="{px:.2f}" y1="{top + ph}" x2="{px:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{top + ph + 20}" font-size="12" text-anchor="middle">{v:.4g}</text>')
    for v in _ticks(y0, y1):
        py = sy(v)
        out.append(f'<line x1="{left - 5}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py + 4:.2f}" font-size="12" text-anchor="end">{v:.4g}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 15}" font-size="14" '
               f'text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="18" y="{top + ph / 2:.2f}" font-size="14" text-anchor="middle" '
               f'transform="rotate(-90 18 {top + ph / 2:.2f})">{escape(ylabel)}</text>')
    coords = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in pts)
    out.append(f'<polyline fill="none" stroke="#1f4e9c" stroke-width="2" points="{coords}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_csv(csv_in, svg_out, x_col: str, y_col: str) -> str:
    """Render two columns of a CSV file as an SVG line plot."""
    header, cols = read_csv(csv_in)
    for col in (x_col, y_col):
        if col not in cols:
            raise MissingColumn(f"column {col!r} not in {csv_in} (have: {', '.join(header)})")
    if not cols[x_col]:
        raise ValidationError(f"{csv_in} has no data rows")
    svg = svg_line_plot(cols[x_col], cols[y_col], x_col, y_col)
    Path(svg_out).write_text(svg)
    return svg

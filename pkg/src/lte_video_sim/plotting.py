"""Self-contained SVG line charts for sweep results.

One polyline per video series, markers at every point, ticks at the data
values when there are few enough to label. No external assets, so the files
render anywhere.
"""

from __future__ import annotations

import math
import os
from pathlib import Path

from lte_video_sim.modulation import bits_per_symbol

X_FIELDS = {"ebno": "ebno_db", "harq": "harq_max", "modulation": "modulation"}
X_LABELS = {
    "ebno": "Eb/No (dB)",
    "harq": "max HARQ transmissions",
    "modulation": "modulation",
}

# laid out on a 720x480 canvas
_W, _H = 720, 480
_ML, _MR, _MT, _MB = 72, 24, 44, 58

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _check_consistent(records, x_field: str) -> None:
    held = ("ebno_db", "harq_max", "modulation", "code_rate", "seed")
    conflicts = []
    for field in held:
        if field == x_field:
            continue
        values = {getattr(r, field) for r in records}
        if len(values) > 1:
            conflicts.append(f"{field}={sorted(map(str, values))}")
    if conflicts:
        raise ValueError(
            "records mix sweep settings within one plot: " + "; ".join(conflicts)
        )


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    span = hi - lo
    raw = span / max(target - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if span / step <= target:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * span:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _series_groups(records) -> dict[str, list]:
    groups: dict[str, list] = {}
    for rec in records:
        groups.setdefault(rec.video, []).append(rec)
    return groups


def emit_plot(records, x_axis: str, y_metric: str, path, title: str | None = None) -> None:
    """Write an SVG chart of y_metric against one sweep axis, per video."""
    if x_axis not in X_FIELDS:
        raise ValueError(f"unknown x axis {x_axis!r}, expected one of {sorted(X_FIELDS)}")
    if not records:
        raise ValueError("no records to plot")
    x_field = X_FIELDS[x_axis]
    if not hasattr(records[0], y_metric):
        raise ValueError(f"records have no metric {y_metric!r}")
    _check_consistent(records, x_field)

    categorical = x_axis == "modulation"
    if categorical:
        cats = sorted({r.modulation for r in records}, key=bits_per_symbol)
        positions = {c: float(i) for i, c in enumerate(cats)}
        to_x = lambda r: positions[r.modulation]
        tick_xs = [positions[c] for c in cats]
        tick_labels = cats
    else:
        to_x = lambda r: float(getattr(r, x_field))
        distinct = sorted({to_x(r) for r in records})
        if len(distinct) <= 13:
            tick_xs = distinct
        else:
            tick_xs = _nice_ticks(distinct[0], distinct[-1])
        tick_labels = [f"{t:g}" for t in tick_xs]

    series = _series_groups(records)
    points = {
        name: sorted(((to_x(r), float(getattr(r, y_metric))) for r in recs))
        for name, recs in series.items()
    }

    xs = [x for pts in points.values() for x, _ in pts]
    ys = [y for pts in points.values() for _, y in pts if math.isfinite(y)]
    x_lo, x_hi = min(xs), max(xs)
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    if ys:
        y_lo, y_hi = min(ys), max(ys)
    else:
        y_lo, y_hi = 0.0, 1.0
    if y_lo == y_hi:
        pad = max(abs(y_lo) * 0.05, 0.5)
        y_lo, y_hi = y_lo - pad, y_hi + pad
    else:
        pad = (y_hi - y_lo) * 0.06
        y_lo, y_hi = y_lo - pad, y_hi + pad

    px_w = _W - _ML - _MR
    px_h = _H - _MT - _MB

    def sx(x: float) -> float:
        return _ML + (x - x_lo) / (x_hi - x_lo) * px_w

    def sy(y: float) -> float:
        return _MT + (y_hi - y) / (y_hi - y_lo) * px_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    if title:
        out.append(
            f'<text x="{_W / 2:g}" y="24" text-anchor="middle" '
            f'font-size="15">{_esc(title)}</text>'
        )

    for t in _nice_ticks(y_lo, y_hi):
        y = sy(t)
        out.append(
            f'<line x1="{_ML}" y1="{y:.2f}" x2="{_W - _MR}" y2="{y:.2f}" '
            f'stroke="#dddddd"/>'
        )
        out.append(
            f'<text x="{_ML - 8}" y="{y + 4:.2f}" text-anchor="end">{t:g}</text>'
        )
    for t, label in zip(tick_xs, tick_labels):
        x = sx(t)
        out.append(
            f'<line x1="{x:.2f}" y1="{_H - _MB}" x2="{x:.2f}" y2="{_H - _MB + 5}" '
            f'stroke="black"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{_H - _MB + 20}" text-anchor="middle">'
            f"{_esc(label)}</text>"
        )

    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{px_w}" height="{px_h}" '
        f'fill="none" stroke="black"/>'
    )
    out.append(
        f'<text x="{_ML + px_w / 2:g}" y="{_H - 14}" text-anchor="middle">'
        f"{_esc(X_LABELS[x_axis])}</text>"
    )
    out.append(
        f'<text x="18" y="{_MT + px_h / 2:g}" text-anchor="middle" '
        f'transform="rotate(-90 18 {_MT + px_h / 2:g})">{_esc(y_metric)}</text>'
    )

    for idx, (name, pts) in enumerate(points.items()):
        color = PALETTE[idx % len(PALETTE)]
        runs: list[list[tuple[float, float]]] = [[]]
        for x, y in pts:
            if math.isfinite(y):
                runs[-1].append((x, y))
            elif runs[-1]:
                runs.append([])  # non-finite value breaks the line
        for run in runs:
            if len(run) >= 2:
                coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in run)
                out.append(
                    f'<polyline points="{coords}" fill="none" stroke="{color}" '
                    f'stroke-width="1.8"/>'
                )
            for x, y in run:
                out.append(
                    f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3.5" '
                    f'fill="{color}"/>'
                )
        ly = _MT + 16 + idx * 18
        lx = _W - _MR - 150
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.8"/>'
        )
        out.append(f'<text x="{lx + 28}" y="{ly}">{_esc(name)}</text>')

    out.append("</svg>")
    _atomic_write(Path(path), "\n".join(out) + "\n")


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)

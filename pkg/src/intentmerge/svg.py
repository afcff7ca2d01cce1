"""Tiny self-contained SVG charts for the benchmark reports.

Only what the harness needs: an accuracy line chart over noise levels and a
grouped bar chart for model comparisons.  No external renderer, bit-stable
output for identical inputs.
"""

from __future__ import annotations

from typing import Mapping, Sequence

PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
)

_MARGIN_LEFT = 60
_MARGIN_RIGHT = 20
_MARGIN_TOP = 40
_MARGIN_BOTTOM = 60


def _fmt(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".") or "0"


def _header(width: int, height: int, title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="15" '
        f'font-weight="bold">{title}</text>',
    ]


def _y_axis(lines: list[str], x0: float, x1: float, y_of, y_label: str) -> None:
    for tick in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0):
        y = y_of(tick)
        lines.append(
            f'<line x1="{x0:.1f}" y1="{y:.1f}" x2="{x1:.1f}" y2="{y:.1f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{x0 - 8:.1f}" y="{y + 4:.1f}" text-anchor="end" '
            f'font-size="11">{_fmt(tick)}</text>'
        )
    mid_y = (y_of(0.0) + y_of(1.0)) / 2
    lines.append(
        f'<text x="16" y="{mid_y:.1f}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 16 {mid_y:.1f})">{y_label}</text>'
    )


def _legend(lines: list[str], names: Sequence[str], width: int, height: int) -> None:
    x = _MARGIN_LEFT
    y = height - 16
    for i, name in enumerate(names):
        color = PALETTE[i % len(PALETTE)]
        lines.append(
            f'<rect x="{x}" y="{y - 9}" width="10" height="10" fill="{color}"/>'
        )
        lines.append(f'<text x="{x + 14}" y="{y}" font-size="11">{name}</text>')
        x += 14 + 7 * len(name) + 18


def line_chart(
    title: str,
    x_labels: Sequence[str],
    series: Mapping[str, Sequence[float]],
    y_label: str = "accuracy",
    width: int = 640,
    height: int = 420,
) -> str:
    """Polyline per series over categorical x positions; y fixed to [0, 1]."""
    if not x_labels:
        raise ValueError("need at least one x position")
    for name, values in series.items():
        if len(values) != len(x_labels):
            raise ValueError(f"series {name!r} does not cover every x position")

    plot_w = width - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = height - _MARGIN_TOP - _MARGIN_BOTTOM

    def x_of(i: int) -> float:
        if len(x_labels) == 1:
            return _MARGIN_LEFT + plot_w / 2
        return _MARGIN_LEFT + plot_w * i / (len(x_labels) - 1)

    def y_of(v: float) -> float:
        return _MARGIN_TOP + plot_h * (1.0 - min(1.0, max(0.0, v)))

    lines = _header(width, height, title)
    _y_axis(lines, _MARGIN_LEFT, width - _MARGIN_RIGHT, y_of, y_label)
    for i, label in enumerate(x_labels):
        lines.append(
            f'<text x="{x_of(i):.1f}" y="{height - _MARGIN_BOTTOM + 18:.1f}" '
            f'text-anchor="middle" font-size="11">{label}</text>'
        )
    for idx, (name, values) in enumerate(series.items()):
        color = PALETTE[idx % len(PALETTE)]
        points = " ".join(f"{x_of(i):.1f},{y_of(v):.1f}" for i, v in enumerate(values))
        lines.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        for i, v in enumerate(values):
            lines.append(
                f'<circle cx="{x_of(i):.1f}" cy="{y_of(v):.1f}" r="3" fill="{color}"/>'
            )
    _legend(lines, list(series), width, height)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def grouped_bars(
    title: str,
    group_labels: Sequence[str],
    series: Mapping[str, Sequence[float]],
    y_label: str = "accuracy",
    width: int = 640,
    height: int = 420,
) -> str:
    """One bar per series within each group; y fixed to [0, 1]."""
    if not group_labels:
        raise ValueError("need at least one group")
    for name, values in series.items():
        if len(values) != len(group_labels):
            raise ValueError(f"series {name!r} does not cover every group")

    plot_w = width - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = height - _MARGIN_TOP - _MARGIN_BOTTOM
    n_groups = len(group_labels)
    n_series = max(1, len(series))
    group_w = plot_w / n_groups
    bar_w = group_w * 0.8 / n_series

    def y_of(v: float) -> float:
        return _MARGIN_TOP + plot_h * (1.0 - min(1.0, max(0.0, v)))

    lines = _header(width, height, title)
    _y_axis(lines, _MARGIN_LEFT, width - _MARGIN_RIGHT, y_of, y_label)
    base_y = y_of(0.0)
    for g, label in enumerate(group_labels):
        center = _MARGIN_LEFT + group_w * (g + 0.5)
        lines.append(
            f'<text x="{center:.1f}" y="{height - _MARGIN_BOTTOM + 18:.1f}" '
            f'text-anchor="middle" font-size="11">{label}</text>'
        )
        for s, (name, values) in enumerate(series.items()):
            color = PALETTE[s % len(PALETTE)]
            x = center - group_w * 0.4 + s * bar_w
            top = y_of(values[g])
            lines.append(
                f'<rect x="{x:.1f}" y="{top:.1f}" width="{bar_w:.1f}" '
                f'height="{base_y - top:.1f}" fill="{color}"/>'
            )
    _legend(lines, list(series), width, height)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

"""Native SVG charts: metric curves and the Kendall heatmap.

Coordinates are written with 6 decimals so identical inputs give identical files.
"""

from collections.abc import Sequence
from html import escape

COLORS = [
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#17becf",
]

WIDTH = 1024
HEIGHT = 640
MARGIN_LEFT = 90
MARGIN_RIGHT = 260
MARGIN_TOP = 70
MARGIN_BOTTOM = 100

Point = tuple[float, float | None, float | None]  # x, mean, std


def _num(value: float) -> str:
    return f"{value:.6f}"


def _segments(points: Sequence[Point]) -> list[list[Point]]:
    """Split a curve where the mean is missing so gaps stay visible."""
    runs: list[list[Point]] = [[]]
    for p in sorted(points, key=lambda q: q[0]):
        if p[1] is None:
            if runs[-1]:
                runs.append([])
            continue
        runs[-1].append(p)
    return [r for r in runs if r]


def line_chart(
    title: str,
    x_label: str,
    y_label: str,
    series: Sequence[tuple[str, Sequence[Point]]],
    y_range: tuple[float, float] = (0.0, 1.0),
) -> str:
    """Polyline chart with one series per metric and ±std whiskers."""
    plot_left, plot_right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    plot_top, plot_bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM

    xs = [p[0] for _, pts in series for p in pts]
    if not xs:
        raise ValueError("No points to plot")
    x_min, x_max = min(xs), max(xs)
    if x_max <= x_min:
        x_min, x_max = x_min - 1.0, x_max + 1.0
    y_min, y_max = y_range

    def x_px(x: float) -> float:
        return plot_left + (x - x_min) / (x_max - x_min) * (plot_right - plot_left)

    def y_px(y: float) -> float:
        y = min(max(y, y_min), y_max)
        return plot_bottom - (y - y_min) / (y_max - y_min) * (plot_bottom - plot_top)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="{_num(WIDTH / 2)}" y="36" text-anchor="middle" font-size="24" font-family="Arial">{escape(title)}</text>',
    ]

    ticks = 5
    for i in range(ticks + 1):
        value = y_min + (y_max - y_min) * i / ticks
        y = y_px(value)
        lines.append(
            f'<line x1="{plot_left}" y1="{_num(y)}" x2="{plot_right}" y2="{_num(y)}" stroke="#d9d9d9" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{plot_left - 10}" y="{_num(y + 5)}" text-anchor="end" font-size="13" '
            f'font-family="Arial">{value:.1f}</text>'
        )
    for x_value in sorted(set(xs)):
        x = x_px(x_value)
        lines.append(
            f'<line x1="{_num(x)}" y1="{plot_bottom}" x2="{_num(x)}" y2="{plot_bottom + 6}" stroke="#000000" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{_num(x)}" y="{plot_bottom + 28}" text-anchor="middle" font-size="13" '
            f'font-family="Arial">{x_value:.3g}</text>'
        )

    lines.append(
        f'<line x1="{plot_left}" y1="{plot_bottom}" x2="{plot_right}" y2="{plot_bottom}" stroke="#000000" stroke-width="2"/>'
    )
    lines.append(f'<line x1="{plot_left}" y1="{plot_top}" x2="{plot_left}" y2="{plot_bottom}" stroke="#000000" stroke-width="2"/>')

    legend_x, legend_y = plot_right + 22, plot_top + 22
    for idx, (label, points) in enumerate(series):
        color = COLORS[idx % len(COLORS)]
        for run in _segments(points):
            poly = " ".join(f"{_num(x_px(x))},{_num(y_px(m))}" for x, m, _ in run)  # type: ignore[arg-type]
            lines.append(f'<polyline fill="none" stroke="{color}" stroke-width="3" points="{poly}"/>')
            for x, m, s in run:
                cx, cy = x_px(x), y_px(m)  # type: ignore[arg-type]
                if s:
                    lo, hi = y_px(m - s), y_px(m + s)  # type: ignore[operator]
                    lines.append(
                        f'<line x1="{_num(cx)}" y1="{_num(lo)}" x2="{_num(cx)}" y2="{_num(hi)}" '
                        f'stroke="{color}" stroke-width="1"/>'
                    )
                lines.append(f'<circle cx="{_num(cx)}" cy="{_num(cy)}" r="4" fill="{color}"/>')

        ly = legend_y + idx * 28
        lines.append(f'<line x1="{legend_x}" y1="{ly}" x2="{legend_x + 26}" y2="{ly}" stroke="{color}" stroke-width="3"/>')
        lines.append(
            f'<text x="{legend_x + 34}" y="{ly + 5}" text-anchor="start" font-size="14" '
            f'font-family="Arial">{escape(label)}</text>'
        )

    mid_y = (plot_top + plot_bottom) / 2
    lines.append(
        f'<text x="{_num((plot_left + plot_right) / 2)}" y="{HEIGHT - 25}" text-anchor="middle" font-size="16" '
        f'font-family="Arial">{escape(x_label)}</text>'
    )
    lines.append(
        f'<text x="28" y="{_num(mid_y)}" text-anchor="middle" font-size="16" font-family="Arial" '
        f'transform="rotate(-90 28 {_num(mid_y)})">{escape(y_label)}</text>'
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _heat_color(value: float) -> str:
    """Blue (-100) through white (0) to red (+100)."""
    t = max(-1.0, min(1.0, value / 100.0))
    if t >= 0:
        r, g, b = 255, round(255 * (1 - t)), round(255 * (1 - t))
    else:
        r, g, b = round(255 * (1 + t)), round(255 * (1 + t)), 255
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap(title: str, labels: Sequence[str], values: Sequence[Sequence[float]], cell: int = 48) -> str:
    """Square matrix heatmap with the (integer) value printed in each cell."""
    k = len(labels)
    left, top = 180, 190
    width, height = left + k * cell + 40, top + k * cell + 40
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="{_num(width / 2)}" y="32" text-anchor="middle" font-size="20" font-family="Arial">{escape(title)}</text>',
    ]
    for i, label in enumerate(labels):
        cy = top + i * cell + cell / 2
        cx = left + i * cell + cell / 2
        lines.append(
            f'<text x="{left - 8}" y="{_num(cy + 4)}" text-anchor="end" font-size="12" font-family="Arial">{escape(label)}</text>'
        )
        lines.append(
            f'<text x="{_num(cx)}" y="{top - 8}" text-anchor="start" font-size="12" font-family="Arial" '
            f'transform="rotate(-60 {_num(cx)} {top - 8})">{escape(label)}</text>'
        )
    for i in range(k):
        for j in range(k):
            value = float(values[i][j])
            x, y = left + j * cell, top + i * cell
            lines.append(
                f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{_heat_color(value)}" stroke="#ffffff"/>'
            )
            lines.append(
                f'<text x="{_num(x + cell / 2)}" y="{_num(y + cell / 2 + 4)}" text-anchor="middle" font-size="12" '
                f'font-family="Arial">{round(value)}</text>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

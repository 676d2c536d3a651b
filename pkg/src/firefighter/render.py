"""Static boards and summary tables for grid runs.

Output is a pure function of the run history, so identical runs render to
identical bytes.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from xml.sax.saxutils import escape

from .grid import Coord, GridTopology
from .protocol import OutbreakState, ProtocolOutcome, RULES

FORMATS = ("ascii", "svg")
_STEP_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _step_char(t: int) -> str:
    return _STEP_CHARS[t] if t < len(_STEP_CHARS) else "+"


def _as_state(obj: OutbreakState | ProtocolOutcome) -> OutbreakState:
    return obj.final if isinstance(obj, ProtocolOutcome) else obj


def _cells(state: OutbreakState) -> tuple[dict[Coord, int], dict[Coord, int], list[Coord]]:
    return dict(state.infected_at), dict(state.vaccinated_at), sorted(state.frontier)


def render_board(obj: OutbreakState | ProtocolOutcome, fmt: str = "ascii") -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; known: {', '.join(FORMATS)}")
    state = _as_state(obj)
    if fmt == "svg":
        return _svg(state)
    if state.topo.name == "pentagonal":
        return _listing(state)
    return _ascii(state)


def _header(state: OutbreakState) -> list[str]:
    inf, vac, front = _cells(state)
    return [
        f"# {state.topo.name} grid, t={state.t}, budget {state.n_vaccines}",
        f"# infected {len(inf)}, vaccinated {len(vac)}, frontier {len(front)}",
        "# legend: iN infected at step N, vN vaccinated at step N, ?? frontier, . susceptible",
    ]


def _ascii(state: OutbreakState) -> str:
    inf, vac, front = _cells(state)
    pts = list(inf) + list(vac) + front
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    lines = _header(state)
    frontier = set(front)
    for y in range(max(ys) + 1, min(ys) - 2, -1):
        row = []
        for x in range(min(xs) - 1, max(xs) + 2):
            c = (x, y)
            if c in inf:
                row.append("i" + _step_char(inf[c]))
            elif c in vac:
                row.append("v" + _step_char(vac[c]))
            elif c in frontier:
                row.append("??")
            else:
                row.append(" .")
        lines.append(f"{y:>4} " + " ".join(row))
    xs_axis = range(min(xs) - 1, max(xs) + 2)
    lines.append("     " + " ".join(f"{x:>2}" for x in xs_axis))
    return "\n".join(lines) + "\n"


def _listing(state: OutbreakState) -> str:
    inf, vac, front = _cells(state)
    lines = _header(state)
    lines.append("# no character grid for this topology; cells listed by step")
    for label, table in (("infected", inf), ("vaccinated", vac)):
        by_step: dict[int, list[Coord]] = {}
        for c, t in table.items():
            by_step.setdefault(t, []).append(c)
        for t in sorted(by_step):
            cells = " ".join(f"({x},{y})" for x, y in sorted(by_step[t]))
            lines.append(f"{label} t={t}: {cells}")
    if front:
        lines.append("frontier: " + " ".join(f"({x},{y})" for x, y in front))
    return "\n".join(lines) + "\n"


def _embed(topo: GridTopology, c: Coord) -> tuple[float, float]:
    x, y = c
    if topo.name == "triangular":
        return (x - 0.5 * y, y * math.sqrt(3) / 2)
    if topo.name == "pentagonal":
        return (0.6 * x, y)
    return (float(x), float(y))


def _svg(state: OutbreakState) -> str:
    topo = state.topo
    inf, vac, front = _cells(state)
    shown = set(inf) | set(vac) | set(front)
    # one ring of susceptible context around everything shown
    context = {nb for c in shown for nb in topo.neighbors(c)} - shown
    every = sorted(shown | context)
    scale, pad, r = 40, 30, 12
    pos = {c: _embed(topo, c) for c in every}
    min_x = min(p[0] for p in pos.values())
    max_y = max(p[1] for p in pos.values())
    width = (max(p[0] for p in pos.values()) - min_x) * scale + 2 * pad
    height = (max_y - min(p[1] for p in pos.values())) * scale + 2 * pad

    def xy(c: Coord) -> tuple[str, str]:
        px, py = pos[c]
        return f"{(px - min_x) * scale + pad:.2f}", f"{(max_y - py) * scale + pad:.2f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0f}" height="{height:.0f}">',
        f"<title>{escape(topo.name)} grid, t={state.t}, "
        f"{len(inf)} infected, {len(vac)} vaccinated</title>",
        '<g stroke="#999" stroke-width="1">',
    ]
    on_board = set(every)
    for c in every:
        for nb in topo.neighbors(c):
            if nb in on_board and c < nb:
                x1, y1 = xy(c)
                x2, y2 = xy(nb)
                out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")
    frontier = set(front)
    for c in every:
        cx, cy = xy(c)
        if c in inf:
            fill, stroke, label = "#d9534f", "#000", str(inf[c])
        elif c in vac:
            fill, stroke, label = "#428bca", "#000", str(vac[c])
        elif c in frontier:
            fill, stroke, label = "#fff", "#f0ad4e", ""
        else:
            fill, stroke, label = "#fff", "#bbb", ""
        out.append(f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="{fill}" stroke="{stroke}"/>')
        if label:
            out.append(
                f'<text x="{cx}" y="{cy}" dy="4" text-anchor="middle" '
                f'font-family="monospace" font-size="11" fill="#fff">{label}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def report_summary(outcomes: Sequence[ProtocolOutcome]) -> str:
    """One row per branch, then the best and worst (steps, infected)."""
    if not outcomes:
        raise ValueError("report_summary needs at least one outcome")
    header = f"{'branch':<16} {'result':<10} {'steps':>5} {'infected':>8}  rules"
    lines = [header, "-" * len(header)]
    for o in outcomes:
        hist = o.rule_histogram()
        order = list(RULES) + ["forced", "seal", "tie"]
        rules = " ".join(f"{k}:{hist[k]}" for k in order if hist.get(k))
        result = "contained" if o.contained else ("escaped" if o.escaped else "open")
        lines.append(f"{o.branch:<16} {result:<10} {o.steps:>5} {o.infected:>8}  {rules}")
    keys = sorted(o.key for o in outcomes if o.contained)
    if keys:
        lines.append(f"min: steps={keys[0][0]} infected={keys[0][1]}")
        lines.append(f"max: steps={keys[-1][0]} infected={keys[-1][1]}")
    else:
        lines.append("min: none contained")
        lines.append("max: none contained")
    return "\n".join(lines) + "\n"

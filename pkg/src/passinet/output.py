"""CSV writers and a minimal SVG line-plot emitter."""

import csv
import io
import math

import numpy as np

__all__ = ["trace_rows", "write_trace_csv", "boundary_rows", "write_boundary_csv", "svg_plot"]


def _fmt(x):
    return format(float(x), ".12g")


def _write(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def trace_rows(trace, N, n, decimate=1):
    header = ["t"]
    header += [f"x_{i}_{j}" for i in range(1, N + 1) for j in range(1, n + 1)]
    header += ["e"] + [f"c_{j}" for j in range(1, n + 1)]
    idx = list(range(0, len(trace.t), max(1, int(decimate))))
    if idx[-1] != len(trace.t) - 1:
        idx.append(len(trace.t) - 1)
    rows = []
    for k in idx:
        row = [_fmt(trace.t[k])] + [_fmt(v) for v in trace.states[k]]
        row += [_fmt(trace.e[k])] + [_fmt(v) for v in trace.c_pred[k]]
        rows.append(row)
    return header, rows


def write_trace_csv(path, trace, N, n, decimate=1):
    """Columns ``t, x_1_1 .. x_N_n, e, c_1 .. c_n``; one row per kept step."""
    return _write(path, *trace_rows(trace, N, n, decimate))


def boundary_rows(btrace):
    first = btrace.samples[0]
    N = first.k_prime.size
    polar = first.polar is not None
    header = [f"kp_{i}" for i in range(1, N + 1)] + ["radius"]
    header += [f"p_{i}" for i in range(1, N + 1)]
    if polar:
        header += ["gamma", "rho"]
    rows = []
    for s in btrace.samples:
        row = [_fmt(v) for v in s.k_prime] + [_fmt(s.radius)] + [_fmt(v) for v in s.point]
        if polar:
            row += [_fmt(s.polar[0]), _fmt(s.polar[1])]
        rows.append(row)
    return header, rows


def write_boundary_csv(path, btrace):
    """Columns ``kp_1 .. kp_N, radius, p_1 .. p_N[, gamma, rho]``."""
    return _write(path, *boundary_rows(btrace))


PALETTE = ["#000000", "#1f4fd1", "#c0392b", "#27ae60", "#8e44ad", "#d35400"]


def _ticks(lo, hi, count=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-12 * step:
        out.append(v)
        v += step
    return out


def svg_plot(series, title="", xlabel="", ylabel="", logy=False, width=640, height=420):
    """Render line series as a standalone SVG document.

    Parameters
    ----------
    series : list of (label, xs, ys) or (label, xs, ys, colour)
    logy : bool
        Plot ``log10(y)``; nonpositive values are dropped.
    """
    left, right, top, bottom = 70, 20, 40, 50
    pw, ph = width - left - right, height - top - bottom
    prepared = []
    for i, s in enumerate(series):
        label, xs, ys = s[0], np.asarray(s[1], float), np.asarray(s[2], float)
        colour = s[3] if len(s) > 3 else PALETTE[i % len(PALETTE)]
        if logy:
            ok = ys > 0
            xs, ys = xs[ok], np.log10(ys[ok])
        ok = np.isfinite(xs) & np.isfinite(ys)
        prepared.append((label, xs[ok], ys[ok], colour))
    allx = np.concatenate([p[1] for p in prepared]) if prepared else np.zeros(1)
    ally = np.concatenate([p[2] for p in prepared]) if prepared else np.zeros(1)
    if allx.size == 0:
        allx = ally = np.zeros(1)
    x0, x1 = float(allx.min()), float(allx.max())
    y0, y1 = float(ally.min()), float(ally.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>',
    ]
    for tx in _ticks(x0, x1):
        out.append(f'<line x1="{px(tx):.2f}" y1="{top + ph}" x2="{px(tx):.2f}" y2="{top + ph + 4}" stroke="#444"/>')
        out.append(f'<text x="{px(tx):.2f}" y="{top + ph + 16}" text-anchor="middle">{tx:g}</text>')
    for ty in _ticks(y0, y1):
        lab = f"1e{ty:g}" if logy else f"{ty:g}"
        out.append(f'<line x1="{left - 4}" y1="{py(ty):.2f}" x2="{left}" y2="{py(ty):.2f}" stroke="#444"/>')
        out.append(f'<text x="{left - 6}" y="{py(ty) + 4:.2f}" text-anchor="end">{lab}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 12}" text-anchor="middle">{xlabel}</text>')
    out.append(
        f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2:.1f})">{ylabel}</text>'
    )
    for i, (label, xs, ys, colour) in enumerate(prepared):
        if xs.size == 0:
            continue
        # thin long traces to at most ~2000 vertices
        stride = max(1, xs.size // 2000)
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs[::stride], ys[::stride]))
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.2" points="{pts}"/>')
        if label:
            ly = top + 14 + 14 * i
            out.append(f'<line x1="{left + pw - 120}" y1="{ly - 4}" x2="{left + pw - 100}" y2="{ly - 4}" stroke="{colour}"/>')
            out.append(f'<text x="{left + pw - 95}" y="{ly}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

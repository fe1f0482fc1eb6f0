"""SVG figures and CSV/JSON tables, written atomically."""

import json
import logging
import math
import os
import tempfile

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.patches import Polygon
import numpy as np

from qvolume.arctic import HEXAGON_VERTICES
from qvolume.config import OUTPUT_CONFIG
from qvolume.sampler import tile_polygons

logger = logging.getLogger(__name__)

# fixed ids and no timestamp so that reruns give the same SVG
plt.rcParams['svg.hashsalt'] = 'qvolume'
plt.rcParams['svg.fonttype'] = 'none'
SVG_METADATA = {'Date': None, 'Creator': 'qvolume'}

TILE_COLORS = {"I": "#ff8000", "II": "#3680b3", "III": "#e31a1c"}


def _float_format():
    return f"%.{OUTPUT_CONFIG['float_digits']}g"


def _atomic(path, write):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.splitext(path)[1])
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            write(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    logger.debug(f"wrote {path}")
    return path


def _plain(value):
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f"{value:.{OUTPUT_CONFIG['float_digits']}g}")
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [_plain(value.real), _plain(value.imag)]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (str, int, bool)) or value is None:
        return value
    return str(value)


def write_json(data, path):
    text = json.dumps(_plain(data), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    return _atomic(path, lambda fh: fh.write(text))


def write_csv(frame, path):
    return _atomic(path, lambda fh: frame.to_csv(fh, index=False, float_format=_float_format(),
                                                 lineterminator="\r\n"))


def save_figure(fig, path):
    def write(fh):
        fig.savefig(fh, format="svg", metadata=SVG_METADATA)

    try:
        return _atomic(path, write)
    finally:
        plt.close(fig)


# =============================================
# figures
# =============================================

def _arc(ax, geo, **style):
    t = np.linspace(-geo.theta, geo.theta, 400)
    ax.plot(geo.radius * np.cos(t), geo.radius * np.sin(t), **style)


def plot_zeros(zero_sets, geo, path):
    """Zeros of P_N for one or several N next to the arc."""
    fig, ax = plt.subplots(figsize=(6, 6))
    _arc(ax, geo, color="black", lw=0.8, label="arc")
    t = np.linspace(-math.pi, math.pi, 400)
    ax.plot(geo.radius * np.cos(t), geo.radius * np.sin(t), color="grey", lw=0.4, ls=":")
    for zero_set in zero_sets:
        z = zero_set.zeros
        ax.scatter(z.real, z.imag, s=8, label=f"N={zero_set.N}")
    ax.set_aspect("equal")
    ax.set_title(f"zeros of P_N, c={geo.c:g}")
    ax.legend(loc="best", fontsize=8)
    return save_figure(fig, path)


def plot_density(profiles, path):
    """Density against the angle for a {c: frame} mapping."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for c, frame in sorted(profiles.items()):
        ax.plot(frame["theta"], frame["density"], label=f"c={c:g}")
    ax.set_xlabel("theta")
    ax.set_ylabel("density")
    ax.grid(True, ls=":", alpha=0.4)
    ax.legend(loc="best", fontsize=8)
    return save_figure(fig, path)


def _hexagon(ax):
    xs, ys = zip(*(HEXAGON_VERTICES + HEXAGON_VERTICES[:1]))
    ax.plot(xs, ys, color="black", lw=0.8)


def plot_arctic(frame, c, path, ellipse=False):
    """Arctic curve samples over the hexagon, optionally with the c -> 0 ellipse."""
    fig, ax = plt.subplots(figsize=(6, 6))
    _hexagon(ax)
    inflections = frame["curvature"].to_numpy()
    ax.plot(frame["xi"], frame["eta"], color="#1f77b4", lw=1.0, label=f"c={c:g}")
    flips = np.flatnonzero(np.diff(np.sign(inflections)) != 0)
    if flips.size:
        ax.scatter(frame["xi"].iloc[flips], frame["eta"].iloc[flips], color="red", s=12,
                   label="inflection")
    if ellipse:
        t = np.linspace(0.0, 2.0 * math.pi, 400)
        # 4 xi^2 - 4 xi eta + 4 eta^2 = 3 along its principal axes
        u = math.sqrt(3.0 / 2.0) * np.cos(t)
        v = math.sqrt(3.0 / 6.0) * np.sin(t)
        ax.plot((u - v) / math.sqrt(2.0), (u + v) / math.sqrt(2.0), color="grey", ls="--",
                lw=0.8, label="ellipse")
    ax.set_aspect("equal")
    ax.set_xlabel("xi")
    ax.set_ylabel("eta")
    ax.legend(loc="best", fontsize=8)
    return save_figure(fig, path)


def plot_level_sets(traces, s, geo, path):
    fig, ax = plt.subplots(figsize=(6, 6))
    _arc(ax, geo, color="black", lw=0.8)
    for trace in traces:
        points = trace["points"]
        ax.plot(points.real, points.imag, lw=1.0, label=trace["status"])
        ax.plot(points.real, -points.imag, lw=0.6, ls="--", color="grey")
    ax.axhline(0.0, color="grey", lw=0.4)
    ax.scatter([s], [0.0], color="red", s=12)
    ax.set_aspect("equal")
    ax.legend(loc="best", fontsize=8)
    return save_figure(fig, path)


def plot_tiling(partition, path, frame="symmetric"):
    """Lozenges of one plane partition, three fill classes."""
    fig, ax = plt.subplots(figsize=(6, 6))
    for name, polygons in tile_polygons(partition, frame).items():
        for corners in polygons:
            ax.add_patch(Polygon(corners, closed=True, facecolor=TILE_COLORS[name],
                                 edgecolor="black", lw=0.2))
    ax.autoscale_view()
    ax.set_aspect("equal")
    ax.set_axis_off()
    return save_figure(fig, path)

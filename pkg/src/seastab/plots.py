"""Figure rendering and standalone plot-script emission.

Report paths render matplotlib figures (Agg backend) next to the delimited
output; `emit_plot_script` additionally writes small self-contained scripts
that re-draw the same figures from the emitted CSVs, so the artifacts remain
reproducible without this package installed.
"""

from __future__ import annotations

import math
import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .stability import INSTABILITY_POINT, GammaCurve  # noqa: E402

__all__ = [
    "emit_plot_script",
    "plot_curves",
    "plot_scatter",
]


def plot_curves(curves: list[GammaCurve], path: str | Path,
                title: str = "") -> Path:
    """Render instability curves on the complex plane with the 1/4pi marker."""
    fig, ax = plt.subplots(figsize=(6, 5))
    for curve in curves:
        ax.plot(curve.z.real, curve.z.imag, lw=1.0, label=f"X={curve.x:g}")
    ax.plot([INSTABILITY_POINT], [0.0], "ro", ms=6, zorder=5,
            label=r"$1/4\pi$")
    ax.axhline(0.0, color="0.7", lw=0.5)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title)
    if len(curves) <= 8:
        ax.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_scatter(x, y, xlabel: str, ylabel: str, path: str | Path,
                 loglog: bool = False) -> Path:
    """Scatter plot of two batch columns; log-log for the BFI comparison."""
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(x, y, "k.", ms=8)
    if loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, which="both", lw=0.3, alpha=0.5)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


_CURVE_SCRIPT = """\
#!/usr/bin/env python3
\"\"\"Re-draw {csv_name} (instability curve) from its CSV.\"\"\"
import csv
import math
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

re, im = [], []
with open({csv_name!r}) as fh:
    for row in csv.reader(fh):
        if not row or row[0].startswith("#") or row[0] == "t":
            continue
        re.append(float(row[1]))
        im.append(float(row[2]))
fig, ax = plt.subplots(figsize=(6, 5))
ax.plot(re, im, lw=1.0)
ax.plot([1.0 / (4.0 * math.pi)], [0.0], "ro", ms=6)
ax.set_xlabel("Re")
ax.set_ylabel("Im")
fig.tight_layout()
fig.savefig({png_name!r}, dpi=150)
"""

_SCATTER_SCRIPT = """\
#!/usr/bin/env python3
\"\"\"Re-draw {csv_name} (scatter) from its CSV.\"\"\"
import csv
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

xs, ys = [], []
with open({csv_name!r}) as fh:
    rows = list(csv.reader(fh))
xlabel, ylabel = rows[0][1], rows[0][2]
for row in rows[1:]:
    xs.append(float(row[1]))
    ys.append(float(row[2]))
fig, ax = plt.subplots(figsize=(5, 5))
ax.plot(xs, ys, "k.", ms=8)
if {loglog!r}:
    ax.set_xscale("log")
    ax.set_yscale("log")
ax.set_xlabel(xlabel)
ax.set_ylabel(ylabel)
ax.grid(True, which="both", lw=0.3, alpha=0.5)
fig.tight_layout()
fig.savefig({png_name!r}, dpi=150)
"""


def emit_plot_script(csv_paths: list[str | Path], out_dir: str | Path) -> list[Path]:
    """Write one standalone plotting script per emitted CSV.

    Curve CSVs (t,re,im) get a complex-plane script marking (1/4pi, 0);
    scatter CSVs get a scatter script, log-log when BFI is one of the axes.
    An empty input list produces no scripts and a warning.
    """
    if not csv_paths:
        warnings.warn("no CSVs given; no plot scripts emitted", stacklevel=2)
        return []
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    scripts = []
    for csv_path in csv_paths:
        csv_path = Path(csv_path)
        header = csv_path.read_text().splitlines()[0]
        is_curve = header.startswith("#") or header.startswith("t,")
        stem = csv_path.stem
        png_name = stem + ".png"
        if is_curve:
            body = _CURVE_SCRIPT.format(csv_name=csv_path.name, png_name=png_name)
        else:
            loglog = "bfi" in header.lower()
            body = _SCATTER_SCRIPT.format(csv_name=csv_path.name,
                                          png_name=png_name, loglog=loglog)
        script = out_dir / f"plot_{stem}.py"
        script.write_text(body)
        scripts.append(script)
    return scripts

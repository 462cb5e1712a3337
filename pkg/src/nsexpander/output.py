"""
Profile CSV, JSON summary and SVG plots.

Every file is written to a temporary sibling and renamed into place, so a
reader never sees a partial file.  Data files carry no timestamps: equal
inputs give byte-identical outputs.
"""

from __future__ import annotations

import io
import json
import math
import os
import tempfile
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .core import SMOOTH, vacuum_exponent
from .grid import RadialGrid
from .picard import Profile

CSV_HEADER = "r,P,U,Theta,dU,dTheta"
SCHEMA_VERSION = 1


def atomic_write(path, data: str | bytes) -> None:
    """Write ``data`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        kw = {} if mode == "wb" else {"newline": "\n", "encoding": "utf-8"}
        with os.fdopen(fd, mode, **kw) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def profile_csv_text(profile: Profile) -> str:
    cols = np.column_stack([profile.r, profile.P, profile.U, profile.Theta,
                            profile.dU, profile.dTheta])
    buf = io.StringIO()
    np.savetxt(buf, cols, fmt="%.17g", delimiter=",", header=CSV_HEADER,
               comments="", newline="\n")
    return buf.getvalue()


def emit_profile_csv(profile: Profile, path) -> None:
    """One row per node, 17 significant digits, LF line endings."""
    atomic_write(path, profile_csv_text(profile))


def read_profile_csv(path, template: Profile) -> Profile:
    """Load a CSV written by :func:`emit_profile_csv`.

    ``template`` supplies case, boundary data and parameters; the grid is
    rebuilt from the stored nodes (its anchor is looked up by value).
    """
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected header {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    r = data[:, 0]
    anchor = template.grid.anchor_index
    if anchor is not None:
        hits = np.flatnonzero(r == template.grid.nodes[anchor])
        anchor = int(hits[0]) if hits.size else None
    grid = RadialGrid(r, template.grid.kind, anchor)
    return Profile(grid, data[:, 1], data[:, 2], data[:, 3], data[:, 4], data[:, 5],
                   template.case, template.boundary, template.params)


def _clean(x):
    """Plain JSON types; non-finite floats become null."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def build_summary(profile: Profile, trace, residual, bootstrap, bounds, asym, comparison) -> dict:
    """Assemble the versioned summary object (see :func:`emit_summary_json`)."""
    g = profile.grid
    return _clean({
        "schema": SCHEMA_VERSION,
        "case": profile.case,
        "params": asdict(profile.params),
        "boundary": asdict(profile.boundary),
        "grid": {"kind": g.kind, "n_cells": len(g) - 1, "r_min": g.r_min,
                 "r_max": g.r_max, "max_spacing": residual.max_spacing,
                 "anchor_index": g.anchor_index},
        "iterations": trace.iterations,
        "contraction_ratios": trace.ratios,
        "residual_norms": {"sup": residual.sup(), "l2": residual.l2()},
        "bootstrap_max_Z": bootstrap.max_Z,
        "asymptotics": {
            "P_inf": asym.P_inf, "U_inf": asym.U_inf, "Theta_inf": asym.Theta_inf,
            "leading_order_deviation": comparison.deviation,
            "P_increment": asym.P_increment,
            "fit_window": list(asym.window),
        },
        "bound_constants": {**bounds.constants, "flags": bounds.flags,
                            "characteristic_margin": bounds.characteristic_margin},
    })


def summary_json_text(summary: dict) -> str:
    return json.dumps(summary, indent=2, allow_nan=False) + "\n"


def emit_summary_json(summary: dict, path) -> None:
    atomic_write(path, summary_json_text(summary))


def emit_plots_svg(profile: Profile, directory, asym=None) -> list[Path]:
    """Write the profile and tail plots as SVG; return the paths written.

    Files: ``P.svg``, ``U.svg``, ``Theta.svg``, ``tail_rU.svg``,
    ``tail_r2Theta.svg`` and, for the cavitating case, ``P_loglog.svg``
    with the vacuum power law as a reference line.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    r = profile.r
    written = []

    def save(fig, name):
        buf = io.BytesIO()
        with matplotlib.rc_context({"svg.hashsalt": "nsexpander", "svg.fonttype": "path"}):
            fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
        path = directory / name
        atomic_write(path, buf.getvalue())
        written.append(path)

    for name, y, label in (("P", profile.P, "P"), ("U", profile.U, "U"),
                           ("Theta", profile.Theta, r"$\Theta$")):
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(r, y, lw=1.2)
        ax.set_xlabel("r")
        ax.set_ylabel(label)
        ax.grid(alpha=0.3)
        save(fig, f"{name}.svg")

    if profile.case != SMOOTH:
        b = profile.boundary
        beta = vacuum_exponent(b.alpha, profile.params.d)
        near = r <= b.delta
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.loglog(r[near], profile.P[near], lw=1.2, label="P")
        ax.loglog(r[near], b.P_delta * (r[near] / b.delta) ** beta, "--",
                  lw=1.0, label=f"slope {beta:.4g}")
        ax.set_xlabel("r")
        ax.set_ylabel("P")
        ax.legend()
        save(fig, "P_loglog.svg")

    tail = r >= 1.0
    for name, y, label, key in (("tail_rU", r * profile.U, "r U", "U_inf"),
                                ("tail_r2Theta", r * r * profile.Theta, r"$r^2\Theta$", "Theta_inf")):
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(r[tail], y[tail], lw=1.2)
        if asym is not None:
            ax.axhline(getattr(asym, key), color="k", ls=":", lw=1.0, label=key)
            ax.legend()
        ax.set_xlabel("r")
        ax.set_ylabel(label)
        ax.grid(alpha=0.3)
        save(fig, f"{name}.svg")
    return written

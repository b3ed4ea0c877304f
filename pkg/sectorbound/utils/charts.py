from __future__ import annotations

import math
from io import BytesIO
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from sectorbound.services.fov import FovBoundary  # noqa: E402


def _ray(ax, angle: float, length: float, **style) -> None:
    for sign in (1.0, -1.0):
        ax.plot([0.0, length * math.cos(angle)], [0.0, sign * length * math.sin(angle)], **style)


def build_fov_chart(
    boundary: FovBoundary,
    kappa: Optional[float] = None,
    classical: Optional[float] = None,
    theta: Optional[float] = None,
) -> bytes:
    """SVG of the numerical range boundary against the sector rays."""
    points = boundary.points
    closed = np.append(points, points[:1])
    reach = 1.25 * max(float(np.max(np.abs(points))), 1e-12)

    fig, ax = plt.subplots(figsize=(6, 6))
    ax.fill(closed.real, closed.imag, color="#1f77b4", alpha=0.2)
    ax.plot(closed.real, closed.imag, linewidth=1.5, color="#1f77b4", label="numerical range boundary")
    if kappa is not None:
        _ray(ax, kappa, reach, color="#d62728", linewidth=1.5)
        ax.plot([], [], color="#d62728", label=f"sharp angle {kappa:.4f}")
    if classical is not None:
        _ray(ax, classical, reach, color="#7f7f7f", linestyle="--", linewidth=1.2)
        ax.plot([], [], color="#7f7f7f", linestyle="--", label=f"arctan(M/m) {classical:.4f}")
    if theta is not None and theta != kappa:
        _ray(ax, theta, reach, color="#2ca02c", linestyle=":", linewidth=1.2)
        ax.plot([], [], color="#2ca02c", linestyle=":", label=f"checked angle {theta:.4f}")
    ax.plot([0.0], [0.0], marker="o", color="black", markersize=3)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title("Numerical range and sector")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize="small")

    buffer = BytesIO()
    fig.tight_layout()
    fig.savefig(buffer, format="svg")
    plt.close(fig)
    buffer.seek(0)
    return buffer.read()

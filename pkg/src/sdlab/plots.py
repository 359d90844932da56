"""Figure rendering for the report path.

Each renderer takes the same payload dictionary that the CLI prints and
writes a PNG next to the delimited output.  Figures are a convenience view
of the plot-ready data, not part of the deterministic output contract.
"""

from __future__ import annotations

import math


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _log10(decimal_string: str) -> float:
    # decimal strings can carry exponents far outside float range
    s = decimal_string.strip().lower()
    if s in ("0", "-0"):
        return float("-inf")
    mantissa, _, exp = s.partition("e")
    exponent = int(exp) if exp else 0
    return math.log10(abs(float(mantissa))) + exponent


def render_gap_figure(payload: dict, path: str):
    plt = _plt()
    rows = payload["gaps"]
    xs = [row["radius"] for row in rows]
    ys = [_log10(row["gap"]["hi"]) for row in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([math.log10(x) for x in xs], ys, "o-")
    ax.set_xlabel("log10 N")
    ax.set_ylabel("log10 gap(N)")
    ax.set_title(f"small-divisor gap, {payload['slope']}")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_exponent_figure(payload: dict, path: str):
    plt = _plt()
    xs = [math.log10(r) for r in payload["radii"]]
    ys = [-_log10(g["gap"]["hi"]) for g in payload["gaps"]]
    tau = float(payload["tau"])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, ys, "o", label="-log10 gap")
    if len(xs) >= 2:
        x0, x1 = min(xs), max(xs)
        ybar = sum(ys) / len(ys)
        xbar = sum(xs) / len(xs)
        ax.plot(
            [x0, x1],
            [ybar + tau * (x0 - xbar), ybar + tau * (x1 - xbar)],
            "-",
            label=f"fit tau = {tau:.3f}",
        )
    ax.set_xlabel("log10 N")
    ax.set_ylabel("-log10 gap(N)")
    flag = "superpolynomial" if payload["superpolynomial"] else "polynomial"
    ax.set_title(f"gap decay ({flag}), {payload['slope']}")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_blowup_figure(payload: dict, path: str):
    plt = _plt()
    entries = payload["suprema"]
    ps = [e["p"] for e in entries]
    logs = [_log10(e["sup"]) for e in entries]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.stem(ps, logs)
    ax.set_xlabel("exponent p")
    ax.set_ylabel("log10 sup |g_t| over the window")
    ax.set_title("primitive blow-up profile")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_trajectory_figure(payload: dict, path: str):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6, 4))
    by_p: dict[int, list[tuple[float, float]]] = {}
    for row in payload["trajectory"]:
        by_p.setdefault(row["p"], []).append((float(row["t"]), float(row["re"])))
    for p, points in sorted(by_p.items()):
        points.sort()
        ax.plot([t for t, _ in points], [v for _, v in points], label=f"p = {p}")
    ax.set_xlabel("t")
    ax.set_ylabel("primitive coefficient (re)")
    ax.set_title("primitive trajectories")
    if by_p:
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

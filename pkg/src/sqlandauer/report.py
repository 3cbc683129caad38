"""Figure rendering for scenario and sweep records.

Figures are written next to the delimited output. This module is the only
place matplotlib is touched, and it always uses the file-only Agg backend.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def render_sweep_figures(records: list[dict], parameter: str, outdir, stem: str) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    ok = [r for r in records if r.get("status") in ("ok", "failed")]
    if not ok:
        return []
    values = [r["sweep_value"] for r in ok]
    paths = []

    fig, axes = plt.subplots(1, 2, figsize=(10.0, 4.0))
    ax = axes[0]
    ax.plot(values, [r["sigma_quadratic"] for r in ok], "o-", label="quadratic form")
    ax.plot(values, [r["sigma_direct"] for r in ok], "x--", label="heat - entropy")
    ax.set_xlabel(parameter)
    ax.set_ylabel("entropy production (nats)")
    ax.set_title("entropy production, both evaluation paths")
    ax.grid(alpha=0.3)
    ax.legend()
    ax = axes[1]
    ax.plot(values, [r["beta_heat"] for r in ok], "o-", label="beta heat")
    ax.plot(values, [r["entropy_change"] for r in ok], "s-", label="entropy change")
    ax.set_xlabel(parameter)
    ax.set_ylabel("nats")
    ax.set_title("budget components")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    path = outdir / f"{stem}_budget.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ip2 = [r["modes"][0]["iplus_re"] ** 2 + r["modes"][0]["iplus_im"] ** 2 for r in ok]
    im2 = [r["modes"][0]["iminus_re"] ** 2 + r["modes"][0]["iminus_im"] ** 2 for r in ok]
    ax.plot(values, im2, "o-", label="|I-|^2 (rotating)")
    ax.plot(values, ip2, "s-", label="|I+|^2 (counter-rotating)")
    ax.set_xlabel(parameter)
    ax.set_ylabel("response (mode 0)")
    ax.set_title("windowed response integrals")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    path = outdir / f"{stem}_response.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)
    return paths


def render_record_figure(record: dict, outdir, stem: str) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    labels = ["beta heat", "entropy change", "sigma"]
    values = [record["beta_heat"], record["entropy_change"], record["sigma_quadratic"]]
    ax.bar(labels, values, color=["C0", "C1", "C2"], alpha=0.8)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_ylabel("nats")
    ax.set_title(f"{record['scenario']}: second-order budget")
    ax.grid(alpha=0.3, axis="y")
    fig.tight_layout()
    path = outdir / f"{stem}_budget.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths = [path]

    oracle = record.get("oracle")
    if oracle and any(r > 0 for r in oracle["residuals"]):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        lams = [l for l, r in zip(oracle["lambdas"], oracle["residuals"]) if r > 0]
        res = [r for r in oracle["residuals"] if r > 0]
        ax.loglog(lams, res, "o-", label=f"residual (slope {oracle['slope']:.2f})")
        ref = [res[0] * (l / lams[0]) ** 4 for l in lams]
        ax.loglog(lams, ref, "k--", alpha=0.6, label="coupling^4 reference")
        ax.set_xlabel("coupling")
        ax.set_ylabel("|exact - perturbative| population shift")
        ax.grid(alpha=0.3, which="both")
        ax.legend()
        fig.tight_layout()
        path = outdir / f"{stem}_scaling.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths

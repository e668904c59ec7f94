"""Tab-delimited text summaries and matplotlib figures rendered from certificate JSON."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path


def _mid(x: dict) -> float:
    # plotting only; certification never goes through floats
    return float(Fraction(x["mid"]))


def _rad(x: dict) -> float:
    return float(Fraction(x["rad"]))


def _fmt(x: dict, digits: int = 12) -> str:
    return f"{x['mid'][:digits + 3]} +- {float(Fraction(x['rad'])):.1e}"


def text_rows(cert: dict) -> list[tuple[str, ...]]:
    rows = [("field", cert.get("field") or "-"), ("command", cert["command"]["name"]), ("verdict", cert["verdict"])]
    res = cert.get("result") or {}
    name = cert["command"]["name"]
    if name == "info":
        for k in ("degree", "N", "signature", "group", "totally_real"):
            rows.append((k, str(res[k])))
        for p in res["places"]:
            rows.append(("place", str(p["index"]), p["kind"], p["root"]))
        if "regulator" in res:
            rows.append(("regulator", _fmt(res["regulator"]["standard"])))
    elif name == "special":
        rows.append(("beta", res["beta_display"]))
        rows.append(("place", str(res["place_index"])))
        rows.append(("xi", ",".join(map(str, res["xi"]))))
        for s in res["sign_checks"]:
            rows.append(("log|beta|_w", str(s["place"]), s["sign"], _fmt(s["log"])))
        rows.append(("height", _fmt(res["height"])))
        rows.append(("height_bound", _fmt(res["height_bound"])))
        rows.append(("regulator_B", _fmt(res["index"]["regulator_B"])))
        rows.append(("index_rhs", _fmt(res["index"]["bound"])))
        if "index_relative_to_fixture" in res["index"]:
            rows.append(("index_vs_units", _fmt(res["index"]["index_relative_to_fixture"])))
    elif name == "relative":
        rows.append(("gamma", res["gamma_display"]))
        rows.append(("subfield", res["extension"]["subfield"]))
        rows.append(("R", str(res["extension"]["R"])))
        rows.append(("lambda", ",".join(map(str, res["lambda"]["values"]))))
        rows.append(("norm_torsion_order", str(res["norm_torsion_witness"])))
        rows.append(("height", _fmt(res["height"])))
        rows.append(("bound_l1", _fmt(res["height_bound_l1"])))
        rows.append(("bound_theorem", _fmt(res["height_bound_theorem"])))
        rows.append(("bound_units", _fmt(res["height_bound_fixture"])))
        for n in res.get("notes", []):
            rows.append(("note", n))
    elif name == "verify":
        rows.append(("target", res.get("target", "-")))
    elif name == "selftest":
        for r in res["runs"]:
            rows.append(("run", r["name"], r["verdict"], r.get("detail", "")))
    for c in cert.get("checks", []):
        rows.append(("check", c["name"], c["status"], c.get("detail", "")))
    if "error" in cert:
        rows.append(("error", cert["error"]["type"], cert["error"]["message"]))
    return rows


def render_text(cert: dict) -> str:
    return "".join("\t".join(r) + "\n" for r in text_rows(cert))


def render_figures(cert: dict, outdir: str | Path) -> list[Path]:
    """Write PNG figures for special and relative certificates; returns the paths written."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    res = cert.get("result") or {}
    name = cert["command"]["name"]
    label = cert.get("field") or "field"
    written = []
    if name == "special":
        written.append(_plot_logs(plt, res, outdir / f"{label}_special_logs.png", label))
        written.append(_plot_matrix(plt, res["matrix"]["matrix"], outdir / f"{label}_minkowski_matrix.png",
                                    f"{label}: log|τ_m⁻¹τ_n(β)| at ŵ"))
    elif name == "relative":
        written.append(_plot_matrix(plt, _relative_logs(res), outdir / f"{label}_relative_conjugates.png",
                                    f"{label}: conjugates of γ over {res['extension']['subfield']}"))
        written.append(_plot_heights(plt, res, outdir / f"{label}_relative_heights.png", label))
    return written


def _plot_logs(plt, res, path, label):
    s = res["sign_checks"]
    xs = [c["place"] for c in s]
    ys = [_mid(c["log"]) for c in s]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(xs, ys, color=["tab:red" if y > 0 else "tab:blue" for y in ys], yerr=[_rad(c["log"]) for c in s])
    ax.axhline(0, color="black", lw=0.8)
    ax.set_xticks(xs)
    ax.set_xlabel("place w")
    ax.set_ylabel("log|β|_w")
    ax.set_title(f"{label}: special unit at place {res['place_index']}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _plot_matrix(plt, rows, path, title):
    data = [[_mid(x) for x in r] for r in rows]
    fig, ax = plt.subplots(figsize=(4.2, 3.6))
    lim = max(abs(v) for r in data for v in r) or 1.0
    im = ax.imshow(data, cmap="RdBu_r", vmin=-lim, vmax=lim)
    for i, r in enumerate(data):
        for j, v in enumerate(r):
            ax.text(j, i, f"{v:.3f}", ha="center", va="center", fontsize=7)
    fig.colorbar(im, ax=ax, shrink=0.8)
    ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _relative_logs(res):
    # rows: places, columns: the certified conjugates; taken from the special-unit matrix layout
    return res["conjugate_logs"]


def _plot_heights(plt, res, path, label):
    names = ["h(γ)", "‖λ‖₁h(base)", "theorem", "unit system"]
    keys = ["height", "height_bound_l1", "height_bound_theorem", "height_bound_fixture"]
    vals = [_mid(res[k]) for k in keys]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.barh(names, vals, color=["tab:green", "tab:gray", "tab:gray", "tab:gray"])
    ax.set_xlabel("height")
    ax.set_title(f"{label}: relative unit height and bounds", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path

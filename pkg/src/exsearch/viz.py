"""Render explanation payloads as horizontal bar charts.

Works off the same wire payloads the service emits: green bars for terms
pushing toward the relevant class, red for the irrelevant class, largest
magnitude on top. Used by the CLI report path; the web UI draws its own.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

RELEVANT_COLOR = "#2e9e4f"
IRRELEVANT_COLOR = "#cc3333"


def render_explanation_chart(payload: dict, out_path: str | Path, title: str | None = None) -> Path:
    """Draw one signed bar chart for an explanation or intent payload."""
    entries = payload.get("entries", [])
    terms = [e["term"] for e in entries]
    weights = [e["weight"] for e in entries]
    colors = [RELEVANT_COLOR if w > 0 else IRRELEVANT_COLOR for w in weights]

    height = max(2.0, 0.45 * len(entries) + 1.2)
    fig, ax = plt.subplots(figsize=(7, height))
    positions = range(len(entries))
    ax.barh(positions, weights, color=colors)
    ax.set_yticks(list(positions))
    ax.set_yticklabels(terms)
    ax.invert_yaxis()  # largest |weight| on top
    ax.axvline(0.0, color="#444444", linewidth=0.8)
    ax.set_xlabel("weight (green: relevant, red: irrelevant)")

    if title is None:
        if "doc_id" in payload:
            title = f"why {payload['doc_id']} for “{payload['query']}”"
        else:
            title = f"inferred intent of “{payload['query']}”"
    ax.set_title(title)

    footer_bits = [f"converter={payload.get('converter')}", f"seed={payload.get('seed')}"]
    if "fit_r2" in payload:
        footer_bits.append(f"fit_r2={payload['fit_r2']:.3f}")
    if "docs_aggregated" in payload:
        footer_bits.append(f"docs={payload['docs_aggregated']}")
    fig.text(0.99, 0.01, "  ".join(footer_bits), ha="right", va="bottom", fontsize=8, color="#666666")

    fig.tight_layout(rect=(0, 0.03, 1, 1))
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path

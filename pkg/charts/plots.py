"""
Chart builders using Plotly — detection score vs. batch size, and training curves.
"""
from pathlib import Path

import pandas as pd
import plotly.graph_objects as go
from plotly.subplots import make_subplots

# Consistent color scheme
COLORS = {
    "batch": "#3b82f6",         # blue
    "full": "#22c55e",          # green
    "sigma": "#6b7280",         # gray
    "masked_out": "#ef4444",    # red
    "grid": "#e2e8f0",
}

METHOD_LABELS = {
    "batch": "Batchwise mask",
    "full": "Full-dataset mask",
}


def create_detection_chart(summary: pd.DataFrame, metric: str = "f1", title: str | None = None) -> go.Figure:
    """
    Mean detection score per batch size for the batchwise method, with the
    full-dataset score as a horizontal reference line.
    `summary` is the output of engine.get_summary_stats.
    """
    fig = go.Figure()
    if summary.empty:
        return fig

    batch = summary[summary["method"] == "batch"].sort_values("batch_size")
    full = summary[summary["method"] == "full"]

    fig.add_trace(
        go.Scatter(
            x=batch["batch_size"],
            y=batch[metric],
            mode="lines+markers",
            name=METHOD_LABELS["batch"],
            line=dict(color=COLORS["batch"], width=3),
            marker=dict(size=8),
        )
    )

    if not full.empty:
        full_score = float(full[metric].iloc[0])
        # Reference line drawn as a trace so it shows in the legend
        fig.add_trace(
            go.Scatter(
                x=[batch["batch_size"].min(), batch["batch_size"].max()],
                y=[full_score, full_score],
                mode="lines",
                name=METHOD_LABELS["full"],
                line=dict(color=COLORS["full"], width=2, dash="dash"),
            )
        )

    fig.update_layout(
        xaxis=dict(title="Batch size", type="log", gridcolor=COLORS["grid"]),
        yaxis=dict(title=f"Detection {metric}", range=[0, 1.05], gridcolor=COLORS["grid"]),
        title=dict(text=title or "Outlier detection vs. batch size", x=0.5, font=dict(size=16)),
        legend=dict(orientation="h", yanchor="bottom", y=-0.3, xanchor="center", x=0.5),
        plot_bgcolor="white",
        height=450,
        margin=dict(t=60, b=90, l=60, r=30),
    )
    return fig


def create_training_chart(history: pd.DataFrame) -> go.Figure:
    """Sigma threshold and masked-out count per epoch, on twin y axes."""
    fig = make_subplots(specs=[[{"secondary_y": True}]])
    if history.empty:
        return fig

    fig.add_trace(
        go.Scatter(
            x=history["epoch"],
            y=history["masked_out_count"],
            mode="lines",
            name="Masked-out samples",
            line=dict(color=COLORS["masked_out"], width=2),
        ),
        secondary_y=False,
    )
    fig.add_trace(
        go.Scatter(
            x=history["epoch"],
            y=history["sigma"],
            mode="lines",
            name="Sigma threshold",
            line=dict(color=COLORS["sigma"], width=2, dash="dot"),
        ),
        secondary_y=True,
    )

    fig.update_xaxes(title_text="Epoch", gridcolor=COLORS["grid"])
    fig.update_yaxes(title_text="Masked-out samples", secondary_y=False, gridcolor=COLORS["grid"])
    fig.update_yaxes(title_text="Sigma", secondary_y=True)
    fig.update_layout(
        title=dict(text="Inlier mask during training", x=0.5, font=dict(size=16)),
        plot_bgcolor="white",
        height=400,
        margin=dict(t=60, b=40, l=60, r=60),
    )
    return fig


def save_svg(fig: go.Figure, path: str | Path) -> None:
    """Static SVG export (needs the kaleido engine)."""
    fig.write_image(str(path), format="svg")

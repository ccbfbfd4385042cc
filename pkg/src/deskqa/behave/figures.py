"""Failure-rate chart rendered next to an exported report."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .report import TestReport


def render_report_figure(report: TestReport, path: str) -> None:
    """Horizontal bar chart of per-test failure rates, saved to ``path``."""
    labels = [f"{t.name}\n{t.type} / {t.capability}" for t in report.tests]
    rates = [t.failure_rate for t in report.tests]
    height = max(2.0, 0.7 * len(labels) + 1.2)

    fig, ax = plt.subplots(figsize=(7.5, height))
    positions = range(len(labels))
    bars = ax.barh(positions, rates, color="#c0504d", height=0.6)
    ax.set_yticks(positions)
    ax.set_yticklabels(labels, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlim(0, 100)
    ax.set_xlabel("failure rate (%)")
    ax.set_title(f"{report.suite_name} — skill {report.skill_id}")
    for bar, rate in zip(bars, rates):
        ax.text(
            min(rate + 1.5, 97),
            bar.get_y() + bar.get_height() / 2,
            f"{rate:.2f}%",
            va="center",
            fontsize=8,
        )
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

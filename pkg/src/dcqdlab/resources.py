"""Experiment-count bookkeeping for the three characterization schemes.

All counts are exact integers: for n qubits, standard process tomography
needs 4**n input states times 4**n non-commuting measurement settings
each (16**n experimental configurations); ancilla-assisted tomography
with non-separable measurements needs a single input and 4**n + 1
settings; the direct scheme needs 4**n entangled inputs and a single
fixed Bell-type measurement each.
"""

from __future__ import annotations

SCHEMES = ("sqpt", "aapt_nonseparable", "dcqd")


def resource_counts(n: int) -> dict[str, dict[str, int]]:
    """Per-scheme resource counts for an n-qubit map as exact integers.

    Keys per scheme: hilbert_dim (dimension the experiment acts in),
    n_inputs, n_measurements (settings per input) and n_experiments
    (their product).
    """
    if n < 1:
        raise ValueError(f"qubit count must be >= 1, got {n}")
    return {
        "sqpt": {
            "hilbert_dim": 2**n,
            "n_inputs": 4**n,
            "n_measurements": 4**n,
            "n_experiments": 16**n,
        },
        "aapt_nonseparable": {
            "hilbert_dim": 4**n,
            "n_inputs": 1,
            "n_measurements": 4**n + 1,
            "n_experiments": 4**n + 1,
        },
        "dcqd": {
            "hilbert_dim": 4**n,
            "n_inputs": 4**n,
            "n_measurements": 1,
            "n_experiments": 4**n,
        },
    }


def resource_table(n_values) -> list[dict[str, int | str]]:
    """Flat table rows (one per n and scheme) for reporting."""
    rows: list[dict[str, int | str]] = []
    for n in n_values:
        counts = resource_counts(n)
        for scheme in SCHEMES:
            rows.append({"n": n, "scheme": scheme, **counts[scheme]})
    return rows


def format_table(rows) -> str:
    """Fixed-width text rendering of `resource_table` rows."""
    header = ("n", "scheme", "hilbert_dim", "n_inputs", "n_measurements", "n_experiments")
    cells = [header] + [[str(r[k]) for k in header] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = []
    for i, row in enumerate(cells):
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)))
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)

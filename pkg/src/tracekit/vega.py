"""Emit reward-per-episode line graphs as Vega-Lite v5 JSON.

The plotted values are embedded in the document itself, so a graph can
be checked against (or regenerated from) the trace that produced it.
Key order and number formatting are fixed and the output is pure, so the
same input always yields byte-identical JSON, making emitted graphs
content-addressable just like traces.
"""

from __future__ import annotations

import json

from tracekit.errors import DuplicateNameError, EmptySeriesError
from tracekit.traces import FullTrace, episode_reward_sum

SCHEMA_URL = "https://vega.github.io/schema/vega-lite/v5.json"
DESCRIPTION = "Reward per Episode"


def reward_graph(series: list[tuple[str, FullTrace]]) -> str:
    """Build the graph document for one or more named traces.

    Each trace contributes one line: x is the 0-based episode number
    (restarting per series), y is that episode's reward sum, color is
    the series name. Returns JSON text ending in a newline.
    """
    if not series:
        raise EmptySeriesError("at least one (name, trace) series is required")
    names = [name for name, _ in series]
    if len(set(names)) != len(names):
        duplicate = next(n for i, n in enumerate(names) if n in names[:i])
        raise DuplicateNameError(f"duplicate series name {duplicate!r}")

    values = []
    for name, trace in series:
        for episode_index, episode in enumerate(trace.episodes):
            values.append(
                {
                    "Episode": episode_index,
                    "Reward": episode_reward_sum(episode),
                    "env": name,
                }
            )
    document = {
        "$schema": SCHEMA_URL,
        "description": DESCRIPTION,
        "data": {"values": values},
        "mark": "line",
        "encoding": {
            "x": {"field": "Episode", "type": "quantitative"},
            "y": {"field": "Reward", "type": "quantitative"},
            "color": {"field": "env", "type": "nominal"},
        },
    }
    # json.dumps keeps insertion order and renders floats with their
    # shortest round-trip representation.
    return json.dumps(document, allow_nan=False) + "\n"

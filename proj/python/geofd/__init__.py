"""Geolocation-aided full-duplex scheduling simulator."""

import json

from ._geofd import (
    DomainError,
    ParseError,
    ValidationError,
    build_database,
    default_config,
    generate_map,
    resolve_config,
    simulate,
    solve_matching,
    ue_ue_pathloss,
)

__all__ = [
    "DomainError",
    "ParseError",
    "ValidationError",
    "build_database",
    "default_config",
    "generate_map",
    "resolve_config",
    "run",
    "simulate",
    "solve_matching",
    "ue_ue_pathloss",
]


def run(config, trials=None, threads=0):
    """Generates the map, builds the database and simulates; returns parsed results."""
    text = config if isinstance(config, str) else json.dumps(config)
    map_text = generate_map(text)
    db = build_database(text, map_text)
    summary = simulate(text, map_text, db, trials=trials, threads=threads)
    return {"database": json.loads(db), "summary": json.loads(summary)}

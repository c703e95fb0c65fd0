"""Run configuration shared by the library surface and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError


@dataclass(frozen=True)
class RunConfig:
    """Knobs that affect how results are computed and emitted.

    Determinism contract: with a fixed seed, outputs are byte-identical
    across runs and across thread counts.  Work is cut into fixed-size
    chunks (``chunk``) whose boundaries and per-chunk random streams do not
    depend on ``threads``; only the dispatch order does, and every
    reduction is reassembled in chunk order.
    """

    d_max: int = 8
    include_infinite: bool = True
    threshold: int = 1 << 16          # exhaustive counting up to this field size
    threads: int = 1
    seed: int = 0
    chunk: int = 1 << 16              # places per work unit
    table_cap: int = 1 << 24          # largest residue field for the log engine
    out_dir: str = "out"
    fmt: str = "csv"

    def __post_init__(self):
        if self.d_max < 1:
            raise ParseError("d_max must be >= 1")
        if self.threshold < 2:
            raise ParseError("point-count threshold must be >= 2")
        if self.threads < 1:
            raise ParseError("thread count must be >= 1")
        if self.fmt not in ("csv", "json"):
            raise ParseError("format must be csv or json")

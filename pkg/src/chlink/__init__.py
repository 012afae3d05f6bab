"""chlink: ch-diagrams of surface-links, their invariants and move engines."""

__version__ = "0.1.0"

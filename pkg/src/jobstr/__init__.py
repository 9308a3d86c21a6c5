"""Job-title semantic textual relatedness over a skill knowledge graph."""

__version__ = "0.1.0"

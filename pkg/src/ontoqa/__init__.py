"""Ontology-backed domain question answering over a small text corpus."""

__version__ = "0.1.0"

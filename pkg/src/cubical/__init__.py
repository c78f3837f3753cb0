"""Cubical type theory kernel: interval and face lattices, evaluator,
Kan composition, bidirectional checker, and a small proof-language CLI."""

__version__ = "0.1.0"

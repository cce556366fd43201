"""Active annotation toolkit: cluster-driven labelling sessions, a baseline
mode, a simulated-annotator evaluation harness, an HTTP service and a CLI."""

__version__ = "0.1.0"

"""
CLI Module

Provides the tgc command-line interface.
"""

from traffic_graph.cli.main import app, run

__all__ = ["app", "run"]

"""Command-line interface."""
from .app import build_parser, run
from .output import OutputEnvelope, emit

__all__ = ['build_parser', 'run', 'OutputEnvelope', 'emit']

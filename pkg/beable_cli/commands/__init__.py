"""Command modules for the beablectl CLI."""

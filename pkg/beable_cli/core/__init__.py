"""Core modules for the beablectl CLI."""

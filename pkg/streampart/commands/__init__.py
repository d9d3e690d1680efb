"""Command initialization."""

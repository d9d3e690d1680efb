"""Test suite for streampart."""

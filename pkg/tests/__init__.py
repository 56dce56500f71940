"""Unit, property and CLI tests for the gonality package."""

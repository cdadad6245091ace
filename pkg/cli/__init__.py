"""Command-line runner: scenario in, report out."""

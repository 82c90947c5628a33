"""Command line front end and shadow construction helpers."""

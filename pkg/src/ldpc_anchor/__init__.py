"""Anchored LDPC codes: build a code that contains a given word, certify it, use it for PUF keys."""

__version__ = "0.1.0"

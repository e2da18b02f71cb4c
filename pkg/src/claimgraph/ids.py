"""Canonical identifier rules shared by every store."""
from __future__ import annotations


class EmptyNameError(ValueError):
    """Raised when a name has no identifier characters left after cleanup."""


def canonicalize_id(name: str) -> str:
    """Turn a display name into its canonical id.

    Lowercase; every run of whitespace or punctuation between alphanumeric
    characters collapses to a single hyphen; leading and trailing runs are
    dropped. Idempotent: canonical ids pass through unchanged.
    """
    out: list[str] = []
    pending = False
    for ch in name.lower():
        if ch.isalnum():
            if pending and out:
                out.append("-")
            pending = False
            out.append(ch)
        else:
            pending = True
    if not out:
        raise EmptyNameError(f"name {name!r} has no identifier characters")
    return "".join(out)

"""Bits shared by the three concatenated-code schemes."""

from __future__ import annotations

import hashlib
from enum import Enum


class Profile(Enum):
    """Parameter regime for a scheme spec.

    PAPER_ASYMPTOTIC derives every parameter from epsilon by the published
    formulas; DESK lets each one be overridden so the construction fits on a
    desk while the validity checks still run.
    """

    PAPER_ASYMPTOTIC = "PAPER_ASYMPTOTIC"
    DESK = "DESK"


def derive_seed(master: int, *parts) -> int:
    """Stable per-trial seed: hash the master seed with a label path.

    Trials must not share RNG streams, and reports must be reproducible from
    the master seed alone, so each consumer derives its own seed from a
    distinct label sequence.
    """
    h = hashlib.sha256()
    h.update(str(master).encode())
    for p in parts:
        h.update(b"/")
        h.update(str(p).encode())
    return int.from_bytes(h.digest()[:8], "little")

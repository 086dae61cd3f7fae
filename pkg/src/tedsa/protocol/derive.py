"""Non-hardened key derivation.

Every share moves by the same tweak h = H(D || i), so each pair's signing
share moves by its Lagrange weight times h:

    pair {1,2}: 2h and -h
    pair {1,3}: 3h/2 and -h/2
    pair {2,3}: 3h and -2h

and the public key becomes A^i = A + h*B.
"""

from __future__ import annotations

from ..algebra import EdPoint
from .record import PartyRecord


def derive(record: PartyRecord, index: int) -> tuple[PartyRecord, EdPoint]:
    if record.D is None:
        raise ValueError(f"P{record.index} does not hold the shared secret D")
    out = record.derived(index)
    return out, out.public_key

"""Stable derivation of independent 64-bit seed streams.

Hash-based so that child streams do not depend on draw counts elsewhere and
are identical across processes (unlike ``hash()``, which is randomized).
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(base: int, *labels: object) -> int:
    """64-bit seed derived from a base seed and a label path."""
    text = f"{base}|" + "|".join(str(label) for label in labels)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def spawn_rng(base: int, *labels: object) -> random.Random:
    return random.Random(derive_seed(base, *labels))

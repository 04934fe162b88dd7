"""Small shared helpers: stable sub-seeds, a tiny PRNG, file digests, TSV floats."""

from __future__ import annotations

import hashlib

_MASK64 = 0xFFFFFFFFFFFFFFFF


def splitmix64(seed: int):
    """Yield an endless stream of 64-bit integers from the splitmix64 generator.

    splitmix64 is small enough to restate in any language, which is the point:
    permutations driven by it are reproducible from the 64-bit seed alone,
    independent of any library RNG.
    """
    x = seed & _MASK64
    while True:
        x = (x + 0x9E3779B97F4A7C15) & _MASK64
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def subseed(*parts) -> int:
    """Derive a stable 64-bit sub-seed from string/int parts.

    Uses blake2b over the ':'-joined textual parts, so the derivation is
    reproducible across runs and platforms (unlike the builtin ``hash``).
    """
    key = ":".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


def fmt_float(x: float) -> str:
    """Decimal text with 17 significant digits; round-trips any float64."""
    return format(float(x), ".17g")


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()

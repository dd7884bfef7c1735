"""Deterministic sampling helpers (splitmix64 stream)."""

from typing import Iterator, List

_MASK = (1 << 64) - 1


def splitmix64(seed: int) -> Iterator[int]:
    """Endless 64-bit stream; same seed, same stream, on every platform."""
    state = seed & _MASK
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        yield z ^ (z >> 31)


def sample_indices(seed: int, count: int, n: int) -> List[int]:
    """count distinct indices from range(n), in draw order; all of them if count >= n."""
    if n <= 0:
        return []
    if count >= n:
        return list(range(n))
    out: List[int] = []
    seen = set()
    stream = splitmix64(seed)
    while len(out) < count:
        i = next(stream) % n
        if i not in seen:
            seen.add(i)
            out.append(i)
    return out

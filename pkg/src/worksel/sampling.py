"""Deterministic, portable pseudo-random sampling.

The generator is a ChaCha20 keystream (32-byte key, all-zero 16-byte
nonce/counter block) so that any implementation, in any language, that
follows the same byte-level recipe reproduces the exact same selections:

* bounded integers come from rejection sampling on big-endian byte draws;
* subsets come from a partial Fisher-Yates shuffle of the input sequence,
  keeping the first n slots.

Nothing here is a Python ``random`` wrapper; reproducibility across
platforms and processes is the point.
"""

import hashlib

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms

from .errors import InvalidInputError

_CHUNK = 4096


class ChaChaStream:
    """Byte stream generated by ChaCha20 under a fixed 32-byte key."""

    def __init__(self, key):
        if len(key) != 32:
            raise InvalidInputError("ChaCha20 key must be 32 bytes")
        cipher = Cipher(algorithms.ChaCha20(key, b"\x00" * 16), mode=None)
        self._enc = cipher.encryptor()
        self._buf = b""
        self._pos = 0

    def take(self, n):
        """Next ``n`` keystream bytes."""
        out = bytearray()
        while n > 0:
            if self._pos == len(self._buf):
                self._buf = self._enc.update(b"\x00" * _CHUNK)
                self._pos = 0
            grab = min(n, len(self._buf) - self._pos)
            out += self._buf[self._pos : self._pos + grab]
            self._pos += grab
            n -= grab
        return bytes(out)

    def below(self, bound):
        """Uniform integer in [0, bound) via rejection sampling.

        Draws the minimal number of bytes covering ``bound - 1``,
        interprets them big-endian, and rejects draws falling in the
        truncated tail above the largest multiple of ``bound``.
        """
        if bound <= 0:
            raise InvalidInputError("bound must be positive")
        if bound == 1:
            return 0
        nbytes = ((bound - 1).bit_length() + 7) // 8
        span = 256 ** nbytes
        limit = span - span % bound
        while True:
            x = int.from_bytes(self.take(nbytes), "big")
            if x < limit:
                return x % bound


def int_to_key(value, domain=b""):
    """32-byte stream key for a non-negative integer seed value.

    The key is SHA-256 over ``domain`` plus the minimal big-endian encoding
    of ``value`` (zero encodes as the empty string), so arbitrarily large
    seed integers key the stream without truncation.
    """
    if value < 0:
        raise InvalidInputError("seed value must be >= 0")
    enc = value.to_bytes((value.bit_length() + 7) // 8, "big")
    return hashlib.sha256(domain + enc).digest()


def sample_without_replacement(items, n, stream):
    """First ``n`` entries of a Fisher-Yates shuffle of ``items``.

    ``items`` is consumed in the exact order given; the shuffle swaps slot
    i with a uniformly chosen slot in [i, len) for i = 0..n-1, so the
    selection (and its order) is a pure function of the stream.
    """
    items = list(items)
    if not 0 <= n <= len(items):
        raise InvalidInputError(
            "cannot sample %d from %d items" % (n, len(items))
        )
    for i in range(n):
        j = i + stream.below(len(items) - i)
        items[i], items[j] = items[j], items[i]
    return items[:n]


def shuffled(items, stream):
    """Full Fisher-Yates shuffle of ``items`` driven by the stream."""
    return sample_without_replacement(items, len(items), stream)

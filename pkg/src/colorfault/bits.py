"""Fixed-width bit packing for canonical label and oracle encodings.

Label "length" everywhere in this package means the bit count of the canonical
encoding produced with these helpers: ids in ceil(log2 n)-bit fields, colors in
ceil(log2 C)-bit fields, dictionaries as length-prefixed (key, value) pairs
sorted by key.  In-memory object size is never what is measured.
"""

from __future__ import annotations


def width_for(count: int) -> int:
    """Bits needed for values 0..count-1 (0 when count <= 1)."""
    if count <= 1:
        return 0
    return (count - 1).bit_length()


def id_width(n: int) -> int:
    """ceil(log2 n) for n >= 2; 0 for a single id."""
    return width_for(n)


class BitWriter:
    __slots__ = ("_bits", "_value")

    def __init__(self):
        self._bits = 0
        self._value = 0

    def write(self, value: int, width: int) -> "BitWriter":
        if width < 0:
            raise ValueError("negative width")
        if value < 0 or value >> width:
            raise ValueError(f"value {value} does not fit in {width} bits")
        self._value = (self._value << width) | value
        self._bits += width
        return self

    @property
    def bit_length(self) -> int:
        return self._bits

    def to_bytes(self) -> bytes:
        nbytes = (self._bits + 7) // 8
        return (self._value << (nbytes * 8 - self._bits)).to_bytes(nbytes, "big")


class BitReader:
    __slots__ = ("_data", "_pos", "_nbits")

    def __init__(self, data: bytes, nbits: int | None = None):
        self._data = int.from_bytes(data, "big")
        self._nbits = len(data) * 8 if nbits is None else nbits
        # value is left-aligned in the byte string
        self._data >>= len(data) * 8 - self._nbits
        self._pos = 0

    def read(self, width: int) -> int:
        if self._pos + width > self._nbits:
            raise ValueError("bit stream exhausted")
        shift = self._nbits - self._pos - width
        self._pos += width
        return (self._data >> shift) & ((1 << width) - 1) if width else 0

    @property
    def remaining(self) -> int:
        return self._nbits - self._pos

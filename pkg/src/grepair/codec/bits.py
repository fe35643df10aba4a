"""Bit streams and Elias-delta codes."""
from __future__ import annotations


class CodecError(ValueError):
    pass


class TruncatedError(CodecError):
    pass


class MalformedError(CodecError):
    pass


class BitWriter:
    def __init__(self):
        self.bits: list[int] = []

    def __len__(self) -> int:
        return len(self.bits)

    def bit(self, b: int | bool) -> None:
        self.bits.append(1 if b else 0)

    def extend(self, bits) -> None:
        self.bits.extend(1 if b else 0 for b in bits)

    def fixed(self, value: int, width: int) -> None:
        if value < 0 or value >= (1 << width) and width:
            raise ValueError(f"{value} does not fit in {width} bits")
        for i in range(width - 1, -1, -1):
            self.bits.append((value >> i) & 1)

    def delta(self, n: int) -> None:
        self.bits.extend(delta_bits(n))

    def count(self, n: int) -> None:
        """Non-negative count, written as delta(n + 1)."""
        self.delta(n + 1)

    def raw_bytes(self, data: bytes) -> None:
        self.count(len(data))
        for byte in data:
            self.fixed(byte, 8)

    def to_bytes(self) -> bytes:
        out = bytearray()
        for i in range(0, len(self.bits), 8):
            chunk = self.bits[i:i + 8]
            chunk += [0] * (8 - len(chunk))
            v = 0
            for b in chunk:
                v = (v << 1) | b
            out.append(v)
        return bytes(out)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


class BitReader:
    def __init__(self, data: bytes | str | list[int], nbits: int | None = None):
        if isinstance(data, str):
            self.bits = [int(c) for c in data]
        elif isinstance(data, (bytes, bytearray)):
            self.bits = [(byte >> (7 - i)) & 1 for byte in data for i in range(8)]
        else:
            self.bits = list(data)
        if nbits is not None:
            if nbits > len(self.bits):
                raise TruncatedError("bit stream shorter than declared")
            self.bits = self.bits[:nbits]
        self.pos = 0

    def remaining(self) -> int:
        return len(self.bits) - self.pos

    def bit(self) -> int:
        if self.pos >= len(self.bits):
            raise TruncatedError("unexpected end of bit stream")
        b = self.bits[self.pos]
        self.pos += 1
        return b

    def fixed(self, width: int) -> int:
        v = 0
        for _ in range(width):
            v = (v << 1) | self.bit()
        return v

    def delta(self) -> int:
        zeros = 0
        while self.bit() == 0:
            zeros += 1
            if zeros > 64:
                raise MalformedError("delta code too long")
        length = 1
        for _ in range(zeros):
            length = (length << 1) | self.bit()
        n = 1
        for _ in range(length - 1):
            n = (n << 1) | self.bit()
        return n

    def count(self) -> int:
        return self.delta() - 1

    def raw_bytes(self) -> bytes:
        k = self.count()
        if k > self.remaining() // 8:
            raise TruncatedError("byte string runs past end of stream")
        return bytes(self.fixed(8) for _ in range(k))


def delta_bits(n: int) -> list[int]:
    """Elias-delta code of n >= 1."""
    if n < 1:
        raise ValueError("delta code needs n >= 1")
    length = n.bit_length()
    ll = length.bit_length()
    out = [0] * (ll - 1)
    out += [int(c) for c in bin(length)[2:]]
    out += [int(c) for c in bin(n)[3:]]
    return out


def delta_encode(n: int) -> str:
    return "".join(map(str, delta_bits(n)))


def delta_decode(bits: str) -> int:
    r = BitReader(bits)
    n = r.delta()
    if r.remaining():
        raise MalformedError("trailing bits after delta code")
    return n

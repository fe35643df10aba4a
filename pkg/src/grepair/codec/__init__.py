from .bits import (BitReader, BitWriter, CodecError, MalformedError, TruncatedError,
                   delta_bits, delta_decode, delta_encode)
from .container import (BadMagicError, Container, VersionMismatchError, canonical_start,
                        decode_rules, encode_rules, read_container, write_container)
from .k2tree import K2Tree, k2_encode, k2_from_bits, k2_from_matrix

__all__ = ["BitReader", "BitWriter", "CodecError", "MalformedError", "TruncatedError",
           "delta_bits", "delta_decode", "delta_encode", "BadMagicError", "Container",
           "VersionMismatchError", "canonical_start", "decode_rules", "encode_rules",
           "read_container", "write_container", "K2Tree", "k2_encode", "k2_from_bits",
           "k2_from_matrix"]

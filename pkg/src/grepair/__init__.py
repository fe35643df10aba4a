"""Grammar-based compression of edge-labelled hypergraphs."""
from .hypergraph import Edge, Hypergraph, HypergraphBuilder, size, validate
from .grammar import SLHRGrammar, val
from .compressor import CompressorConfig, compress

__all__ = ["Edge", "Hypergraph", "HypergraphBuilder", "size", "validate",
           "SLHRGrammar", "val", "CompressorConfig", "compress"]
__version__ = "0.1.0"

from .addressing import Addressing, GRep, QueryError, get_g_rep, get_id, neighbors
from .reach import ReachIndex, SkeletonGraph, reachable, skeleton
from .rpq import (NFA, PatternError, ProductGrammar, RPQEngine, flat_rpq_oracle, parse_pattern,
                  product_grammar, regex_to_nfa, rpq_exists, rpq_pair)

__all__ = ["Addressing", "GRep", "QueryError", "get_g_rep", "get_id", "neighbors", "ReachIndex",
           "SkeletonGraph", "reachable", "skeleton", "NFA", "PatternError", "ProductGrammar",
           "RPQEngine", "flat_rpq_oracle", "parse_pattern", "product_grammar", "regex_to_nfa",
           "rpq_exists", "rpq_pair"]

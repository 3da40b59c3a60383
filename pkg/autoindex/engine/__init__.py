from autoindex.engine.compiler import CompiledJoin, compile, optimize_indexes, select_indexes
from autoindex.engine.executor import execute
from autoindex.engine.parser import evaluation_order, parse_program
from autoindex.engine.translator import LoopNest, collect_searches, rewrite_searches, translate

__all__ = [
    "CompiledJoin",
    "LoopNest",
    "collect_searches",
    "compile",
    "evaluation_order",
    "execute",
    "optimize_indexes",
    "parse_program",
    "rewrite_searches",
    "select_indexes",
    "translate",
]

from .ast import SurfaceTerm
from .desugar import ClauseOverlapError, DesugarError, desugar_bwd, desugar_fwd
from .loader import Program, load_program
from .parser import ParseError, parse

__all__ = [
    "SurfaceTerm", "ClauseOverlapError", "DesugarError", "desugar_bwd",
    "desugar_fwd", "Program", "load_program", "ParseError", "parse",
]

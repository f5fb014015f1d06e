"""Boolean circuits, CNF/QDIMACS, SAT and 2QBF solving."""
from .expr import Builder, Expr, VarPool, Cnf, tseitin, evaluate, variables
from .qdimacs import QbfProblem, emit_qdimacs, parse_qdimacs, emit_dimacs, parse_dimacs
from .sat import CdclSolver, PysatSolver, make_solver, sat_solve
from .cegar import Lemma, QbfResult, solve_qbf, solve_by_expansion, SAT, UNSAT, RESOURCE

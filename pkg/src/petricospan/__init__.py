"""Compositional modeling with open Petri nets.

Open nets are cospans of finite sets decorated by Petri nets. They compose
serially by pushout and in parallel by disjoint union, can be assembled
from point-free expressions such as ``(f * g) ; h``, compared structurally,
and compiled to mass-action ODEs solved with fixed-step RK4.
"""

from .compare import ExprDiff, NetDiff, diff_expr, diff_net
from .dynamics import SimConfig, Trajectory, conserves_tokens, simulate, vector_field
from .errors import (
    BoundaryMismatch,
    ExprSyntaxError,
    MarkingMismatch,
    MismatchedBoundary,
    MismatchedSets,
    NonFiniteState,
    ParseError,
    PetriCospanError,
    TooLarge,
    UnboundGenerator,
    UnboundRate,
    ValidationError,
)
from .finset import FinFn, LabeledSet, compose_fn, coproduct, identity_fn, pushout
from .isomorphism import Isomorphism, is_isomorphic
from .modelio import ModelFile, export_dot, load_model, write_csv
from .morphexpr import Compose, Gen, Id, Tensor, evaluate, parse, to_text, typecheck
from .opennet import OpenPetriNet, PetriNet, Transition, compose, identity_open, tensor

__version__ = "0.1.0"

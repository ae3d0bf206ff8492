"""Syntactic presentations of categories, instances and profunctors, with a
bounded equational prover, curried composition, a curry/uncurry bridge, and
bounded-model semantics."""

from .errors import ProfpresError
from .prover import (
    Budget,
    DEFAULT_BUDGET,
    ProofOutcome,
    RewriteSystem,
    Status,
    Theory,
    complete_rewrite_system,
    cross_closure,
    engine_for,
    morphisms_equal,
    normalize,
    prove_path_eq,
    theory_of_category,
)
from .syntax import (
    CatMorphism,
    CatPresentation,
    Diagnostic,
    Equation,
    FunSym,
    Path,
    Sort,
    apply_morphism,
    compose_paths,
    typecheck_path,
    validate_presentation,
)
from .presentations import (
    CrossEquation,
    CrossPath,
    CurriedMorphism,
    CurriedPresentation,
    GenSym,
    InstanceMorphism,
    InstancePresentation,
    ProSym,
    Term,
    TermEquation,
    UncurriedMorphism,
    UncurriedPresentation,
    ValidationReport,
    ValidationStatus,
    build_collage,
    fiber_instance,
    validate_curried,
    validate_curried_morphism,
    validate_morphism,
)
from .compose import (
    associator,
    coherence_cell,
    compose_curried,
    compose_curried_morphisms,
    left_unitor,
    right_unitor,
    tensor,
    unit_presentation,
)
from .bridge import (
    CheckOutcome,
    CheckStatus,
    check_conservative,
    check_nongenerative,
    curry,
    curry_with_report,
    uncurry,
    uncurry_morphism,
)
from .semantics import (
    FiniteCategoryTable,
    IsoReport,
    IsoStatus,
    ProfunctorTable,
    category_table,
    check_mu_iso,
    check_uncurry_iso,
    check_unit_iso,
    coend_compose,
    find_table_iso,
    profunctor_table,
    saturate_theory,
)
from .dsl import Workspace, export_json, parse_workspace, render, render_workspace

__version__ = "0.1.0"

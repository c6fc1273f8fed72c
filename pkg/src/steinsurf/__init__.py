"""steinsurf: index calculus and certified local geometry for real
surfaces in complex surfaces.

Three layers:

* :mod:`steinsurf.invariants` — integer invariants of immersed surface
  classes (Euler characteristics, signed complex-point indices, genus
  bounds) and verdicts about Stein regular neighborhoods.
* :mod:`steinsurf.surgery` — replayable surgery moves (connected sums,
  handle attachments, double point resolutions) and a planner for
  classes in the projective plane.
* :mod:`steinsurf.localgeo` — numeric certificates: winding indices of
  complex points, Levi form positivity sweeps, gradient-flow
  retractions, and patched exhaustion functions.

The :mod:`steinsurf.cli` module ties these together behind a scenario
runner (``steinsurf check/plan/replay/verify-local``).
"""

from . import invariants, localgeo, scenario, surgery
from .certificates import Certificate, Witness
from .errors import (
    GeometryError,
    InfeasibleTargetError,
    InvalidClassError,
    NumericalError,
    ScenarioError,
    SteinsurfError,
    SurgeryError,
)
from .invariants import (
    AmbientDescriptor,
    ImmersionClass,
    IndexReport,
    SurfaceTopology,
    Verdict,
    adjunction_rhs,
    check_adjunction,
    genus_formula,
    lai,
    oriented_class,
    stein_condition,
    unoriented_class,
    validate,
    verdict,
)
from .surgery import (
    NormalForm,
    PlanTarget,
    SurgeryRecipe,
    SurgeryStep,
    attach,
    connected_sum,
    normalize_complex_points,
    plan_cp2,
    replay,
    replay_trace,
    resolve_double_point,
)

__version__ = "0.1.0"

__all__ = [
    "AmbientDescriptor",
    "Certificate",
    "GeometryError",
    "ImmersionClass",
    "IndexReport",
    "InfeasibleTargetError",
    "InvalidClassError",
    "NormalForm",
    "NumericalError",
    "PlanTarget",
    "ScenarioError",
    "SteinsurfError",
    "SurfaceTopology",
    "SurgeryError",
    "SurgeryRecipe",
    "SurgeryStep",
    "Verdict",
    "Witness",
    "adjunction_rhs",
    "attach",
    "check_adjunction",
    "connected_sum",
    "genus_formula",
    "invariants",
    "lai",
    "localgeo",
    "normalize_complex_points",
    "oriented_class",
    "plan_cp2",
    "replay",
    "replay_trace",
    "resolve_double_point",
    "scenario",
    "stein_condition",
    "surgery",
    "unoriented_class",
    "validate",
    "verdict",
    "__version__",
]

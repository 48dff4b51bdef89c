"""evacsim: agent-based simulation of aircraft cabin evacuation.

Passengers climb an exit-proximity floor field over a 0.5 m patch grid,
queue at doors that open 14 s into the emergency, and hesitate at the sill
for a Poisson-distributed door delay. Batches of seeded trials reproduce
the calibration run and the door-delay sweep experiments.
"""

__version__ = "0.1.0"

from .engine import Agent, ExitRecord, SimConfig, SimState, TrialResult, \
    init_trial, move_agent, run_trial, step
from .experiment import (Stats, SweepPoint, run_batch, summarize, sweep,
                         threshold_crossing)
from .field import FloorField, UNWALKABLE, build_field
from .layout import (CabinLayout, ExitGroup, ExitSelection, LayoutError,
                     PatchKind, generate_a380_upper_deck, parse_layout,
                     serialize_layout)
from .stochastic import (AttributeDistributions, make_rng, sample_door_delay,
                         sample_max_speed, sample_poisson, split_seed)

__all__ = [
    "__version__",
    "Agent", "AttributeDistributions", "CabinLayout", "ExitGroup",
    "ExitRecord", "ExitSelection", "FloorField", "LayoutError", "PatchKind",
    "SimConfig", "SimState", "Stats", "SweepPoint", "TrialResult",
    "UNWALKABLE", "build_field", "generate_a380_upper_deck", "init_trial",
    "make_rng", "move_agent", "parse_layout", "run_batch", "run_trial",
    "sample_door_delay", "sample_max_speed", "sample_poisson",
    "serialize_layout", "split_seed", "step", "summarize", "sweep",
    "threshold_crossing",
]

"""Desk-scale simulator for a single-photon, two-detector Michelson-Morley test.

The rotating-interferometer experiment separates a covariant (timeless)
collapse from a time-ordered one tied to a preferred frame. Modules:

- ``spacetime``: events, boosts, interval classes, before-before frames
- ``ether``: drift travel-time differences, rotation phase shift, sidereal geometry
- ``collapse``: detection probabilities, model samplers, no-signaling audit
- ``experiment``: heralded Monte Carlo runs, rotation and sidereal protocols
- ``stats``: Wilson intervals, two-proportion test, power, modulation fit, bootstrap
"""

__version__ = "0.1.0"

from .collapse import (  # noqa: E402
    CollapseModel,
    JointModel,
    Variant,
    detection_probability,
    effective_phase,
    ms_beamsplitter_prediction,
    ms_broken_model,
    no_signaling_audit,
)
from .ether import DriftConfig, Interferometer  # noqa: E402
from .experiment import (  # noqa: E402
    CountTally,
    RunConfig,
    analytic_scan,
    calibrate_device_phase,
    rotation_protocol,
    sidereal_scan,
    simulate_run,
    tally_to_probabilities,
)
from .spacetime import (  # noqa: E402
    InertialFrame,
    SpacetimeEvent,
    classify_interval,
    find_before_before,
)
from .stats import (  # noqa: E402
    bootstrap_ci,
    bootstrap_series,
    fit_series,
    fit_sidereal,
    required_heralds,
    two_proportion_test,
    wilson_interval,
)

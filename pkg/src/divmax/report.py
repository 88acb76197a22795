"""Solver result container shared by every algorithm."""

from dataclasses import dataclass, field

from .graph import FlipSet


@dataclass
class SolverReport:
    """Outcome of one solver run on one instance.

    gain is the quadratic objective x' P x of the returned selection; the
    raw diversity index after flipping is eta_initial + 4 * gain, and the
    normalized value reported in tables is (eta_initial / 4) + gain.
    """

    algorithm: str
    selection: FlipSet
    gain: float
    eta_initial: float
    seed: int = None
    runtime_s: float = 0.0
    bound: float = None          # relaxation/upper bound on the gain, when applicable
    residuals: dict = None       # relaxation constraint residuals, when applicable
    proven: bool = None          # exact solvers: optimality certified
    iterations: int = None
    extra: dict = field(default_factory=dict)

    @property
    def value_raw(self) -> float:
        return self.eta_initial + 4.0 * self.gain

    @property
    def value_normalized(self) -> float:
        return self.eta_initial / 4.0 + self.gain

    @property
    def bound_normalized(self) -> float:
        """Upper bound in table convention (initial index + bound), if any."""
        if self.bound is None:
            return None
        return self.eta_initial / 4.0 + self.bound

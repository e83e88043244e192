"""Mass-action ODE semantics for Petri nets and a fixed-step RK4 solver."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .errors import MarkingMismatch, NonFiniteState, UnboundRate
from .opennet import OpenPetriNet, PetriNet

DEFAULT_STEP = 0.01


def _net(net: PetriNet | OpenPetriNet) -> PetriNet:
    return net.net if isinstance(net, OpenPetriNet) else net


def conserves_tokens(net: PetriNet | OpenPetriNet) -> bool:
    """True iff every transition consumes as many tokens as it produces."""
    return all(
        sum(k for _, k in t.inputs) == sum(k for _, k in t.outputs)
        for t in _net(net).transitions
    )


def _check_rates(net: PetriNet, rates: Mapping[str, float]) -> None:
    missing = [r for r in net.rate_params() if r not in rates]
    if missing:
        raise UnboundRate(missing)


def _marking_vector(net: PetriNet, marking: Mapping[str, float]) -> list[float]:
    missing = [s for s in net.states if s not in marking]
    extra = [s for s in marking if s not in net.states]
    if missing or extra:
        parts = []
        if missing:
            parts.append("missing " + ", ".join(missing))
        if extra:
            parts.append("unknown " + ", ".join(extra))
        raise MarkingMismatch("marking does not cover the net's states: " + "; ".join(parts))
    return [float(marking[s]) for s in net.states]


def mass_action(net: PetriNet | OpenPetriNet, rates: Mapping[str, float]
                ) -> Callable[[Sequence[float]], list[float]]:
    """Compile ``net`` into ``x -> dx/dt`` over the canonical state order.

    Each transition fires at ``rate * prod(x_j ** in_j)`` and moves
    ``out_i - in_i`` tokens into state ``i``.
    """
    net = _net(net)
    _check_rates(net, rates)
    index = {s: i for i, s in enumerate(net.states)}
    n = len(index)
    compiled = []
    for t in net.transitions:
        ins = [(index[s], k) for s, k in t.inputs]
        delta: dict[int, int] = {}
        for s, k in t.inputs:
            delta[index[s]] = delta.get(index[s], 0) - k
        for s, k in t.outputs:
            delta[index[s]] = delta.get(index[s], 0) + k
        stoich = [(i, d) for i, d in delta.items() if d != 0]
        compiled.append((float(rates[t.rate_param]), ins, stoich))

    def rhs(x: Sequence[float]) -> list[float]:
        dx = [0.0] * n
        for k, ins, stoich in compiled:
            flux = k
            for i, mult in ins:
                flux *= x[i] if mult == 1 else x[i] ** mult
            for i, d in stoich:
                dx[i] += d * flux
        return dx

    return rhs


def vector_field(net: PetriNet | OpenPetriNet, rates: Mapping[str, float],
                 marking: Mapping[str, float]) -> dict[str, float]:
    net = _net(net)
    _check_rates(net, rates)
    x = _marking_vector(net, marking)
    return dict(zip(net.states, mass_action(net, rates)(x)))


@dataclass(frozen=True)
class SimConfig:
    t0: float
    t_end: float
    initial: Mapping[str, float]
    rates: Mapping[str, float]
    step: float = DEFAULT_STEP

    def __post_init__(self):
        if not (math.isfinite(self.t0) and math.isfinite(self.t_end)):
            raise ValueError("t0 and t_end must be finite")
        if not self.t_end > self.t0:
            raise ValueError(f"t_end ({self.t_end}) must exceed t0 ({self.t0})")
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ValueError(f"step must be positive, got {self.step}")
        if self.step > self.t_end - self.t0:
            raise ValueError(f"step {self.step} exceeds the interval length {self.t_end - self.t0}")
        for name, value in self.rates.items():
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"rate {name} must be a nonnegative real, got {value}")


@dataclass(frozen=True)
class Trajectory:
    states: tuple[str, ...]
    times: tuple[float, ...]
    values: tuple[tuple[float, ...], ...] = field(repr=False)

    @property
    def steps(self) -> int:
        return len(self.times) - 1

    def final(self) -> dict[str, float]:
        return dict(zip(self.states, self.values[-1]))

    def column(self, state: str) -> list[float]:
        i = self.states.index(state)
        return [row[i] for row in self.values]


def _time_grid(t0: float, t_end: float, h: float) -> list[float]:
    span = t_end - t0
    n = round(span / h)
    if n >= 1 and abs(n * h - span) <= 1e-9 * span:
        # h divides the interval up to round-off: snap the last point
        return [t0 + k * h for k in range(n)] + [t_end]
    n = math.floor(span / h)
    return [t0 + k * h for k in range(n + 1)] + [t_end]


def rk4_step(f: Callable[[Sequence[float]], list[float]], x: Sequence[float], h: float) -> list[float]:
    k1 = f(x)
    k2 = f([xi + 0.5 * h * ki for xi, ki in zip(x, k1)])
    k3 = f([xi + 0.5 * h * ki for xi, ki in zip(x, k2)])
    k4 = f([xi + h * ki for xi, ki in zip(x, k3)])
    return [
        xi + (h / 6.0) * (a + 2.0 * b + 2.0 * c + d)
        for xi, a, b, c, d in zip(x, k1, k2, k3, k4)
    ]


def simulate(net: PetriNet | OpenPetriNet, cfg: SimConfig) -> Trajectory:
    """Integrate the mass-action ODEs with classical fixed-step RK4.

    Every step is recorded; the final step is shortened to land on
    ``cfg.t_end``. States are never clipped at zero.
    """
    net = _net(net)
    f = mass_action(net, cfg.rates)
    x = _marking_vector(net, cfg.initial)
    times = _time_grid(cfg.t0, cfg.t_end, cfg.step)
    values = [tuple(x)]
    for t_prev, t_next in zip(times, times[1:]):
        try:
            x = rk4_step(f, x, t_next - t_prev)
        except OverflowError:
            raise NonFiniteState(t_next) from None
        if not all(map(math.isfinite, x)):
            raise NonFiniteState(t_next)
        values.append(tuple(x))
    return Trajectory(tuple(net.states), tuple(times), tuple(values))

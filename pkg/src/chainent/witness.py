"""Energy bounds for entanglement classes and the verdicts built on them.

Bound classes:

* ``R2`` -- some neighbouring pair has an entangled reduced state
* ``R3`` -- some neighbouring triple has a genuinely tripartite entangled reduced state
* ``C2`` -- the state is not 1-producible (contains 2-party entanglement)
* ``C3`` -- the state is not 2-producible (contains 3-party entanglement)

Each bound reads ``<H> >= c * J * N``; an energy strictly below it certifies
the class.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

from .hilbert import ChainSpec, Model


class BoundClass(str, enum.Enum):
    R2 = "R2"
    C2 = "C2"
    C3 = "C3"
    R3 = "R3"


CLASSES = (BoundClass.R2, BoundClass.C2, BoundClass.C3, BoundClass.R3)

BOUND_COEFFICIENTS: Mapping[Model, Mapping[BoundClass, float]] = {
    Model.HEISENBERG: {
        BoundClass.R2: -1.0,
        BoundClass.C2: -1.0,
        BoundClass.C3: -1.5,
        BoundClass.R3: -(1 + math.sqrt(5)) / 2,
    },
    Model.XY: {
        BoundClass.R2: -1.0,
        BoundClass.C2: -1.0,
        BoundClass.C3: -9 / 8,
        BoundClass.R3: -(1 + math.sqrt(2)) / 2,
    },
}

WITNESS_BISEPARABLE_BOUND = {
    Model.HEISENBERG: 1 + math.sqrt(5),
    Model.XY: 1 + math.sqrt(2),
}


@dataclass(frozen=True)
class EnergyBound:
    model: Model
    bound_class: BoundClass
    coefficient: float

    def value(self, n_sites: int, J: float = 1.0) -> float:
        return self.coefficient * J * n_sites


def energy_bound(model, bound_class, table=None) -> EnergyBound:
    model, bound_class = Model(model), BoundClass(bound_class)
    table = BOUND_COEFFICIENTS if table is None else table
    return EnergyBound(model, bound_class, table[model][bound_class])


def bound_value(model, bound_class, n_sites: int, J: float = 1.0, table=None) -> float:
    return energy_bound(model, bound_class, table).value(n_sites, J)


@dataclass(frozen=True)
class ClassFlag:
    fired: bool
    margin: float  # (bound - energy) / (J N); positive when fired


@dataclass(frozen=True)
class EntanglementVerdict:
    energy: float
    model: Model
    n_sites: int
    flags: Mapping[BoundClass, ClassFlag]

    def fired(self, bound_class) -> bool:
        return self.flags[BoundClass(bound_class)].fired

    def margin(self, bound_class) -> float:
        return self.flags[BoundClass(bound_class)].margin

    def as_dict(self) -> dict:
        out = {"energy": self.energy}
        for c in CLASSES:
            out[f"fired_{c.value}"] = self.flags[c].fired
            out[f"margin_{c.value}"] = self.flags[c].margin
        return out


def classify(energy: float, spec: ChainSpec, table=None) -> EntanglementVerdict:
    """Flags each class whose bound lies strictly above ``energy``.

    Energies exactly on a bound do not fire: the saturating states belong to
    the class the bound describes.
    """
    scale = spec.J * spec.n_sites
    flags = {}
    for c in CLASSES:
        b = bound_value(spec.model, c, spec.n_sites, spec.J, table)
        flags[c] = ClassFlag(energy < b, (b - energy) / scale)
    return EntanglementVerdict(float(energy), spec.model, spec.n_sites, flags)


def biseparable_witness_bound(model) -> float:
    """Largest |<W_ijk>| reachable by a biseparable three-qubit state."""
    return WITNESS_BISEPARABLE_BOUND[Model(model)]


def witness_verdict(value: float, model) -> bool:
    """True if ``value = <W_ijk>`` certifies genuine tripartite entanglement."""
    return abs(value) > biseparable_witness_bound(model)

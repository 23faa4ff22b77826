"""Observable catalog: names, spectra, joint (compatible) observables.

The registry is built once, frozen, and afterwards consulted read-only by
every other module.  A frozen registry never changes, so all downstream
operations are pure functions of their inputs.

Labels are the primary keys of a spectrum; eigenvalues are optional metadata
and may repeat; degenerate values are allowed because it is label
distinctness that drives the delta reduction in the algebra.  Joint observables carry tuple
labels formed as the Cartesian product of their components' labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import (
    DuplicateComponent,
    DuplicateLabel,
    DuplicateName,
    IndexOutOfRange,
    RegistryFrozen,
    UnknownComponent,
    UnknownLabel,
    UnknownObservable,
    ValueCountMismatch,
)

# A label is a plain string for atomic observables and a tuple of component
# labels for joint observables.
Label = str | tuple[str, ...]


def _as_fraction(value) -> Fraction:
    # Fraction(float) is exact (binary expansion); ints and Fractions pass
    # through unchanged.
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class ObservableDef:
    """A named discrete spectrum.

    ``values`` holds exact rational eigenvalues (or None); ``components`` is
    None for atomic observables and the tuple of component ids for joint ones.
    """

    id: int
    name: str
    labels: tuple[Label, ...]
    values: tuple[Fraction, ...] | None
    components: tuple[int, ...] | None = None

    @property
    def is_joint(self) -> bool:
        return self.components is not None

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True, order=True)
class StateRef:
    """A single outcome: an observable id plus a position in its spectrum."""

    observable: int
    index: int


class Registry:
    """Build-then-freeze catalog of observables.

    Mutators raise :class:`RegistryFrozen` after :meth:`freeze`; queries are
    pure reads and may be used at any time (and concurrently once frozen).
    """

    def __init__(self):
        self._defs: list[ObservableDef] = []
        self._by_name: dict[str, int] = {}
        self._frozen = False

    # -- construction ---------------------------------------------------

    def define_observable(self, name: str, labels: Sequence[str],
                          values: Sequence | None = None) -> ObservableDef:
        """Register an atomic observable with the given spectrum labels and
        optional real eigenvalues (one per label)."""
        self._check_mutable()
        if name in self._by_name:
            raise DuplicateName(f"observable name {name!r} already in use")
        if not labels:
            raise DuplicateLabel(f"observable {name!r} needs at least one label")
        seen = set()
        for lab in labels:
            if lab in seen:
                raise DuplicateLabel(f"label {lab!r} repeated in observable {name!r}")
            seen.add(lab)
        vals: tuple[Fraction, ...] | None = None
        if values is not None:
            if len(values) != len(labels):
                raise ValueCountMismatch(
                    f"observable {name!r}: {len(values)} values for {len(labels)} labels")
            vals = tuple(_as_fraction(v) for v in values)
        obs = ObservableDef(id=len(self._defs), name=name,
                            labels=tuple(labels), values=vals)
        self._defs.append(obs)
        self._by_name[name] = obs.id
        return obs

    def joint_observable(self, name: str,
                         components: Sequence[int | str]) -> ObservableDef:
        """Register a joint observable for a compatible family.

        Labels are the Cartesian product of the components' labels, first
        component varying slowest.  A StateRef into the result denotes one
        joint filtering over all components at once.
        """
        self._check_mutable()
        if name in self._by_name:
            raise DuplicateName(f"observable name {name!r} already in use")
        if len(components) < 2:
            raise UnknownComponent(
                f"joint observable {name!r} needs at least two components")
        ids: list[int] = []
        for comp in components:
            try:
                comp_def = self.observable(comp)
            except UnknownObservable:
                raise UnknownComponent(
                    f"joint observable {name!r}: unknown component {comp!r}") from None
            if comp_def.is_joint:
                raise UnknownComponent(
                    f"joint observable {name!r}: component {comp_def.name!r} "
                    "is itself joint")
            if comp_def.id in ids:
                raise DuplicateComponent(
                    f"joint observable {name!r}: component {comp_def.name!r} repeated")
            ids.append(comp_def.id)
        labels = tuple(product(*(self._defs[i].labels for i in ids)))
        obs = ObservableDef(id=len(self._defs), name=name, labels=labels,
                            values=None, components=tuple(ids))
        self._defs.append(obs)
        self._by_name[name] = obs.id
        return obs

    def freeze(self) -> "Registry":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def _check_mutable(self):
        if self._frozen:
            raise RegistryFrozen("registry is frozen")

    # -- queries ---------------------------------------------------------

    def observable(self, key: int | str | ObservableDef) -> ObservableDef:
        if isinstance(key, ObservableDef):
            key = key.id
        if isinstance(key, str):
            if key not in self._by_name:
                raise UnknownObservable(f"unknown observable {key!r}")
            return self._defs[self._by_name[key]]
        if not isinstance(key, int) or not 0 <= key < len(self._defs):
            raise UnknownObservable(f"unknown observable id {key!r}")
        return self._defs[key]

    def observables(self) -> tuple[ObservableDef, ...]:
        return tuple(self._defs)

    def spectrum(self, key) -> list[tuple[Label, Fraction | None]]:
        """The frozen spectrum in declaration order: (label, value) pairs."""
        obs = self.observable(key)
        if obs.values is None:
            return [(lab, None) for lab in obs.labels]
        return list(zip(obs.labels, obs.values))

    def state(self, key, label: Label) -> StateRef:
        """Resolve an outcome by label."""
        obs = self.observable(key)
        try:
            idx = obs.labels.index(label)
        except ValueError:
            raise UnknownLabel(
                f"observable {obs.name!r} has no label {label!r}") from None
        return StateRef(obs.id, idx)

    def state_at(self, key, index: int) -> StateRef:
        """Resolve an outcome by position in the spectrum."""
        obs = self.observable(key)
        if not 0 <= index < len(obs.labels):
            raise IndexOutOfRange(
                f"index {index} out of range for observable {obs.name!r} "
                f"({len(obs.labels)} labels)")
        return StateRef(obs.id, index)

    def states(self, key) -> list[StateRef]:
        obs = self.observable(key)
        return [StateRef(obs.id, k) for k in range(len(obs.labels))]

    def label_of(self, ref: StateRef) -> Label:
        return self.observable(ref.observable).labels[ref.index]

    def value_of(self, ref: StateRef) -> Fraction | None:
        obs = self.observable(ref.observable)
        return None if obs.values is None else obs.values[ref.index]

    def name_of(self, key) -> str:
        return self.observable(key).name

    def state_text(self, ref: StateRef) -> str:
        """Render a StateRef as ``Name:label`` (joint labels comma-joined)."""
        obs = self.observable(ref.observable)
        label = obs.labels[ref.index]
        if isinstance(label, tuple):
            label = ",".join(label)
        return f"{obs.name}:{label}"

    def __len__(self) -> int:
        return len(self._defs)

    def __contains__(self, key) -> bool:
        try:
            self.observable(key)
            return True
        except UnknownObservable:
            return False

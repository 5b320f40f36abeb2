"""The sweetness-sensor robot: readings, reported equivalence and its intransitivity.

A cup with ``n`` grains yields a sensor reading; two cups are reported
equivalent when their readings differ by at most ``tolerance``.  Readings are
either a deterministic function of ``n`` (midpoint mode) or any value in an
interval around ``n / g`` (possibilistic mode).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

POSSIBILISTIC = "possibilistic"
MIDPOINT = "midpoint"


@dataclass(frozen=True)
class SensorModel:
    granularity: int = 10
    indeterminacy: int = 4
    clamp: bool = True
    mode: str = POSSIBILISTIC
    tolerance: int = 1

    def __post_init__(self):
        if self.granularity < 1:
            raise ValueError("granularity must be at least 1")
        if not 0 <= self.indeterminacy < self.granularity:
            raise ValueError("indeterminacy must lie in [0, granularity)")
        if self.mode not in (POSSIBILISTIC, MIDPOINT):
            raise ValueError(f"unknown sensor mode {self.mode!r}")
        if self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")

    def readings(self, n: int) -> range:
        """All readings a cup of ``n`` grains can produce, as a contiguous range."""
        if n < 0:
            raise ValueError("grain count must be non-negative")
        g = self.granularity
        if self.mode == MIDPOINT:
            return range(n // g, n // g + 1)
        lo = (n - self.indeterminacy) // g
        if self.clamp:
            lo = max(0, lo)
        return range(lo, (n + self.indeterminacy) // g + 1)

    def equivalent(self, r: int, r2: int) -> bool:
        return report_equivalent(r, r2, self.tolerance)


def report_equivalent(r: int, r2: int, tolerance: int = 1) -> bool:
    """Readings within ``tolerance`` of each other are reported indistinguishable."""
    if r < 0 or r2 < 0:
        raise ValueError("readings must be non-negative")
    return abs(r - r2) <= tolerance


def _may(model, a, b):
    return any(model.equivalent(x, y) for x, y in product(model.readings(a), model.readings(b)))


def _must(model, a, b):
    return all(model.equivalent(x, y) for x, y in product(model.readings(a), model.readings(b)))


def intransitivity_witness(model: SensorModel, cap: int = 60, variant: str = "must"):
    """Lexicographically smallest ``(a, b, c)`` in ``[0, cap]`` reported a~b, b~c but not a~c.

    Midpoint readings are unique, so ``variant`` only matters in possibilistic
    mode: ``"must"`` needs the pattern for every choice of readings, ``"may"``
    for some choice of one reading per cup.  Returns ``None`` if no triple
    exists within the cap.
    """
    if variant not in ("may", "must"):
        raise ValueError("variant must be 'may' or 'must'")
    rng = range(cap + 1)
    if variant == "must":
        for a, b, c in product(rng, rng, rng):
            if _must(model, a, b) and _must(model, b, c) and not _may(model, a, c):
                return (a, b, c)
        return None
    for a, b, c in product(rng, rng, rng):
        for x, y, z in product(model.readings(a), model.readings(b), model.readings(c)):
            if model.equivalent(x, y) and model.equivalent(y, z) and not model.equivalent(x, z):
                return (a, b, c)
    return None


def _threshold_upto(model, cap):
    worst = 0  # largest gap at which some reading pair is still within tolerance
    for n in range(cap + 1):
        top = model.readings(n)[-1]
        for m in range(n + 1, cap + 1):
            if model.readings(m)[0] - top <= model.tolerance:
                worst = max(worst, m - n)
    return worst + 1


def inequivalence_threshold(model: SensorModel, cap: int = 200) -> int:
    """Smallest ``k`` such that cups ``k`` or more grains apart are always reported inequivalent.

    Brute force over grain counts in ``[0, cap]``; the value is then
    recomputed over one more sensor period and must not change, since the
    reading pattern repeats with period ``g``.
    """
    if model.mode != POSSIBILISTIC:
        raise ValueError("the threshold is defined for the possibilistic sensor")
    k = _threshold_upto(model, cap)
    if _threshold_upto(model, cap + model.granularity) != k:
        raise ArithmeticError(f"threshold not stable at cap {cap}; raise the cap")
    return k


def single_grain_stable(model: SensorModel, upto: int = 500) -> bool:
    """Cups one grain apart never give readings more than one apart."""
    for n in range(1, upto + 1):
        for r, r2 in product(model.readings(n), model.readings(n - 1)):
            if abs(r - r2) > 1:
                return False
    return True


def reading_equality_transitive(model: SensorModel, upto: int = 60) -> bool:
    """Equality of underlying readings is an equivalence relation on (cup, reading) observations."""
    obs = [(n, r) for n in range(upto + 1) for r in model.readings(n)]
    same = lambda x, y: x[1] == y[1]  # noqa: E731
    for x, y, z in product(obs, repeat=3):
        if same(x, y) and same(y, z) and not same(x, z):
            return False
    return True


def sensor_report(model: SensorModel, table_upto: int = 30, cap: int = 200) -> dict:
    midpoint = SensorModel(model.granularity, model.indeterminacy, model.clamp, MIDPOINT, model.tolerance)
    possibilistic = SensorModel(model.granularity, model.indeterminacy, model.clamp, POSSIBILISTIC, model.tolerance)

    def triple(t):
        return list(t) if t is not None else None

    return {
        "model": {
            "granularity": model.granularity,
            "indeterminacy": model.indeterminacy,
            "clamp": model.clamp,
            "tolerance": model.tolerance,
        },
        "readingsTable": {str(n): list(possibilistic.readings(n)) for n in range(table_upto + 1)},
        "intransitivityTriple": {
            "midpoint": triple(intransitivity_witness(midpoint)),
            "may": triple(intransitivity_witness(possibilistic, variant="may")),
            "must": triple(intransitivity_witness(possibilistic, variant="must")),
        },
        "inequivalenceThreshold": inequivalence_threshold(possibilistic, cap),
        "singleGrainStable": single_grain_stable(possibilistic),
        "readingEqualityTransitive": reading_equality_transitive(possibilistic),
    }

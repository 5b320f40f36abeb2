"""Heights and height estimates: the clarity operator C against ``D1 R1``.

A world ``(t, t')`` pairs an actual height ``t`` with the agent's estimate
``t'``, at most ``alpha/2`` apart.  ``C phi`` holds at ``w`` when ``phi`` holds
at every world whose height is within ``alpha`` of ``w``'s.  Heights and
estimates live on a grid of step ``h``; all arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..checker import Evaluator, agent_independent_in_model
from ..errors import VagueLogicError
from ..formula import Def, Formula, Prop, Report
from ..structures import VagueStructure, World, validate

TALL = Prop("Tall")


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


@dataclass(frozen=True)
class WilliamsonConfig:
    """``[lo, hi]`` is the region of interest; heights extend ``margin`` beyond it.

    With the default margin ``alpha`` every height in ``[lo, hi]`` sees its
    whole ``alpha``-ball on the grid.
    """

    t_star: Fraction = Fraction(170)
    alpha: Fraction = Fraction(2)
    h: Fraction = Fraction(1, 2)
    lo: Fraction = Fraction(166)
    hi: Fraction = Fraction(176)
    margin: Fraction | None = None

    def __post_init__(self):
        for name in ("t_star", "alpha", "h", "lo", "hi"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        margin = self.alpha if self.margin is None else _frac(self.margin)
        object.__setattr__(self, "margin", margin)
        if self.alpha <= 0 or self.h <= 0 or margin < 0:
            raise ValueError("alpha and h must be positive and the margin non-negative")
        if (self.alpha / 2) % self.h:
            raise ValueError(f"grid step {self.h} does not divide alpha/2 = {self.alpha / 2}")
        if self.hi < self.lo:
            raise ValueError("empty height range")
        for name in ("lo", "hi", "margin", "t_star"):
            if getattr(self, name) % self.h:
                raise ValueError(f"{name} = {getattr(self, name)} is not on the grid of step {self.h}")

    @property
    def covers_margins(self) -> bool:
        return self.margin >= self.alpha

    def heights(self):
        return _grid(self.lo - self.margin, self.hi + self.margin, self.h)


def _grid(lo, hi, h):
    out = []
    x = lo
    while x <= hi:
        out.append(x)
        x += h
    return out


def _label(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{float(x):g}"


@dataclass(frozen=True)
class WilliamsonModel:
    config: WilliamsonConfig
    structure: VagueStructure
    points: tuple  # world index -> (t, t')

    def d(self, w, v) -> Fraction:
        """Distance between worlds: difference of actual heights."""
        return abs(self.points[w][0] - self.points[v][0])

    def is_interior(self, w) -> bool:
        heights = self.config.heights()
        t = self.points[w][0]
        return heights[0] + self.config.alpha <= t <= heights[-1] - self.config.alpha


def build_williamson_model(config: WilliamsonConfig | None = None) -> WilliamsonModel:
    config = config or WilliamsonConfig()
    heights = config.heights()
    half = config.alpha / 2
    estimates = _grid(heights[0] - half, heights[-1] + half, config.h)
    points = [(t, e) for t in heights for e in estimates if abs(t - e) <= half]
    t_index = {t: k for k, t in enumerate(heights)}
    e_index = {e: k for k, e in enumerate(estimates)}
    worlds = [World(t_index[t], (e_index[e],)) for t, e in points]
    tall = frozenset(k for k, (t, _) in enumerate(points) if t >= config.t_star)
    M = VagueStructure(
        n=1,
        objective_labels=[_label(t) for t in heights],
        subjective_labels=[[_label(e) for e in estimates]],
        worlds=worlds,
        plausible=[frozenset(range(len(points)))],
        valuation={"Tall": (tall,)},
        objective_props=frozenset({"Tall"}),
    )
    problems = validate(M)
    if problems:
        raise VagueLogicError(f"height model is invalid: {problems[0].message}")
    return WilliamsonModel(config, M, tuple(points))


def c_eval(model: WilliamsonModel, w: int, phi: Formula, ev: Evaluator | None = None) -> bool:
    """``C phi`` at world ``w``: ``phi`` holds at every world within distance ``alpha``."""
    M = model.structure
    if not agent_independent_in_model(M, phi):
        raise VagueLogicError("C is only defined here for agent-independent formulas")
    ev = ev or Evaluator(M)
    truth = ev.truth_masks(phi)[0]
    return all(truth >> v & 1 for v in range(len(M.worlds)) if model.d(w, v) <= model.config.alpha)


@dataclass(frozen=True)
class EquivalenceCheck:
    interior_mismatches: tuple
    boundary_mismatches: tuple
    boundary_worlds: int

    @property
    def ok(self) -> bool:
        return not self.interior_mismatches


def check_c_dr_equivalence(model: WilliamsonModel, phi: Formula = TALL) -> EquivalenceCheck:
    """Compare ``C phi`` with ``D1 R1 phi`` at every world.

    Worlds whose ``alpha``-ball runs off the grid are reported separately.
    """
    ev = Evaluator(model.structure)
    dr = ev.truth_masks(Def(1, Report(1, phi)))[0]
    interior, boundary, n_boundary = [], [], 0
    for w in range(len(model.points)):
        inner = model.is_interior(w)
        n_boundary += not inner
        if c_eval(model, w, phi, ev) != bool(dr >> w & 1):
            (interior if inner else boundary).append(w)
    return EquivalenceCheck(tuple(interior), tuple(boundary), n_boundary)


def dr_threshold_exceptions(model: WilliamsonModel, phi: Formula = TALL):
    """Worlds where ``D1 R1 Tall`` disagrees with ``t >= t* + alpha``, split into interior and boundary."""
    ev = Evaluator(model.structure)
    dr = ev.truth_masks(Def(1, Report(1, phi)))[0]
    cut = model.config.t_star + model.config.alpha
    interior, boundary = [], []
    for w, (t, _) in enumerate(model.points):
        if bool(dr >> w & 1) != (t >= cut):
            (interior if model.is_interior(w) else boundary).append(w)
    return interior, boundary


def set_identity_holds(model: WilliamsonModel) -> bool:
    """For interior heights t, heights within alpha of t are exactly the heights
    of worlds whose estimate is within alpha/2 of t."""
    cfg = model.config
    pts = model.points
    for t in {p[0] for w, p in enumerate(pts) if model.is_interior(w)}:
        near_height = {u for u, _ in pts if abs(t - u) <= cfg.alpha}
        near_estimate = {u for u, e in pts if abs(t - e) <= cfg.alpha / 2}
        if near_height != near_estimate:
            return False
    return True


def metric_report(model: WilliamsonModel) -> dict:
    """Check the metric axioms for ``d``; distinct worlds sharing a height sit at distance 0."""
    n = len(model.points)
    symmetric = all(model.d(a, b) == model.d(b, a) for a in range(n) for b in range(n))
    heights = sorted({t for t, _ in model.points})
    # d depends only on heights, so the triangle inequality reduces to heights.
    triangle = all(abs(x - z) <= abs(x - y) + abs(y - z) for x in heights for y in heights for z in heights)
    zero_pairs = sum(1 for a in range(n) for b in range(n) if a != b and model.d(a, b) == 0)
    return {
        "symmetric": symmetric,
        "triangle": triangle,
        "selfDistanceZero": all(model.d(a, a) == 0 for a in range(n)),
        "distinctWorldsAtZero": zero_pairs,
    }


def williamson_report(model: WilliamsonModel) -> dict:
    eq = check_c_dr_equivalence(model)
    interior, boundary = dr_threshold_exceptions(model)
    cfg = model.config

    def world(w):
        t, e = model.points[w]
        return {"world": w, "height": _label(t), "estimate": _label(e)}

    return {
        "config": {
            "tStar": _label(cfg.t_star),
            "alpha": _label(cfg.alpha),
            "h": _label(cfg.h),
            "lo": _label(cfg.lo),
            "hi": _label(cfg.hi),
            "margin": _label(cfg.margin),
        },
        "worlds": len(model.points),
        "equivalenceOk": eq.ok,
        "equivalenceMismatches": [world(w) for w in eq.interior_mismatches + eq.boundary_mismatches],
        "boundaryWorlds": eq.boundary_worlds,
        "boundaryExceptions": [world(w) for w in boundary],
        "drThreshold": {
            "threshold": _label(cfg.t_star + cfg.alpha),
            "holdsExactlyAbove": not interior,
            "interiorExceptions": [world(w) for w in interior],
        },
        "setIdentity": set_identity_holds(model),
        "metric": metric_report(model),
    }

"""Independent verification: residual checks, the tangent-length oracle and seeded iff fuzzing."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from conway_circles.api.services.conway import (
    ExtensionSpec,
    apply_extensions,
    conway_circle,
    corollary2_extensions,
    theorem1_condition_check,
    theorem1_family,
    theorem2_condition_check,
    theorem2_family,
    theorem3_condition_check,
    theorem3_even_extensions,
)
from conway_circles.api.services.errors import DegenerateInput, InvalidConfig
from conway_circles.api.services.geom_core import (
    DEFAULT_TOLERANCE,
    Point2,
    Tolerance,
    circle_through_three_points,
    distance,
    effective_tolerance,
    fit_circle,
    foot_of_perpendicular,
    rigid_motion,
)
from conway_circles.api.services.reports import CheckReport, make_report
from conway_circles.api.services.tangential import (
    TangentialPolygon,
    build_polygon,
    inradius_from_tangent_lengths,
    validate_tangential,
)

logger = logging.getLogger(__name__)

PARITIES = ("odd", "even", "any")


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 7
    trials: int = 500
    n_range: Tuple[int, int] = (3, 9)
    length_range: Tuple[float, float] = (0.5, 5.0)
    perturbation: float = 1e-2
    parity: str = "odd"
    workers: int = 1
    bit_generator: str = "PCG64"

    def __post_init__(self) -> None:
        lo, hi = self.n_range
        if self.trials < 1:
            raise InvalidConfig("trials must be at least 1", {"trials": self.trials})
        if lo < 3 or lo > hi:
            raise InvalidConfig("n_range must be [lo, hi] with 3 <= lo <= hi", {"n_range": list(self.n_range)})
        if not 0 < self.length_range[0] <= self.length_range[1]:
            raise InvalidConfig("length_range must be positive and non-empty", {"length_range": list(self.length_range)})
        if self.perturbation < 0:
            raise InvalidConfig("perturbation must be non-negative", {"perturbation": self.perturbation})
        if self.parity not in PARITIES:
            raise InvalidConfig("parity must be odd, even or any", {"parity": self.parity})
        if not self.vertex_counts():
            raise InvalidConfig("n_range holds no vertex count of the requested parity", {"n_range": list(self.n_range)})
        if not hasattr(np.random, self.bit_generator):
            raise InvalidConfig("unknown bit generator", {"bit_generator": self.bit_generator})

    def vertex_counts(self) -> List[int]:
        counts = range(self.n_range[0], self.n_range[1] + 1)
        if self.parity == "odd":
            return [n for n in counts if n % 2]
        if self.parity == "even":
            return [n for n in counts if n % 2 == 0]
        return list(counts)

    def trial_generators(self) -> List[np.random.Generator]:
        """One independent stream per trial, split from the seed."""
        bit_generator = getattr(np.random, self.bit_generator)
        return [np.random.Generator(bit_generator(child)) for child in np.random.SeedSequence(self.seed).spawn(self.trials)]


def concyclic_about(
    points: Sequence[Point2], center: Point2, tol: Tolerance = DEFAULT_TOLERANCE
) -> CheckReport:
    """Residual of the circle about `center` through the first point."""
    radius = distance(center, points[0])
    distances = [distance(center, p) for p in points]
    residual = max(abs(d - radius) for d in distances)
    details = [("radius", radius)] + [(f"distance_{k}", d) for k, d in enumerate(distances, start=1)]
    return make_report(residual, effective_tolerance(points, tol), details)


def tangent_length_oracle(
    poly: TangentialPolygon, spec: ExtensionSpec, tol: Tolerance = DEFAULT_TOLERANCE
) -> CheckReport:
    """Spread of |t + x| over all side-ends, with t measured from raw coordinates."""
    endpoints = apply_extensions(poly, spec, tol)
    offsets: List[float] = []
    for i in range(1, poly.n + 1):
        a, b = poly.vertex(i), poly.vertex(i + 1)
        foot = foot_of_perpendicular(poly.incenter, a, b, tol)
        offsets.append(abs(distance(a, foot) + spec.start(i)))
        offsets.append(abs(distance(b, foot) + spec.end(i)))
    spread = max(offsets) - min(offsets)
    details = [("offset_min", min(offsets)), ("offset_max", max(offsets))]
    return make_report(spread, effective_tolerance(endpoints, tol), details)


def reconstruct_circle(
    points: Sequence[Point2], center: Point2, tol: Tolerance = DEFAULT_TOLERANCE
) -> CheckReport:
    """Fit a circle without knowing the center and compare it with `center`."""
    fitted = fit_circle(points)
    offset = distance(fitted.center, center)
    return make_report(offset, effective_tolerance(points, tol), [("fitted_radius", fitted.radius)])


def three_point_reconstruction(
    points: Sequence[Point2], center: Point2, tol: Tolerance = DEFAULT_TOLERANCE
) -> CheckReport:
    """Circumcircle of every non-collinear triple against (center, |center - points[0]|)."""
    radius = distance(center, points[0])
    residual = 0.0
    used = 0
    for p, q, s in combinations(points, 3):
        try:
            circle = circle_through_three_points(p, q, s, tol)
        except DegenerateInput:
            continue
        used += 1
        residual = max(residual, distance(circle.center, center), abs(circle.radius - radius))
    if used == 0:
        raise DegenerateInput("no three of the points span a circle", {"points": len(points)})
    return make_report(residual, effective_tolerance(points, tol), [("radius", radius), ("triples", float(used))])


def rotation_covariance_check(
    poly: TangentialPolygon,
    build_spec: Callable[[TangentialPolygon], ExtensionSpec],
    angle: float,
    shift: Tuple[float, float],
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> CheckReport:
    """Re-ingest the moved polygon, rebuild its spec and compare with the moved endpoints."""
    spec = build_spec(poly)
    expected = rigid_motion(apply_extensions(poly, spec, tol), angle, shift)
    moved = validate_tangential(rigid_motion(list(poly.vertices), angle, shift), tol, poly.labels)
    moved_spec = build_spec(moved)
    actual = apply_extensions(moved, moved_spec, tol)
    endpoint_offset = max(distance(p, q) for p, q in zip(expected, actual))
    incenter_offset = distance(moved.incenter, rigid_motion([poly.incenter], angle, shift)[0])
    radius_change = abs(
        conway_circle(moved, moved_spec, tol).circle.radius - conway_circle(poly, spec, tol).circle.radius
    )
    details = [
        ("endpoint_offset", endpoint_offset),
        ("incenter_offset", incenter_offset),
        ("radius_change", radius_change),
    ]
    residual = max(endpoint_offset, incenter_offset, radius_change)
    return make_report(residual, effective_tolerance(actual, tol), details)


def random_tangential_polygon(config: FuzzConfig, rng: np.random.Generator) -> TangentialPolygon:
    counts = config.vertex_counts()
    n = int(counts[int(rng.integers(len(counts)))])
    lo, hi = config.length_range
    tangent_lengths = rng.uniform(lo, hi, size=n)
    r = inradius_from_tangent_lengths(tangent_lengths)
    return build_polygon(tangent_lengths, r)


def perturb_vertex(spec: ExtensionSpec, vertex: int, delta: float) -> ExtensionSpec:
    """Shift both extensions meeting at `vertex` (1-based) by delta."""
    xs = spec.vertex_values()
    xs[vertex - 1] += delta
    return ExtensionSpec.from_vertex_values(xs)


def perturb_end(spec: ExtensionSpec, end: int, delta: float) -> ExtensionSpec:
    """Shift the single side-end `end` (1-based, in per_end order) by delta."""
    values = list(spec.per_end)
    values[end - 1] += delta
    return ExtensionSpec(tuple(values))


def theorem_spec(poly: TangentialPolygon, rng: np.random.Generator, length_range: Tuple[float, float]) -> Tuple[str, ExtensionSpec]:
    """A theorem-conforming spec whose common offset stays well above the inradius."""
    if poly.n % 2 == 0:
        return "theorem3", theorem3_even_extensions(poly)
    if rng.random() < 0.25:
        return "corollary2", corollary2_extensions(poly)
    x_1 = poly.inradius + rng.uniform(*length_range) - poly.tangent_length(1)
    if poly.n == 3:
        return "theorem1", theorem1_family(poly, x_1)
    return "theorem2", theorem2_family(poly, x_1)


def condition_check(poly: TangentialPolygon, spec: ExtensionSpec, tol: Tolerance = DEFAULT_TOLERANCE) -> CheckReport:
    if poly.n == 3:
        return theorem1_condition_check(poly, spec, tol)
    if poly.n % 2:
        return theorem2_condition_check(poly, spec, tol)
    return theorem3_condition_check(poly, spec, tol)


@dataclass(frozen=True)
class Verdicts:
    condition: bool
    residual: bool
    oracle: bool
    concyclic: bool
    condition_residual: float
    circle_residual: float
    oracle_spread: float

    @property
    def unanimous(self) -> bool:
        return len({self.condition, self.residual, self.oracle, self.concyclic}) == 1

    @property
    def smallest_failing_residual(self) -> float:
        return min(self.condition_residual, self.circle_residual, self.oracle_spread)


def run_checks(poly: TangentialPolygon, spec: ExtensionSpec, tol: Tolerance = DEFAULT_TOLERANCE) -> Verdicts:
    condition = condition_check(poly, spec, tol)
    circle = conway_circle(poly, spec, tol)
    oracle = tangent_length_oracle(poly, spec, tol)
    concyclic = concyclic_about(list(circle.endpoints), poly.incenter, tol)
    return Verdicts(
        condition=condition.passed,
        residual=circle.passed,
        oracle=oracle.passed,
        concyclic=concyclic.passed,
        condition_residual=condition.max_residual,
        circle_residual=circle.max_residual,
        oracle_spread=oracle.max_residual,
    )


@dataclass(frozen=True)
class TrialOutcome:
    index: int
    n: int
    family: str
    positive: Verdicts
    negative: Optional[Verdicts]
    single_end: Optional[Verdicts] = None


@dataclass
class FuzzSummary:
    trials: int
    seed: int
    parity: str
    perturbation: float
    bit_generator: str
    by_n: Dict[str, int] = field(default_factory=dict)
    by_family: Dict[str, int] = field(default_factory=dict)
    positive_passes: int = 0
    negative_failures: int = 0
    single_end_failures: int = 0
    weak_negatives: int = 0
    disagreements: int = 0
    oracle_disagreements: int = 0
    negative_tests_skipped: bool = False
    max_positive_residual: float = 0.0
    min_negative_residual: Optional[float] = None

    @property
    def ok(self) -> bool:
        negatives_ok = self.negative_tests_skipped or (
            self.negative_failures == self.trials and self.single_end_failures == self.trials
        )
        return (
            self.disagreements == 0
            and self.oracle_disagreements == 0
            and self.weak_negatives == 0
            and self.positive_passes == self.trials
            and negatives_ok
        )

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["ok"] = self.ok
        return data


def run_trial(index: int, config: FuzzConfig, rng: np.random.Generator, tol: Tolerance) -> TrialOutcome:
    poly = random_tangential_polygon(config, rng)
    family, spec = theorem_spec(poly, rng, config.length_range)
    positive = run_checks(poly, spec, tol)
    negative = single_end = None
    if config.perturbation > 0:
        vertex = int(rng.integers(1, poly.n + 1))
        sign = 1.0 if rng.random() < 0.5 else -1.0
        negative = run_checks(poly, perturb_vertex(spec, vertex, sign * config.perturbation), tol)
        end = int(rng.integers(1, 2 * poly.n + 1))
        single_end = run_checks(poly, perturb_end(spec, end, sign * config.perturbation), tol)
    return TrialOutcome(index, poly.n, family, positive, negative, single_end)


def _count_negative(summary: FuzzSummary, outcome: TrialOutcome, negative: Verdicts, kind: str, bound: float) -> bool:
    """Record one perturbed run; True when all three checks rejected it."""
    if not negative.unanimous:
        summary.disagreements += 1
        logger.warning("Trial %d (n=%d, %s): %s verdicts disagree: %s", outcome.index, outcome.n, outcome.family, kind, negative)
    if negative.oracle != negative.concyclic:
        summary.oracle_disagreements += 1
    weakest = negative.smallest_failing_residual
    if weakest < bound:
        summary.weak_negatives += 1
    if summary.min_negative_residual is None or weakest < summary.min_negative_residual:
        summary.min_negative_residual = weakest
    return not (negative.condition or negative.residual or negative.oracle)


def _aggregate(config: FuzzConfig, outcomes: Sequence[TrialOutcome]) -> FuzzSummary:
    summary = FuzzSummary(
        trials=config.trials,
        seed=config.seed,
        parity=config.parity,
        perturbation=config.perturbation,
        bit_generator=config.bit_generator,
        negative_tests_skipped=config.perturbation == 0,
    )
    bound = config.perturbation / 4.0
    for outcome in outcomes:
        summary.by_n[str(outcome.n)] = summary.by_n.get(str(outcome.n), 0) + 1
        summary.by_family[outcome.family] = summary.by_family.get(outcome.family, 0) + 1
        positive = outcome.positive
        if not positive.unanimous:
            summary.disagreements += 1
            logger.warning("Trial %d (n=%d, %s): positive verdicts disagree: %s", outcome.index, outcome.n, outcome.family, positive)
        if positive.oracle != positive.concyclic:
            summary.oracle_disagreements += 1
        if positive.condition and positive.residual and positive.oracle:
            summary.positive_passes += 1
        summary.max_positive_residual = max(summary.max_positive_residual, positive.circle_residual)

        if outcome.negative is not None and _count_negative(summary, outcome, outcome.negative, "vertex-shift", bound):
            summary.negative_failures += 1
        if outcome.single_end is not None and _count_negative(summary, outcome, outcome.single_end, "single-end", bound):
            summary.single_end_failures += 1
    return summary


def fuzz_iff(config: FuzzConfig, tol: Tolerance = DEFAULT_TOLERANCE) -> FuzzSummary:
    logger.info(
        "Fuzzing %d trials (seed=%d, parity=%s, n in %s, perturbation=%g, workers=%d)",
        config.trials, config.seed, config.parity, list(config.n_range), config.perturbation, config.workers,
    )
    generators = config.trial_generators()
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        outcomes = list(pool.map(lambda k: run_trial(k, config, generators[k], tol), range(config.trials)))
    summary = _aggregate(config, outcomes)
    logger.info(
        "Fuzz finished: %d/%d positive passes, %d disagreements, %d weak negatives",
        summary.positive_passes, summary.trials, summary.disagreements, summary.weak_negatives,
    )
    return summary


def monotone_sensitivity(
    poly: TangentialPolygon,
    spec: ExtensionSpec,
    vertex: int,
    perturbations: Sequence[float],
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> List[float]:
    """Circle residual after perturbing `vertex` by each value in `perturbations`."""
    return [conway_circle(poly, perturb_vertex(spec, vertex, delta), tol).max_residual for delta in perturbations]

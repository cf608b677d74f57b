"""One analysis run: a RunConfig and a command in, a report document out."""

import logging
from collections.abc import Callable
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from typing import Any

import numpy as np
from tqdm import tqdm

from .bautin import estimate_N_c
from .bautin import maximal_multiplicity
from .cartan import bernstein_doubling_check
from .cartan import find_good_radius
from .cartan import polynomial_min_modulus
from .cartan import replay
from .catalog import Check
from .catalog import get_entry
from .catalog import verify_entry
from .conf import overridden
from .cyclicity import Runner
from .cyclicity import analyze_cyclicity
from .cyclicity import global_row
from .cyclicity import sandwich_row
from .exceptions import AnalysisError
from .exceptions import CertificateNotFoundError
from .exceptions import ConfigurationError
from .exceptions import NoFiniteNError
from .exceptions import RouteMismatchError
from .exceptions import UnstableError
from .families import AnalyticFamily
from .reports import build_report
from .reports import to_tree
from .runconfig import RunConfig
from .runconfig import load_family
from .runconfig import with_regions
from .zero_count import count_zeros_family
from .zero_count import indicator_trace
from .zero_count import multiplicity_at_zero

logger = logging.getLogger(__name__)


@dataclass
class Outcome:
    result: Any = None
    checks: list[Check] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)


def knob_overrides(config: RunConfig) -> dict[str, Any]:
    section = config.knobs
    return {
        "k_max": section.k_max,
        "samples": section.samples,
        "seed": section.seed,
        "relative_tolerance": section.tolerance,
        "degree_cap": section.degree_cap,
    }


def inline_runner(family: AnalyticFamily, progress: bool = False) -> Runner:
    """Sweep rows computed in this process, in job order."""

    def runner(kind: str, params: dict, jobs: Sequence) -> list:
        rows = []
        for lam, r in tqdm(jobs, desc=kind, disable=not progress, leave=False):
            if kind == "sandwich":
                rows.append(sandwich_row(family, lam, r, params["mu"]))
            else:
                rows.append(global_row(family, lam, params["bound"]))
        return rows

    return runner


def _require(arguments: dict, name: str):
    if arguments.get(name) is None:
        raise ConfigurationError(f"Missing argument {name!r}")
    return arguments[name]


def _point(arguments: dict) -> np.ndarray:
    """λ given as numbers or as [re, im] pairs."""
    return np.array([complex(*v) if isinstance(v, list | tuple) else complex(v) for v in _require(arguments, "lam")])


def count_zeros(config: RunConfig, arguments: dict, runner) -> Outcome:
    entry = load_family(config)
    lam, radius = _point(arguments), _require(arguments, "radius")
    return Outcome(count_zeros_family(entry.family, lam, radius, config.knobs.truncation_degree))


def multiplicity(config: RunConfig, arguments: dict, runner) -> Outcome:
    entry = load_family(config)
    lam = _point(arguments)
    radii, degree = config.knobs.radii, config.knobs.truncation_degree
    outcome = Outcome()
    try:
        value = multiplicity_at_zero(entry.family, lam, radii, degree)
        outcome.result = {"value": value, "trace": indicator_trace(entry.family, lam, radii, degree)}
    except UnstableError as e:
        outcome.result = {"value": None, "trace": e.trace}
        outcome.errors.append(str(e))
    return outcome


def estimate_bautin(config: RunConfig, arguments: dict, runner) -> Outcome:
    entry = load_family(config)
    outcome = Outcome()
    try:
        outcome.result = estimate_N_c(entry.family, entry.K, entry.O, entry.U)
    except NoFiniteNError as e:
        outcome.result = {"N": None, "growth_trace": e.trace}
        outcome.errors.append(str(e))
    return outcome


def mu(config: RunConfig, arguments: dict, runner) -> Outcome:
    entry = load_family(config)
    route = arguments.get("route") or config.knobs.route
    outcome = Outcome()
    try:
        result = maximal_multiplicity(entry.family, entry.K, entry.O_sequence, route, entry.U, config.knobs.radii)
    except RouteMismatchError as e:
        outcome.result = {"value": None, "ineq": e.ineq, "growth": e.growth}
        outcome.errors.append(str(e))
        return outcome
    outcome.result = result
    if entry.known_mu is not None:
        outcome.checks.append(Check("known_mu", result.value == entry.known_mu, f"expected {entry.known_mu}"))
    return outcome


def cyclicity(config: RunConfig, arguments: dict, runner) -> Outcome:
    entry = load_family(config)
    section = config.knobs
    report = analyze_cyclicity(
        entry.family,
        entry.K,
        entry.O_sequence,
        entry.U,
        route=arguments.get("route") or section.route,
        sweep_samples=section.sweep_samples,
        mode=arguments.get("mode") or section.mode,
        extremal_radius=arguments.get("extremal_radius"),
        runner=runner(entry) if runner else inline_runner(entry.family, arguments.get("progress", False)),
    )
    outcome = Outcome(report)
    sandwich_failures = sum(not row.passed for row in report.sandwich_results)
    global_failures = sum(not row.passed for row in report.global_results)
    extremal = report.extremal
    outcome.checks = [
        Check("sandwich", not sandwich_failures, f"{len(report.sandwich_results)} rows, {sandwich_failures} failed"),
        Check("global_bound", not global_failures, f"{len(report.global_results)} rows, {global_failures} failed"),
        Check("extremal", extremal.found, f"r = {extremal.r:.6g}, max count {extremal.max_count}"),
    ]
    return outcome


def cartan(config: RunConfig, arguments: dict, runner) -> Outcome:
    coefficients = [complex(*c) if isinstance(c, list | tuple) else complex(c) for c in _require(arguments, "poly")]
    r = _require(arguments, "radius")
    d = arguments.get("degree")
    d = len(coefficients) - 1 if d is None else d
    outcome = Outcome(result={})

    def g(z):
        total = 0
        for c in reversed(coefficients):
            total = total * z + c
        return total

    for name, make in (
        ("lemma", lambda: find_good_radius(g, r)),
        ("polynomial", lambda: polynomial_min_modulus(coefficients, d, r)),
    ):
        try:
            certificate = make()
        except CertificateNotFoundError as e:
            outcome.errors.append(f"{name}: {e}")
            continue
        outcome.result[name] = certificate
        outcome.checks.append(Check(f"{name}_replay", replay(certificate, g), f"t_r = {certificate.t_r:.6g}"))
    scale = arguments.get("scale")
    if scale is not None:
        ratio, bound, passed = bernstein_doubling_check(coefficients, d, r, scale)
        outcome.result["bernstein"] = {"scale": scale, "ratio": ratio, "bound": bound}
        outcome.checks.append(Check("bernstein_doubling", passed, f"ratio {ratio:.6g} against {bound:.6g}"))
    return outcome


def catalog_verify(config: RunConfig, arguments: dict, runner) -> Outcome:
    entry = with_regions(get_entry(_require(arguments, "name")), config.regions)
    verification = verify_entry(entry)
    return Outcome(result=verification, checks=list(verification.checks))


COMMANDS: dict[str, Callable[[RunConfig, dict, Any], Outcome]] = {
    "count-zeros": count_zeros,
    "multiplicity": multiplicity,
    "estimate-bautin": estimate_bautin,
    "mu": mu,
    "cyclicity": cyclicity,
    "cartan": cartan,
    "catalog-verify": catalog_verify,
}


def run(config: RunConfig, command: str, arguments: dict | None = None, runner=None) -> dict:
    """
    Execute one command and return its report.

    `runner`, when given, builds the sweep runner of a catalog entry for the
    cyclicity command. Configuration problems raise ConfigurationError;
    numerical failures end up in the report's errors.
    """
    if command not in COMMANDS:
        raise ConfigurationError(f"Unknown command {command!r}; choose from {sorted(COMMANDS)}")
    arguments = dict(arguments or {})
    recorded = {k: v for k, v in arguments.items() if k != "progress"}
    snapshot = {"run": config.snapshot(), "arguments": to_tree(recorded)}
    with overridden(**knob_overrides(config)) as active:
        logger.info(f"Running {command} with seed {active.seed}")
        try:
            outcome = COMMANDS[command](config, arguments, runner)
        except ConfigurationError:
            raise
        except AnalysisError as e:
            logger.warning(f"{command} failed: {e}")
            outcome = Outcome(errors=[str(e)])
        snapshot["knobs"] = to_tree(active)
    report = build_report(command, snapshot, outcome.result, outcome.checks, outcome.errors)
    logger.info(f"{command} finished with status {report['status']}")
    return report

import argparse

from django.core.management.base import BaseCommand
from django.core.management.base import CommandError
from pydantic import ValidationError

from ...conf import knobs
from ...exceptions import ConfigurationError
from ...reports import to_tree
from ...reports import write_report
from ...runconfig import FamilySection
from ...runconfig import KnobsSection
from ...runconfig import RunConfig
from ...runconfig import load_config
from ...runs import run
from ...tasks import run_analysis
from ...tasks import sweep_runner


def complex_list(text: str) -> list[complex]:
    try:
        return [complex(part.strip().replace(" ", "")) for part in text.split(",")]
    except ValueError as e:
        msg = f"expected comma-separated complex numbers, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from e


def global_flags() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", help="Run configuration (INI with [family], [regions], [knobs])")
    parser.add_argument("--family", help="Catalog entry name, overrides the configured family")
    parser.add_argument("--seed", type=int, default=None, help="Sampling seed")
    parser.add_argument("--out", default=None, help="Write the report here instead of stdout")
    parser.add_argument("--tolerance", type=float, default=None, help="Relative tolerance of numerical checks")
    parser.add_argument("--progress", action="store_true", help="Show sweep progress bars")
    parser.add_argument("--on-worker", action="store_true", help="Run the whole analysis on a Celery worker")
    return parser


class Command(BaseCommand):
    help = "Zero counts, multiplicities, Bautin constants and cyclicity bounds of parametric holomorphic families"

    def add_arguments(self, parser):
        common = [global_flags()]
        commands = parser.add_subparsers(dest="command", required=True)

        count = commands.add_parser("count-zeros", parents=common, help="Zeros of f_λ in a closed disk")
        count.add_argument("--lambda", dest="lam", type=complex_list, required=True)
        count.add_argument("--radius", type=float, required=True)

        multiplicity = commands.add_parser("multiplicity", parents=common, help="Multiplicity indicator trace")
        multiplicity.add_argument("--lambda", dest="lam", type=complex_list, required=True)

        estimate = commands.add_parser("estimate-bautin", parents=common, help="Bautin index N and constant c(N)")
        estimate.add_argument("--kmax", type=int, default=None)
        estimate.add_argument("--samples", type=int, default=None)

        mu = commands.add_parser("mu", parents=common, help="Maximal multiplicity on K")
        mu.add_argument("--route", choices=["ineq", "growth", "both"], default=None)

        cyclicity = commands.add_parser("cyclicity", parents=common, help="Cyclicity radius and verification")
        cyclicity.add_argument("--route", choices=["ineq", "growth", "both"], default=None)
        cyclicity.add_argument("--mode", choices=["auto", "theoretical", "practical"], default=None)
        cyclicity.add_argument("--extremal-radius", type=float, default=None)

        cartan = commands.add_parser("cartan", parents=common, help="Minimum-modulus certificate of a polynomial")
        cartan.add_argument("--poly", type=complex_list, required=True, help="Coefficients, constant term first")
        cartan.add_argument("--radius", type=float, required=True)
        cartan.add_argument("--degree", type=int, default=None)
        cartan.add_argument("--scale", type=float, default=None, help="Also run the doubling check at this scale")

        verify = commands.add_parser("catalog-verify", parents=common, help="Known-value checks of a catalog entry")
        verify.add_argument("name")

    def configure(self, options) -> RunConfig:
        config = load_config(options["config"]) if options["config"] else RunConfig()
        updates = {}
        if options["family"]:
            updates["family"] = FamilySection(kind="catalog", source=options["family"])
        flags = {
            "seed": options["seed"],
            "tolerance": options["tolerance"],
            "k_max": options.get("kmax"),
            "samples": options.get("samples"),
        }
        flags = {k: v for k, v in flags.items() if v is not None}
        if flags:
            updates["knobs"] = KnobsSection.model_validate({**config.knobs.model_dump(), **flags})
        return config.model_copy(update=updates)

    def handle(self, *args, **options):
        command = options["command"]
        arguments = {
            key: options[key]
            for key in ("lam", "radius", "route", "mode", "extremal_radius", "poly", "degree", "scale", "name")
            if options.get(key) is not None
        }
        arguments["progress"] = options["progress"]
        try:
            config = self.configure(options)
            if options["on_worker"]:
                arguments.pop("progress")
                snapshot = config.model_dump(mode="json", exclude={"path"})
                report = run_analysis.delay(snapshot, command, to_tree(arguments)).get()
            else:
                runner = sweep_runner(config) if knobs().distribute_sweeps else None
                report = run(config, command, arguments, runner)
        except ValidationError as e:
            raise CommandError(f"Invalid option: {e}", returncode=2) from e
        except ConfigurationError as e:
            raise CommandError(str(e), returncode=2) from e

        text = write_report(report, options["out"])
        if options["out"]:
            self.stdout.write(self.style.SUCCESS(f"Report written to {options['out']}"))
        else:
            self.stdout.write(text, ending="")
        if report["status"]:
            failed = [c["name"] for c in report["checks"] if not c["passed"]]
            raise CommandError(f"{command}: failed checks {failed}, {len(report['errors'])} errors", returncode=1)

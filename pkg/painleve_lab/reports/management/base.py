import logging
import multiprocessing

import django
from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from numerics.conf import default_tolerances
from numerics.exceptions import LaboratoryError
from reports.rendering import render_error, render_rows
from reports.serializers import RunConfigSerializer

logger = logging.getLogger(__name__)

CHECK_FAILURE_STATUS = 1
USAGE_ERROR_STATUS = 2


def _flatten(detail, prefix=""):
    if isinstance(detail, dict):
        parts = []
        for key, value in detail.items():
            label = key if key != "non_field_errors" else ""
            parts.extend(_flatten(value, f"{prefix}{label}: " if label else prefix))
        return parts
    if isinstance(detail, list):
        return [part for item in detail for part in _flatten(item, prefix)]
    return [f"{prefix}{detail}"]


class LaboratoryCommand(BaseCommand):
    """
    Shared options, validation, worker pool and error reporting.

    Subclasses implement ``compute(config, options)`` returning
    ``(rows, serializer_class, failed)``.
    """

    min_n_max = 1

    def add_arguments(self, parser):
        parser.add_argument("--alpha", required=True, help="Weight exponent, > -1")
        parser.add_argument("--t", help="Single value of t")
        parser.add_argument("--t-min", help="First grid value of t")
        parser.add_argument("--t-max", help="Last grid value of t")
        parser.add_argument("--t-steps", type=int, default=1, help="Grid points")
        parser.add_argument("--n-max", type=int, required=True, help="Largest index")
        parser.add_argument(
            "--precision",
            type=int,
            dest="precision_bits",
            help="Working precision in bits (default PAINLEVE_PRECISION_BITS or 256)",
        )
        parser.add_argument("--h", help="Central-difference step")
        parser.add_argument(
            "--format", dest="output_format", default="csv", choices=["csv", "json"]
        )
        parser.add_argument(
            "--workers", type=int, default=1, help="Processes evaluating grid points"
        )
        for key, value in default_tolerances().items():
            parser.add_argument(
                f"--tol-{key}", dest=f"tol_{key}", help=f"Tolerance (default {value})"
            )

    def load_config(self, options, **extra):
        data = {
            "alpha": options["alpha"],
            "t": options.get("t"),
            "t_min": options.get("t_min"),
            "t_max": options.get("t_max"),
            "t_steps": options.get("t_steps", 1),
            "n_max": options["n_max"],
            "precision_bits": options.get("precision_bits"),
            "h": options.get("h"),
            "output_format": options.get("output_format", "csv"),
            "workers": options.get("workers", 1),
            "tolerances": {
                key: options[f"tol_{key}"]
                for key in default_tolerances()
                if options.get(f"tol_{key}") is not None
            },
        }
        data.update(extra)
        serializer = RunConfigSerializer(
            data=data, context={"min_n_max": self.min_n_max}
        )
        serializer.is_valid(raise_exception=True)
        return serializer.save()

    def map_grid(self, function, tasks, workers):
        """Evaluate tasks in order, in a process pool when workers > 1."""
        if workers > 1 and len(tasks) > 1:
            with multiprocessing.Pool(
                min(workers, len(tasks)), initializer=django.setup
            ) as pool:
                return pool.map(function, tasks)
        return [function(task) for task in tasks]

    def handle(self, *args, **options):
        try:
            config = self.load_config(options, **self.extra_config(options))
            rows, serializer_class, failed = self.compute(config, options)
        except serializers.ValidationError as exc:
            message = "; ".join(_flatten(exc.detail))
            self.fail("invalid_config", message, USAGE_ERROR_STATUS)
        except LaboratoryError as exc:
            self.fail(exc.code, str(exc), exc.exit_status)
        self.stdout.write(
            render_rows(rows, serializer_class, config.output_format, config.digits),
            ending="",
        )
        if failed:
            raise CommandError(
                f"{failed} check(s) failed", returncode=CHECK_FAILURE_STATUS
            )

    def extra_config(self, options):
        return {}

    def compute(self, config, options):
        raise NotImplementedError

    def fail(self, code, message, status):
        logger.error("%s: %s", code, message)
        self.stderr.write(render_error(code, message))
        raise CommandError(message, returncode=status)

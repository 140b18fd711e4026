from reports.management.base import LaboratoryCommand
from reports.serializers import CheckRowSerializer
from reports.suites import SUITES, integrate_suite, run_point, suites_for


class Command(LaboratoryCommand):
    help = (
        "Check the identities between the coefficient routes, the Toda and "
        "Painlevé equations, the ladder relations and the Freud links. Exits 1 "
        "when any residual exceeds its tolerance."
    )

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--suite", default="all", choices=SUITES)
        parser.add_argument(
            "--fault",
            action="store_true",
            help="Perturb one coefficient per suite to exercise the failure path",
        )

    def extra_config(self, options):
        return {"fault": options.get("fault", False)}

    def compute(self, config, options):
        suite = options.get("suite", "all")
        names = suites_for(suite, config.alpha)
        checks = []
        if names:
            tasks = [(names, config, t) for t in config.t_grid]
            for block in self.map_grid(run_point, tasks, config.workers):
                checks.extend(block)
        if suite == "integrate":
            checks.extend(integrate_suite(config))
        checks.sort(key=lambda check: (check.t, check.n))
        failed = sum(not check.passed for check in checks)
        return checks, CheckRowSerializer, failed

from discrete_system.orbit import route_agreement, run_discrete
from moments.hankel import hankel_route
from reports.management.base import LaboratoryCommand
from reports.serializers import CoeffRowSerializer, RouteComparisonRowSerializer

ROUTES = ("hankel", "discrete", "both")


def coefficient_rows(task):
    route, config, t = task
    params = config.params(t)
    bits = config.precision_bits
    if route == "both":
        rows = route_agreement(params, config.n_max, bits, relative=False)
        return [dict(row, t=t) for row in rows]
    if route == "hankel":
        coeffs = hankel_route(params, config.n_max, bits)
    else:
        _, coeffs = run_discrete(params, config.n_max, bits)
    return [dict(row, t=t) for row in coeffs.truncated(config.n_max).rows()]


class Command(LaboratoryCommand):
    help = "Tabulate the recurrence coefficients a_n^2 and b_n on a grid of t."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--route", default="hankel", choices=ROUTES)

    def compute(self, config, options):
        route = options.get("route", "hankel")
        tasks = [(route, config, t) for t in config.t_grid]
        rows = [
            row
            for block in self.map_grid(coefficient_rows, tasks, config.workers)
            for row in block
        ]
        if route == "both":
            return rows, RouteComparisonRowSerializer, 0
        return rows, CoeffRowSerializer, 0

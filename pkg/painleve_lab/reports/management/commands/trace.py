from freud.dpi import dpi_run
from moments.hankel import hankel_route
from numerics.precision import precision
from painleve4.equation import q_and_slope
from reports.management.base import LaboratoryCommand
from reports.serializers import (
    CoeffRowSerializer,
    FreudRowSerializer,
    QRowSerializer,
)

QUANTITIES = {
    "coeffs": CoeffRowSerializer,
    "q": QRowSerializer,
    "freud": FreudRowSerializer,
}


def trace_rows(task):
    quantity, config, t = task
    bits = config.precision_bits
    if quantity == "coeffs":
        coeffs = hankel_route(config.params(t), max(config.n_max, 1), bits)
        rows = coeffs.truncated(config.n_max).rows()
    elif quantity == "freud":
        rows = dpi_run(config.alpha, t, config.n_max, bits).rows()
    else:
        with precision(bits):
            z = t / 2
        rows = []
        for n in range(config.n_max + 1):
            q, q1 = q_and_slope(config.params(t), n, z, bits)
            rows.append({"z": z, "n": n, "q": q, "q1": q1})
    return [dict(row, t=t) for row in rows]


class Command(LaboratoryCommand):
    help = (
        "Trace one quantity over a grid of t: the Laguerre coefficients, "
        "q_n and q_n' at z = t/2, or the Freud coefficients A_n^2."
    )

    min_n_max = 0

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--quantity", default="coeffs", choices=QUANTITIES)

    def compute(self, config, options):
        quantity = options.get("quantity", "coeffs")
        tasks = [(quantity, config, t) for t in config.t_grid]
        rows = [
            row
            for block in self.map_grid(trace_rows, tasks, config.workers)
            for row in block
        ]
        return rows, QUANTITIES[quantity], 0

import csv
import io
import json
from unittest import mock

from django.apps import apps
from django.core.cache import cache
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from mpmath import mp, mpf

from numerics.exceptions import PrecisionExhaustedError
from numerics.precision import precision

from .rendering import render_rows
from .serializers import CoeffRowSerializer, ExtRealField, RunConfigSerializer
from .suites import Check, suites_for


def run(*args):
    stdout, stderr = io.StringIO(), io.StringIO()
    call_command(*args, stdout=stdout, stderr=stderr)
    return stdout.getvalue(), stderr.getvalue()


def run_failing(test, *args):
    stdout, stderr = io.StringIO(), io.StringIO()
    with test.assertRaises(CommandError) as raised:
        call_command(*args, stdout=stdout, stderr=stderr)
    return raised.exception, stdout.getvalue(), stderr.getvalue()


class RunConfigSerializerTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def validate(self, context=None, **data):
        data.setdefault("alpha", "1")
        data.setdefault("n_max", 3)
        return RunConfigSerializer(data=data, context=context or {})

    def test_single_point(self):
        serializer = self.validate(t="0.5")
        self.assertTrue(serializer.is_valid(), serializer.errors)
        config = serializer.save()
        self.assertEqual(len(config.t_grid), 1)
        self.assertEqual(config.t_grid[0], mpf("0.5"))
        self.assertEqual(config.precision_bits, 256)
        self.assertEqual(config.digits, 78)
        with precision(config.precision_bits):
            self.assertEqual(config.tolerances["route"], mpf("1e-25"))

    def test_grid_endpoints(self):
        serializer = self.validate(t_min="-1", t_max="1", t_steps=5)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        config = serializer.save()
        self.assertEqual(len(config.t_grid), 5)
        self.assertEqual(config.t_grid[0], -1)
        self.assertEqual(config.t_grid[2], 0)
        self.assertEqual(config.t_grid[-1], 1)

    def test_tolerance_override(self):
        serializer = self.validate(t="0", tolerances={"p4": "1e-8"})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        config = serializer.save()
        with precision(config.precision_bits):
            self.assertEqual(config.tolerances["p4"], mpf("1e-8"))
            self.assertEqual(config.tolerances["toda"], mpf("1e-12"))

    def test_rejections(self):
        cases = [
            {"alpha": "-1", "t": "0"},
            {"alpha": "abc", "t": "0"},
            {"t": "0", "n_max": 0},
            {"t": "0", "precision_bits": 32},
            {"t": "0", "h": "0"},
            {"t": "0", "tolerances": {"nope": "1"}},
            {"t": "0", "tolerances": {"p4": "-1"}},
            {"t": "0", "t_min": "1", "t_max": "2"},
            {"t_min": "1"},
            {"t_min": "2", "t_max": "1", "t_steps": 3},
            {"t_min": "1", "t_max": "2"},
            {},
        ]
        for data in cases:
            with self.subTest(data=data):
                self.assertFalse(self.validate(**data).is_valid())

    def test_min_n_max_context(self):
        serializer = self.validate(t="0", n_max=0, context={"min_n_max": 0})
        self.assertTrue(serializer.is_valid(), serializer.errors)


class RenderingTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_field_digits(self):
        field = ExtRealField()
        field._context = {"digits": 10}
        with precision(256):
            self.assertEqual(field.to_representation(mp.pi), "3.141592654")
            self.assertEqual(field.to_representation(mpf("0.25")), "0.25")

    def test_csv_header_and_missing_cells(self):
        rows = [{"t": mpf(0), "n": 0, "a2": mpf(0), "b": mpf("0.5")}]
        text = render_rows(rows, CoeffRowSerializer, "csv", 10)
        self.assertEqual(text, "t,n,a2,b\n0.0,0,0.0,0.5\n")

    def test_check_passes_on_tolerance(self):
        check = Check("toda", "toda_b", 0, mpf(0), None, mpf("1e-13"), mpf("1e-12"))
        self.assertTrue(check.passed)
        check = Check("toda", "toda_b", 0, mpf(0), None, mpf("-1e-11"), mpf("1e-12"))
        self.assertFalse(check.passed)

    def test_all_skips_positive_alpha_suites(self):
        with self.assertLogs("reports.suites", level="WARNING"):
            names = suites_for("all", mpf("-0.5"))
        self.assertNotIn("ladder", names)
        self.assertNotIn("w", names)
        self.assertNotIn("integrate", names)
        self.assertIn("riccati", names)
        self.assertIn("w", suites_for("all", mpf(1)))
        self.assertEqual(suites_for("integrate", mpf(1)), [])


class CoeffsCommandTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_both_routes(self):
        stdout, _ = run(
            "coeffs", "--alpha", "1", "--t", "0", "--n-max", "1", "--route", "both"
        )
        rows = list(csv.DictReader(io.StringIO(stdout)))
        self.assertEqual(len(rows), 2)
        self.assertEqual([row["n"] for row in rows], ["0", "1"])
        self.assertTrue(rows[1]["a2_hankel"].startswith("0.2146018366"))
        self.assertTrue(rows[1]["a2_discrete"].startswith("0.2146018366"))
        with precision(256):
            self.assertLess(abs(mpf(rows[1]["a2_diff"])), mpf("1e-25"))
            self.assertLess(abs(mpf(rows[0]["b_diff"])), mpf("1e-25"))

    def test_csv_and_json_agree(self):
        args = ("coeffs", "--alpha", "2.5", "--t-min", "-1", "--t-max", "1")
        args += ("--t-steps", "3", "--n-max", "4")
        csv_text, _ = run(*args)
        json_text, _ = run(*args, "--format", "json")
        csv_rows = list(csv.DictReader(io.StringIO(csv_text)))
        json_rows = [
            {key: str(value) for key, value in row.items()}
            for row in json.loads(json_text)
        ]
        self.assertEqual(len(csv_rows), 15)
        self.assertEqual(csv_rows, json_rows)

    def test_usage_errors(self):
        for args in (
            ("--alpha", "1", "--t", "0", "--n-max", "0"),
            ("--alpha=-1", "--t", "0", "--n-max", "2"),
            ("--alpha", "1", "--n-max", "2"),
        ):
            with self.subTest(args=args):
                error, stdout, stderr = run_failing(self, "coeffs", *args)
                self.assertEqual(error.returncode, 2)
                self.assertEqual(stdout, "")
                self.assertEqual(json.loads(stderr)["error_code"], "invalid_config")

    @mock.patch("reports.management.commands.coeffs.hankel_route")
    def test_precision_exhaustion(self, hankel_route):
        hankel_route.side_effect = PrecisionExhaustedError("determinant vanished", 256)
        error, _, stderr = run_failing(
            self, "coeffs", "--alpha", "1", "--t", "0", "--n-max", "3"
        )
        self.assertEqual(error.returncode, 3)
        self.assertEqual(json.loads(stderr)["error_code"], "precision_exhausted")


class VerifyCommandTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_riccati_passes(self):
        stdout, _ = run(
            "verify", "--suite", "riccati", "--alpha", "1", "--t", "0", "--n-max", "1"
        )
        rows = list(csv.DictReader(io.StringIO(stdout)))
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0]["suite"], "riccati")
        self.assertEqual(rows[0]["passed"], "True")

    def test_fault_fails(self):
        error, stdout, _ = run_failing(
            self,
            "verify",
            "--suite",
            "riccati",
            "--alpha",
            "1",
            "--t",
            "0",
            "--n-max",
            "1",
            "--fault",
        )
        self.assertEqual(error.returncode, 1)
        rows = list(csv.DictReader(io.StringIO(stdout)))
        self.assertEqual(rows[0]["passed"], "False")

    def test_ladder_needs_positive_alpha(self):
        error, _, stderr = run_failing(
            self,
            "verify",
            "--suite",
            "ladder",
            "--alpha=-0.5",
            "--t",
            "0",
            "--n-max",
            "2",
        )
        self.assertEqual(error.returncode, 2)
        self.assertEqual(json.loads(stderr)["error_code"], "hypothesis_violation")

    def test_ladder_suite_passes(self):
        stdout, _ = run(
            "verify", "--suite", "ladder", "--alpha", "1", "--t", "0.5", "--n-max", "4"
        )
        rows = list(csv.DictReader(io.StringIO(stdout)))
        self.assertTrue(rows)
        self.assertTrue(all(row["passed"] == "True" for row in rows))

    def assert_all_passed(self, stdout):
        rows = list(csv.DictReader(io.StringIO(stdout)))
        self.assertTrue(rows)
        failed = [row for row in rows if row["passed"] != "True"]
        self.assertEqual(failed, [])
        return rows

    def test_all_suites_pass(self):
        """A reduced run of every point suite exits cleanly."""
        stdout, _ = run(
            "verify",
            "--suite",
            "all",
            "--alpha",
            "1",
            "--t-min",
            "-1",
            "--t-max",
            "2",
            "--t-steps",
            "2",
            "--n-max",
            "3",
        )
        rows = self.assert_all_passed(stdout)
        self.assertEqual(
            {row["suite"] for row in rows},
            {"toda", "p4", "riccati", "ladder", "backlund", "dpi", "cross", "w"},
        )

    def test_all_suites_pass_for_negative_alpha(self):
        """The suites needing alpha > 0 are skipped, the rest still pass."""
        stdout, _ = run(
            "verify", "--suite", "all", "--alpha=-0.5", "--t", "0.5", "--n-max", "3"
        )
        rows = self.assert_all_passed(stdout)
        suites = {row["suite"] for row in rows}
        self.assertNotIn("ladder", suites)
        self.assertNotIn("w", suites)
        self.assertIn("backlund", suites)

    def test_backlund_for_nonpositive_alpha(self):
        """Sign pairs that send q_0 to zero are left out at n = 0 only."""
        cases = (
            (("--alpha=-0.5", "--t-min", "0", "--t-max", "3", "--t-steps", "2"), 2),
            (("--alpha", "0", "--t", "1"), 1),
        )
        for args, n_max in cases:
            with self.subTest(args=args):
                stdout, _ = run(
                    "verify", "--suite", "backlund", *args, "--n-max", str(n_max)
                )
                rows = self.assert_all_passed(stdout)
                first = {row["identity"] for row in rows if row["n"] == "0"}
                second = {row["identity"] for row in rows if row["n"] == "1"}
                self.assertNotIn("backlund_-1-1", first)
                self.assertIn("backlund_+1+1", first)
                self.assertTrue(
                    {"backlund_+1+1", "backlund_+1-1", "backlund_-1+1", "backlund_-1-1"}
                    <= second
                )

    def test_integrate_suite_passes(self):
        stdout, _ = run(
            "verify",
            "--suite",
            "integrate",
            "--alpha",
            "1",
            "--t-min",
            "0",
            "--t-max",
            "1",
            "--t-steps",
            "2",
            "--n-max",
            "3",
        )
        rows = self.assert_all_passed(stdout)
        self.assertEqual({row["suite"] for row in rows}, {"integrate"})

    def test_fault_fails_every_suite(self):
        """The injected perturbation is caught by each suite on its own."""
        suites = ("toda", "p4", "ladder", "backlund", "dpi", "cross", "w", "integrate")
        for suite in suites:
            with self.subTest(suite=suite):
                error, stdout, _ = run_failing(
                    self,
                    "verify",
                    "--suite",
                    suite,
                    "--alpha",
                    "1",
                    "--t-min",
                    "0",
                    "--t-max",
                    "0.5",
                    "--t-steps",
                    "2",
                    "--n-max",
                    "2",
                    "--fault",
                )
                self.assertEqual(error.returncode, 1)
                rows = list(csv.DictReader(io.StringIO(stdout)))
                self.assertIn("False", [row["passed"] for row in rows])

    def test_workers_keep_row_order(self):
        args = ("coeffs", "--alpha", "1", "--t-min", "0", "--t-max", "2")
        args += ("--t-steps", "3", "--n-max", "2")
        serial, _ = run(*args)
        parallel, _ = run(*args, "--workers", "2")
        self.assertEqual(serial, parallel)


class TraceCommandTests(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_q_at_origin(self):
        stdout, _ = run(
            "trace", "--quantity", "q", "--alpha", "1", "--n-max", "0", "--t", "0"
        )
        rows = list(csv.DictReader(io.StringIO(stdout)))
        self.assertEqual(len(rows), 1)
        with precision(256):
            self.assertLess(abs(mpf(rows[0]["q"]) - mp.sqrt(mp.pi)), mpf("1e-70"))
            self.assertLess(abs(mpf(rows[0]["q1"]) - (2 - mp.pi)), mpf("1e-70"))

    def test_coeffs_with_zero_n_max(self):
        stdout, _ = run("trace", "--alpha", "1", "--n-max", "0", "--t", "0")
        rows = list(csv.DictReader(io.StringIO(stdout)))
        self.assertEqual(len(rows), 1)
        self.assertTrue(rows[0]["b"].startswith("0.8862269254"))

    def test_freud(self):
        stdout, _ = run(
            "trace", "--quantity", "freud", "--alpha", "1", "--n-max", "3", "--t", "0"
        )
        rows = list(csv.DictReader(io.StringIO(stdout)))
        self.assertEqual([row["n"] for row in rows], ["0", "1", "2", "3"])
        self.assertTrue(rows[1]["A2"].startswith("0.8862269254"))


class InstalledAppsTests(SimpleTestCase):
    def test_commands_run_without_auth_apps(self):
        """The laboratory has no models, so auth and contenttypes stay out."""
        self.assertFalse(apps.is_installed("django.contrib.auth"))
        self.assertFalse(apps.is_installed("django.contrib.contenttypes"))
        stdout, _ = run("coeffs", "--alpha", "1", "--n-max", "1", "--t", "0")
        self.assertIn("a2", stdout.splitlines()[0])

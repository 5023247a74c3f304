import logging
import time
import unittest
from dataclasses import dataclass

from bredon.batch import (
    BatchReport,
    JobFinished,
    JobStarted,
    ReportCollector,
    Server,
    Snapshot,
    run_batch,
    run_job,
)
from bredon.config import Budgets
from bredon.exceptions import ServerError, ServerTimeoutError
from bredon.jobs import JobResult
from bredon.specs import BatchManifest, JobSpec

logging.basicConfig(level=logging.INFO)


@dataclass(frozen=True)
class Increment:
    step: int = 1


@dataclass(frozen=True)
class GetCount:
    pass


class CounterServer(Server[Increment, GetCount, int]):
    def init(self, start: int = 0) -> int:
        return start

    def handle_cast(self, message: Increment, state: int) -> int:
        return state + message.step

    def handle_call(self, message: GetCount, state: int):
        return state, state


def _manifest(*ids, command="subgroups", group="z2"):
    return BatchManifest(
        jobs=[JobSpec(id=i, command=command, inputs={"group": group}) for i in ids]
    )


class TestServer(unittest.TestCase):
    def test_start_stop(self):
        server = CounterServer()
        server.start()
        self.assertTrue(server._running)
        server.stop()
        self.assertFalse(server._running)

    def test_double_start_stop(self):
        server = CounterServer()
        server.start()
        with self.assertRaises(ServerError):
            server.start()
        server.stop()
        with self.assertRaises(ServerError):
            server.stop()

    def test_cast_then_call(self):
        server = CounterServer()
        server.start(10)
        server.cast(Increment())
        server.cast(Increment(5))
        # the mailbox is FIFO, so the call sees both casts
        self.assertEqual(server.call(GetCount()), 16)
        server.stop()

    def test_wrong_message_type(self):
        server = CounterServer()
        server.start()
        with self.assertRaises(ServerError):
            server.cast(GetCount())
        with self.assertRaises(ServerError):
            server.call(Increment())
        server.stop()

    def test_stopped_server_rejects_messages(self):
        server = CounterServer()
        with self.assertRaises(ServerError):
            server.cast(Increment())
        with self.assertRaises(ServerError):
            server.call(GetCount())

    def test_call_timeout(self):
        class SlowServer(CounterServer):
            def handle_call(self, message, state):
                time.sleep(1)
                return state, state

        server = SlowServer()
        server.start()
        started = time.time()
        with self.assertRaises(ServerTimeoutError):
            server.call(GetCount(), timeout=0.1)
        self.assertLess(time.time() - started, 0.5)
        server.stop()

    def test_timeout_error_is_builtin_timeout(self):
        error = ServerTimeoutError("No reply within %s s", 0.1)
        self.assertIsInstance(error, TimeoutError)
        self.assertEqual(error.exit_code, 3)
        self.assertEqual(str(error), "No reply within 0.1 s")

    def test_state_type_is_enforced(self):
        class BadServer(CounterServer):
            def init(self) -> int:
                return "zero"

        server = BadServer()
        server.start()
        time.sleep(0.2)
        self.assertFalse(server._running)

    def test_terminate_callback(self):
        seen = []

        class TerminateServer(CounterServer):
            def terminate(self, state):
                seen.append(state)

        server = TerminateServer()
        server.start(3)
        server.stop()
        self.assertEqual(seen, [3])

    def test_handler_exceptions(self):
        class FaultyServer(CounterServer):
            def handle_cast(self, message, state):
                raise TypeError("cast handler error")

            def handle_call(self, message, state):
                raise ValueError("call handler error")

        server = FaultyServer()
        server.start()
        server.cast(Increment())
        time.sleep(0.1)
        self.assertTrue(server._running)
        response = server.call(GetCount())
        self.assertIsInstance(response, ServerError)
        server.stop()


class TestReportCollector(unittest.TestCase):
    def test_unknown_jobs_are_dropped(self):
        collector = ReportCollector()
        collector.start({"a"})
        collector.cast(JobFinished(JobResult(JobSpec(id="a", command="subgroups"))))
        collector.cast(JobFinished(JobResult(JobSpec(id="b", command="subgroups"))))
        self.assertEqual(list(collector.call(Snapshot()).results), ["a"])
        collector.stop()

    def test_start_notices(self):
        collector = ReportCollector()
        collector.start({"a"})
        collector.cast(JobStarted("a", 12.5))
        collector.cast(JobStarted("b", 13.0))
        progress = collector.call(Snapshot())
        self.assertEqual(progress.started, {"a": 12.5})
        self.assertEqual(progress.results, {})
        with self.assertRaises(ServerError):
            collector.cast(Snapshot())
        collector.stop()


class TestRunBatch(unittest.TestCase):
    def test_empty_manifest(self):
        report = run_batch(BatchManifest())
        self.assertEqual(report.exit_code, 0)
        self.assertEqual(report.to_json()["jobs"], [])

    def test_results_are_ordered_by_id(self):
        report = run_batch(_manifest("c", "a", "b"), Budgets(workers=2))
        self.assertEqual([r.job.id for r in report.results], ["a", "b", "c"])
        self.assertEqual(report.exit_code, 0)
        self.assertEqual(report.to_json()["summary"], {"pass": 3})

    def test_worst_exit_code_wins(self):
        manifest = BatchManifest(
            jobs=[
                JobSpec(id="ok", command="subgroups", inputs={"group": "s3"}),
                JobSpec(id="bad", command="subgroups", inputs={"group": "nope"}),
            ]
        )
        report = run_batch(manifest)
        self.assertEqual(report.exit_code, 2)
        self.assertEqual(report.to_json()["summary"], {"input_error": 1, "pass": 1})

    def test_runner_exception(self):
        def runner(job):
            raise RuntimeError("boom")

        report = run_batch(_manifest("a"), runner=runner)
        (result,) = report.results
        self.assertEqual(result.exit_code, 1)
        self.assertEqual(result.error["category"], "internal")

    def test_deadline(self):
        def runner(job):
            if job.id == "slow":
                time.sleep(2)
            return JobResult(job)

        budgets = Budgets(job_timeout=0.5, workers=2)
        report = run_batch(_manifest("fast", "slow"), budgets, runner=runner)
        codes = {r.job.id: r.exit_code for r in report.results}
        self.assertEqual(codes, {"fast": 0, "slow": 3})
        self.assertIsInstance(report, BatchReport)

    def test_deadline_is_per_job(self):
        def runner(job):
            time.sleep(0.3)
            return JobResult(job)

        budgets = Budgets(job_timeout=1.0, workers=1)
        report = run_batch(_manifest("a", "b", "c"), budgets, runner=runner)
        self.assertEqual([r.exit_code for r in report.results], [0, 0, 0])

    def test_job_timeout_from_options(self):
        def runner(job):
            if job.id == "slow":
                time.sleep(2)
            return JobResult(job)

        manifest = BatchManifest(
            jobs=[
                {"id": "slow", "command": "subgroups", "options": {"budgets": {"job_timeout": 0.3}}},
                {"id": "other", "command": "subgroups"},
            ]
        )
        report = run_batch(manifest, Budgets(workers=1), runner=runner)
        codes = {r.job.id: r.exit_code for r in report.results}
        self.assertEqual(codes, {"other": 0, "slow": 3})

    def test_malformed_entry(self):
        manifest = BatchManifest(
            jobs=[
                {"id": "good", "command": "subgroups", "inputs": {"group": "z4"}},
                {"id": "bad", "command": "nope"},
            ]
        )
        report = run_batch(manifest)
        self.assertEqual(report.exit_code, 2)
        codes = {r.job.id: r.exit_code for r in report.results}
        self.assertEqual(codes, {"bad": 2, "good": 0})
        bad, good = report.to_json()["jobs"]
        self.assertEqual(bad["job"], {"id": "bad", "command": "nope"})
        self.assertEqual(bad["error"]["category"], "input")
        self.assertEqual(good["result"]["subgroup_count"], 3)


class TestRunJob(unittest.TestCase):
    def test_without_timeout(self):
        job = JobSpec(id="a", command="subgroups", inputs={"group": "s3"})
        result = run_job(job)
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.result["subgroup_count"], 6)

    def test_timeout(self):
        def runner(job):
            time.sleep(2)
            return JobResult(job)

        job = JobSpec(id="a", command="subgroups")
        result = run_job(job, Budgets(job_timeout=0.2), runner=runner)
        self.assertEqual(result.exit_code, 3)
        self.assertEqual(result.error["category"], "budget")


if __name__ == "__main__":
    unittest.main()

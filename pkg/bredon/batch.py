"""
Batch runs on a pool of job servers.

Each server owns a thread and a mailbox. The batch hands one
:class:`RunJob` at a time to each idle :class:`JobWorker`. The worker casts
:class:`JobStarted` and, once done, :class:`JobFinished` to the single
:class:`ReportCollector`, the only writer of the aggregate. A
:class:`Snapshot` call returns the progress; a job still running past its
own ``job_timeout`` is marked indeterminate and its worker replaced.
"""

import logging
import queue
import threading
import time
import uuid
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import (
    Any,
    Callable,
    Dict,
    Generic,
    List,
    Optional,
    Set,
    Tuple,
    Union,
    get_args,
    get_origin,
)

from bredon.config import DEFAULT_BUDGETS, Budgets
from bredon.exceptions import BudgetExceededError, ServerError, ServerTimeoutError
from bredon.jobs import JobResult, execute
from bredon.specs import BatchManifest, JobSpec
from bredon.typing import CallMsg, CastMsg, StateType

logger = logging.getLogger(__name__)

# _______________________ Envelopes _________________________


class Terminate:
    """Mailbox sentinel: the server leaves its loop."""


class Call(Generic[CallMsg]):
    """
    A request that expects a reply.

    Attributes
    ----------
    message : CallMsg
    correlation_id : uuid.UUID
        Matches the reply to the waiting caller.
    """

    def __init__(self, message: CallMsg, correlation_id: uuid.UUID):
        self.message = message
        self.correlation_id = correlation_id


class Cast(Generic[CastMsg]):
    """A fire-and-forget request."""

    def __init__(self, message: CastMsg):
        self.message = message


# _______________________ Messages __________________________


@dataclass(frozen=True)
class RunJob:
    job: JobSpec


@dataclass(frozen=True)
class JobStarted:
    job_id: str
    at: float
    """``time.monotonic()`` when the worker picked the job up."""


@dataclass(frozen=True)
class JobFinished:
    result: JobResult


@dataclass(frozen=True)
class Snapshot:
    """Ask the collector for the progress so far."""


# ________________________ Servers __________________________


def _accepted(t: Any) -> Any:
    """A type parameter as an ``isinstance`` argument; unions become tuples."""
    if get_origin(t) is Union:
        return tuple(_accepted(arg) for arg in get_args(t))
    return t


class Server(Generic[CastMsg, CallMsg, StateType]):
    """
    A thread with a mailbox and a private state.

    The three type parameters are the accepted cast messages, the accepted
    call messages and the state type; messages of any other type are
    rejected when sent. Subclasses implement :meth:`init` and the handlers.
    """

    _cast_type: Any
    _call_type: Any
    _state_type: Any

    def __init__(self) -> None:
        self._mailbox: "queue.Queue[Cast[CastMsg] | Call[CallMsg] | Terminate]" = (
            queue.Queue()
        )
        self._thread: Optional[threading.Thread] = None
        self._running = False
        self._state: Optional[StateType] = None
        self._replies: Dict[uuid.UUID, "queue.Queue[Any]"] = {}

    def __init_subclass__(cls) -> None:
        super().__init_subclass__()
        for base in getattr(cls, "__orig_bases__", ()):
            if get_origin(base) is Server:
                cls._cast_type, cls._call_type, cls._state_type = (
                    _accepted(t) for t in get_args(base)
                )
                return

    # lifecycle

    def start(self, *args: Any, **kwargs: Any) -> None:
        """Runs :meth:`init` and then the message loop on a new thread.

        Raises:
            ServerError: If the server is already running.
        """
        if self._running:
            raise ServerError("%s is already running", type(self).__name__)
        self._running = True
        # daemon threads: a job past the batch deadline must not keep the
        # process alive
        self._thread = threading.Thread(
            target=self._loop, args=args, kwargs=kwargs, daemon=True
        )
        self._thread.start()

    def stop(self, timeout: Optional[float] = None) -> None:
        """Raises:
        ServerError: If the server is not running.
        ServerTimeoutError: If the thread does not finish in ``timeout``.
        """
        if not self._running:
            raise ServerError("%s is not running", type(self).__name__)
        self._running = False
        self._mailbox.put(Terminate())
        if self._thread is None:
            return
        self._thread.join(timeout=timeout)
        if self._thread.is_alive():
            raise ServerTimeoutError("%s did not stop within %s s", type(self).__name__, timeout)

    # sending

    def cast(self, message: CastMsg) -> None:
        if not self._running:
            raise ServerError("Cannot cast to a stopped %s", type(self).__name__)
        if not isinstance(message, self._cast_type):
            raise ServerError("Expected cast message %s, got %s", self._cast_type, type(message))
        self._mailbox.put(Cast(message))

    def call(self, message: CallMsg, timeout: Optional[float] = None) -> Any:
        """Sends ``message`` and blocks for the reply.

        Raises:
            ServerError: If the server is stopped or the message has the
                wrong type.
            ServerTimeoutError: If no reply arrives within ``timeout``.
        """
        if not self._running:
            raise ServerError("Cannot call a stopped %s", type(self).__name__)
        if not isinstance(message, self._call_type):
            raise ServerError("Expected call message %s, got %s", self._call_type, type(message))
        correlation_id = uuid.uuid4()
        reply: "queue.Queue[Any]" = queue.Queue()
        self._replies[correlation_id] = reply
        self._mailbox.put(Call(message, correlation_id))
        try:
            return reply.get(timeout=timeout)
        except queue.Empty:
            raise ServerTimeoutError("No reply within %s s", timeout)
        finally:
            self._replies.pop(correlation_id, None)

    # state

    @property
    def state(self) -> Optional[StateType]:
        return self._state

    @state.setter
    def state(self, value: StateType) -> None:
        if not isinstance(value, self._state_type):
            raise ServerError("Expected state %s, got %s", self._state_type, type(value))
        self._state = value

    # loop

    def _reply(self, correlation_id: uuid.UUID, response: Any) -> None:
        reply = self._replies.get(correlation_id)
        if reply is None:
            logger.warning("No caller waiting for reply %s", correlation_id)
            return
        reply.put(response)

    def _dispatch(self, envelope: Any) -> None:
        if isinstance(envelope, Call):
            try:
                response, self.state = self.handle_call(envelope.message, self.state)
            except Exception as exc:
                logger.exception("handle_call failed for %s", envelope.message)
                response = ServerError("handle_call failed: %s", exc)
            self._reply(envelope.correlation_id, response)
        elif isinstance(envelope, Cast):
            try:
                self.state = self.handle_cast(envelope.message, self.state)
            except Exception:
                logger.exception("handle_cast failed for %s", envelope.message)
        else:
            logger.warning("Unknown envelope %s", envelope)

    def _loop(self, *args: Any, **kwargs: Any) -> None:
        try:
            self.state = self.init(*args, **kwargs)
        except Exception:
            logger.exception("%s init failed", type(self).__name__)
            self._running = False
            return
        while self._running:
            try:
                envelope = self._mailbox.get(timeout=0.1)
            except queue.Empty:
                continue
            if isinstance(envelope, Terminate):
                break
            self._dispatch(envelope)
        try:
            self.terminate(self.state)
        except Exception:
            logger.exception("%s terminate failed", type(self).__name__)

    # callbacks

    def init(self, *args: Any, **kwargs: Any) -> StateType:
        raise NotImplementedError("init must be implemented in a subclass")

    def handle_cast(self, message: CastMsg, state: StateType) -> StateType:
        logger.warning("Unhandled cast %s", message)
        return state

    def handle_call(self, message: CallMsg, state: StateType) -> Tuple[Any, StateType]:
        raise NotImplementedError("handle_call must be implemented in a subclass")

    def terminate(self, state: StateType) -> None:
        logger.debug("%s terminating", type(self).__name__)


@dataclass
class Aggregate:
    """
    The collector's state.

    Attributes
    ----------
    expected : set of str
        Ids of the dispatched jobs.
    started : dict
        Start time of each job a worker has picked up, by id.
    results : dict
        Finished jobs by id.
    """

    expected: Set[str]
    started: Dict[str, float] = field(default_factory=dict)
    results: Dict[str, JobResult] = field(default_factory=dict)


@dataclass(frozen=True)
class Progress:
    started: Dict[str, float] = field(default_factory=dict)
    results: Dict[str, JobResult] = field(default_factory=dict)


class ReportCollector(Server[Union[JobStarted, JobFinished], Snapshot, Aggregate]):
    def init(self, expected: Set[str]) -> Aggregate:
        return Aggregate(set(expected))

    def handle_cast(self, message: Union[JobStarted, JobFinished], state: Aggregate) -> Aggregate:
        job_id = message.job_id if isinstance(message, JobStarted) else message.result.job.id
        if job_id not in state.expected:
            logger.warning("Message for unknown job %s dropped", job_id)
            return state
        if isinstance(message, JobStarted):
            state.started[job_id] = message.at
        else:
            state.results[job_id] = message.result
        return state

    def handle_call(self, message: Snapshot, state: Aggregate) -> Tuple[Any, Aggregate]:
        return Progress(dict(state.started), dict(state.results)), state


@dataclass
class WorkerState:
    collector: ReportCollector
    runner: Callable[[JobSpec], JobResult]
    completed: int = 0


class JobWorker(Server[RunJob, Snapshot, WorkerState]):
    def init(
        self, collector: ReportCollector, runner: Callable[[JobSpec], JobResult]
    ) -> WorkerState:
        return WorkerState(collector, runner)

    def handle_cast(self, message: RunJob, state: WorkerState) -> WorkerState:
        job = message.job
        logger.debug("Worker running job %s", job.id)
        state.collector.cast(JobStarted(job.id, time.monotonic()))
        try:
            result = state.runner(job)
        except Exception as exc:
            logger.exception("Job %s raised", job.id)
            result = JobResult(job, 1, error={"category": "internal", "message": str(exc)})
        if not self._running:
            logger.debug("Dropping the result of abandoned job %s", job.id)
            return state
        state.collector.cast(JobFinished(result))
        state.completed += 1
        return state

    def terminate(self, state: WorkerState) -> None:
        logger.debug("Worker stopping after %s jobs", state.completed)


# _________________________ Batches _________________________

POLL_INTERVAL = 0.02


@dataclass
class BatchReport:
    """Per-job results ordered by job id; the exit code is the worst one."""

    results: List[JobResult]

    @property
    def exit_code(self) -> int:
        return max((r.exit_code for r in self.results), default=0)

    def to_json(self) -> dict:
        counts: Dict[str, int] = {}
        for r in self.results:
            counts[r.status] = counts.get(r.status, 0) + 1
        return {
            "exit_code": self.exit_code,
            "summary": dict(sorted(counts.items())),
            "jobs": [r.to_json() for r in self.results],
        }


def _timed_out(job: JobSpec, timeout: Optional[float]) -> JobResult:
    error = BudgetExceededError("Job did not finish within %s s", timeout)
    return JobResult(job, error.exit_code, error=error.to_json())


def _spawn(collector: ReportCollector, runner: Callable[[JobSpec], JobResult]) -> JobWorker:
    worker = JobWorker()
    worker.start(collector, runner)
    return worker


def _abandon(worker: JobWorker) -> None:
    # the thread cannot be interrupted; it is a daemon and exits after its job
    try:
        worker.stop(timeout=0)
    except ServerTimeoutError:
        logger.debug("Abandoned a worker still running its job")


def _run_jobs(
    jobs: List[JobSpec], budgets: Budgets, runner: Callable[[JobSpec], JobResult]
) -> List[JobResult]:
    """Runs ``jobs`` on ``budgets.workers`` workers, one job per idle worker.

    A job's wall-clock limit is the ``job_timeout`` of its merged budgets,
    counted from the moment a worker picks it up. A worker still busy past
    that limit is replaced and the job is reported with exit code 3.
    """
    timeouts = {job.id: job.budgets(budgets).job_timeout for job in jobs}
    collector = ReportCollector()
    collector.start(set(timeouts))
    workers = [_spawn(collector, runner) for _ in range(max(1, budgets.workers))]
    pending = deque(jobs)
    assigned: Dict[int, JobSpec] = {}
    expired: Dict[str, JobResult] = {}
    logger.info("Running %s jobs on %s workers", len(jobs), len(workers))
    while True:
        progress = collector.call(Snapshot())
        now = time.monotonic()
        for w, job in list(assigned.items()):
            if job.id in progress.results:
                del assigned[w]
                continue
            started, timeout = progress.started.get(job.id), timeouts[job.id]
            if timeout is None or started is None or now - started < timeout:
                continue
            logger.warning("Job %s did not finish within %s s", job.id, timeout)
            expired[job.id] = _timed_out(job, timeout)
            _abandon(workers[w])
            workers[w] = _spawn(collector, runner)
            del assigned[w]
        for w in range(len(workers)):
            if w not in assigned and pending:
                job = pending.popleft()
                workers[w].cast(RunJob(job))
                assigned[w] = job
        if not (pending or assigned):
            break
        time.sleep(POLL_INTERVAL)

    for worker in workers:
        try:
            worker.stop(timeout=0.5)
        except ServerTimeoutError:
            logger.warning("A worker did not stop within 0.5 s")
    collector.stop()
    return [expired.get(job.id) or progress.results[job.id] for job in jobs]


def run_job(
    job: JobSpec,
    budgets: Budgets = DEFAULT_BUDGETS,
    base: Optional[Path] = None,
    runner: Optional[Callable[[JobSpec], JobResult]] = None,
) -> JobResult:
    """Runs one job, on a worker when its budgets set a ``job_timeout``."""
    if runner is None:
        runner = lambda job: execute(job, budgets, base)  # noqa: E731
    if job.budgets(budgets).job_timeout is None:
        return runner(job)
    (result,) = _run_jobs([job], budgets.merged(workers=1), runner)
    return result


def run_batch(
    manifest: BatchManifest,
    budgets: Budgets = DEFAULT_BUDGETS,
    base: Optional[Path] = None,
    runner: Optional[Callable[[JobSpec], JobResult]] = None,
) -> BatchReport:
    """Runs every job of ``manifest`` on ``budgets.workers`` workers.

    Malformed entries are reported with exit code 2 without running.
    """
    if runner is None:
        runner = lambda job: execute(job, budgets, base)  # noqa: E731
    jobs: List[JobSpec] = []
    results: List[JobResult] = []
    for job, error in manifest.entries():
        if error is None:
            jobs.append(job)
        else:
            results.append(JobResult(job, error.exit_code, error=error.to_json()))
    results += _run_jobs(jobs, budgets, runner)
    return BatchReport(sorted(results, key=lambda r: r.job.id))

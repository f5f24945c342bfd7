import asyncio
import logging
import signal
import sys
from concurrent.futures import Executor, ProcessPoolExecutor
from typing import Callable, Hashable, Optional, Sequence, TypeVar

import settings

# Configure logging
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.INFO)
formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)

Item = TypeVar("Item", bound=Hashable)
Result = TypeVar("Result")

shutdown_event = asyncio.Event()


class SweepInterrupted(Exception):
    """A job was never run or was cancelled because the sweep shut down."""


def install_sweep_signal_handlers():
    """
    Route SIGINT and SIGTERM to `shutdown_event` so a sweep stops taking
    new multisegments and lets the running ones finish.
    """
    def request_shutdown(signum, frame):
        logger.info(f"Received {signal.Signals(signum).name}, no further multisegments will be started")
        shutdown_event.set()

    for signum in (signal.SIGTERM, signal.SIGINT):
        signal.signal(signum, request_shutdown)

    logger.info("Sweep signal handlers installed")


def _log_job_outcomes(finished) -> None:
    for job in finished:
        if job.cancelled():
            continue
        if job.exception() is not None:
            logger.error(f"Job ended with an unrecorded error: {job.exception()}")


async def reap_finished_jobs(running: set, workers: Optional[int] = None) -> set:
    """
    Drop finished jobs from `running` and return the ones still going.
    With `workers` given and every worker busy, wait for the first job to
    finish before returning.
    """
    if not running:
        return running
    if workers is not None and len(running) >= workers:
        finished, running = await asyncio.wait(running, return_when=asyncio.FIRST_COMPLETED)
    else:
        finished = {job for job in running if job.done()}
        running = running - finished
    _log_job_outcomes(finished)
    return running


async def drain_running_jobs(running: set, timeout: Optional[float] = None) -> bool:
    """
    Give the running jobs `timeout` seconds (SHUTDOWN_TIMEOUT by default),
    then cancel what is left. Cancelled jobs are recorded as interrupted.

    Returns:
        bool: True if every running job finished
    """
    if timeout is None:
        timeout = settings.shutdown_timeout()
    if not running:
        return True

    logger.info(f"Waiting up to {timeout}s for {len(running)} running job(s)")
    finished, unfinished = await asyncio.wait(running, timeout=timeout)
    _log_job_outcomes(finished)
    if not unfinished:
        logger.info("All running jobs finished")
        return True

    logger.warning(f"Cancelling {len(unfinished)} job(s) still running after {timeout}s")
    for job in unfinished:
        job.cancel()
    await asyncio.gather(*unfinished, return_exceptions=True)
    return False


async def _run_job(
    job: Callable[[Item], Result],
    item: Item,
    executor: Optional[Executor],
    results: dict,
    on_error: Callable[[Item, BaseException], Result],
) -> None:
    try:
        if executor is None:
            result = job(item)
        else:
            loop = asyncio.get_running_loop()
            result = await loop.run_in_executor(executor, job, item)
    except asyncio.CancelledError:
        results[item] = on_error(item, SweepInterrupted(f"job for {item} was cancelled"))
        raise
    except Exception as job_error:
        logger.error(f"Job for {item} failed: {job_error}")
        results[item] = on_error(item, job_error)
        return
    results[item] = result


async def run_jobs_async(
    job: Callable[[Item], Result],
    items: Sequence[Item],
    jobs: int,
    on_error: Callable[[Item, BaseException], Result],
    timeout: Optional[int] = None,
) -> list[Result]:
    """
    Run `job` on every item with at most `jobs` running at once and return
    the results in the order of `items`. jobs == 1 runs each job inline on
    the event loop; more jobs use a process pool.
    """
    if jobs < 1:
        raise ValueError(f"jobs must be at least 1, got {jobs}")
    shutdown_event.clear()
    results: dict = {}
    executor = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    running: set = set()
    finished_cleanly = True
    logger.info(f"Running {len(items)} jobs with {jobs} worker(s)")

    try:
        for count, item in enumerate(items, start=1):
            running = await reap_finished_jobs(running, workers=jobs)
            if shutdown_event.is_set():
                logger.info("Shutdown requested, not starting further jobs")
                break
            running.add(asyncio.create_task(_run_job(job, item, executor, results, on_error)))
            running = await reap_finished_jobs(running)
            if count % 50 == 0:
                logger.info(f"Started {count}/{len(items)} jobs")

        if running:
            if shutdown_event.is_set():
                finished_cleanly = await drain_running_jobs(running, timeout)
            else:
                await asyncio.wait(running)
                await reap_finished_jobs(running)
    finally:
        if executor is not None:
            executor.shutdown(wait=finished_cleanly, cancel_futures=True)

    missing = [item for item in items if item not in results]
    if missing:
        logger.warning(f"{len(missing)} jobs were not run because the sweep was interrupted")
    return [results[item] if item in results else on_error(item, SweepInterrupted(f"job for {item} was not run")) for item in items]


def run_jobs(
    job: Callable[[Item], Result],
    items: Sequence[Item],
    jobs: int = 1,
    on_error: Optional[Callable[[Item, BaseException], Result]] = None,
    install_signal_handlers: bool = False,
) -> list[Result]:
    """
    Synchronous entry point; the CLI installs signal handlers, library
    callers usually do not. Without `on_error` the first job error is
    re-raised once the sweep is over.
    """
    errors: list[BaseException] = []
    if on_error is None:
        def on_error(item, error):
            errors.append(error)
            return None
    if install_signal_handlers:
        install_sweep_signal_handlers()

    try:
        results = asyncio.run(run_jobs_async(job, list(items), jobs, on_error))
    except KeyboardInterrupt:
        logger.info("Keyboard interrupt received")
        sys.exit(130)
    if errors:
        raise errors[0]
    return results

import asyncio
import os
import signal
import sys

import pytest

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from sweep_runner import (
    drain_running_jobs,
    install_sweep_signal_handlers,
    reap_finished_jobs,
    run_jobs,
    run_jobs_async,
    shutdown_event,
)

# Enable async testing
pytest_plugins = ('pytest_asyncio',)


def describe_error(item, error):
    return f"{type(error).__name__}: {item}"


async def cancel_and_wait(job):
    job.cancel()
    try:
        await job
    except asyncio.CancelledError:
        pass


class TestSignalHandlers:
    """Test suite for the sweep's signal handlers."""

    def test_signals_request_shutdown(self):
        """Test that SIGTERM sets the shutdown event instead of killing the sweep."""
        # Setup
        shutdown_event.clear()
        install_sweep_signal_handlers()

        try:
            # Execute
            handler = signal.getsignal(signal.SIGTERM)
            handler(signal.SIGTERM, None)

            # Verify
            assert shutdown_event.is_set()
            assert signal.getsignal(signal.SIGINT) is handler
        finally:
            shutdown_event.clear()
            signal.signal(signal.SIGTERM, signal.SIG_DFL)
            signal.signal(signal.SIGINT, signal.default_int_handler)


class TestRunningJobs:
    """Test suite for reaping and draining the running job set."""

    @pytest.mark.asyncio
    async def test_reap_empty_set(self):
        """Test reaping with nothing running."""
        assert await reap_finished_jobs(set()) == set()

    @pytest.mark.asyncio
    async def test_reap_drops_finished_jobs(self):
        """Test that finished jobs, failed ones included, are dropped without waiting."""
        # Setup
        async def quick_job():
            return "done"

        async def failing_job():
            raise RuntimeError("boom")

        quick = asyncio.create_task(quick_job())
        failing = asyncio.create_task(failing_job())
        slow = asyncio.create_task(asyncio.sleep(1))
        await asyncio.sleep(0.1)

        try:
            # Execute
            still_running = await reap_finished_jobs({quick, failing, slow})

            # Verify
            assert still_running == {slow}
        finally:
            await cancel_and_wait(slow)

    @pytest.mark.asyncio
    async def test_reap_does_not_wait_with_a_free_worker(self):
        """Test that nothing is awaited while a worker is free."""
        slow = asyncio.create_task(asyncio.sleep(1))
        running = {slow}

        try:
            assert await reap_finished_jobs(running, workers=2) == {slow}
            assert not slow.done()
        finally:
            await cancel_and_wait(slow)

    @pytest.mark.asyncio
    async def test_reap_waits_when_every_worker_is_busy(self):
        """Test that a worker is freed when the quickest job finishes."""
        # Setup
        quick = asyncio.create_task(asyncio.sleep(0.05))
        slow = asyncio.create_task(asyncio.sleep(1))

        try:
            # Execute
            still_running = await reap_finished_jobs({quick, slow}, workers=2)

            # Verify
            assert still_running == {slow}
        finally:
            await cancel_and_wait(slow)

    @pytest.mark.asyncio
    async def test_drain_empty_set(self):
        """Test draining with nothing running."""
        assert await drain_running_jobs(set(), timeout=1) is True

    @pytest.mark.asyncio
    async def test_drain_lets_jobs_finish(self):
        """Test draining when every job finishes in time."""
        async def quick_job():
            await asyncio.sleep(0.1)
            return "done"

        running = {asyncio.create_task(quick_job()), asyncio.create_task(quick_job())}
        assert await drain_running_jobs(running, timeout=1) is True
        assert all(job.done() and not job.cancelled() for job in running)

    @pytest.mark.asyncio
    async def test_drain_cancels_late_jobs(self):
        """Test that jobs still running after the timeout are cancelled."""
        slow = asyncio.create_task(asyncio.sleep(2))

        assert await drain_running_jobs({slow}, timeout=0.1) is False
        assert slow.cancelled()

    @pytest.mark.asyncio
    async def test_drain_timeout_from_environment(self, monkeypatch):
        """Test that SHUTDOWN_TIMEOUT is the default timeout."""
        monkeypatch.setenv('SHUTDOWN_TIMEOUT', '0')
        slow = asyncio.create_task(asyncio.sleep(2))

        assert await drain_running_jobs({slow}) is False
        assert slow.cancelled()


class TestRunJobs:
    """Test suite for running a batch of jobs."""

    @pytest.mark.asyncio
    async def test_results_follow_item_order(self):
        """Test inline execution keeps the input order."""
        results = await run_jobs_async(lambda x: x * 2, [3, 1, 2], 1, describe_error)
        assert results == [6, 2, 4]

    @pytest.mark.asyncio
    async def test_errors_are_mapped(self):
        """Test that a failing job is replaced by the on_error result."""
        def job(x):
            if x == 2:
                raise ValueError("bad item")
            return x

        results = await run_jobs_async(job, [1, 2, 3], 1, describe_error)
        assert results == [1, "ValueError: 2", 3]

    @pytest.mark.asyncio
    async def test_shutdown_stops_new_jobs(self):
        """Test that jobs not yet started are reported as interrupted."""
        def job(x):
            shutdown_event.set()
            return x

        results = await run_jobs_async(job, [1, 2, 3], 1, describe_error, timeout=1)

        assert results == [1, "SweepInterrupted: 2", "SweepInterrupted: 3"]
        shutdown_event.clear()

    @pytest.mark.asyncio
    async def test_needs_a_worker(self):
        """Test that zero workers is refused."""
        with pytest.raises(ValueError):
            await run_jobs_async(abs, [1], 0, describe_error)

    def test_run_jobs_reraises_first_error(self):
        """Test that without on_error every job runs and the first error surfaces."""
        seen = []

        def job(x):
            seen.append(x)
            if x > 1:
                raise KeyError(x)
            return x

        with pytest.raises(KeyError):
            run_jobs(job, [1, 2, 3])
        assert seen == [1, 2, 3]

    @pytest.mark.integration
    def test_process_pool(self):
        """Test a two-worker pool with a picklable job."""
        assert run_jobs(abs, [-1, 2, -3], jobs=2) == [1, 2, 3]

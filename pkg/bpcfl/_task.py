"""Running experiment seeds and logging resource usage."""
import contextlib
import datetime
import logging
import threading
import time
from multiprocessing import Pool, cpu_count

import psutil

logger = logging.getLogger(__name__)

USAGE_COLUMNS = ('utc', 'wall_s', 'cpu_s', 'cpu_percent', 'rss_gb',
                 'memory_percent')


def _usage_of(processes):
    """Return summed CPU time, CPU %, resident GB and memory % of processes.

    Processes that exit while being sampled are skipped.
    """
    totals = [0., 0., 0., 0.]
    for proc in processes:
        try:
            with proc.oneshot():
                times = proc.cpu_times()
                sample = (times.user + times.system, proc.cpu_percent(),
                          proc.memory_info().rss / 2.**30,
                          proc.memory_percent())
        except psutil.Error:
            continue
        totals = [total + value for total, value in zip(totals, sample)]
    return totals


@contextlib.contextmanager
def resource_usage_logger(pid, filename, interval=1, children=True):
    """Sample the CPU and memory use of `pid` into `filename`.

    One tab separated row is written every `interval` seconds; worker
    processes are included if `children` is set.
    """
    halt = threading.Event()

    def _log_resource_usage():
        process = psutil.Process(pid)
        start = time.time()
        with open(filename, 'w') as file:
            file.write('\t'.join(USAGE_COLUMNS) + '\n')
            while process.is_running():
                processes = [process]
                if children:
                    processes += process.children(recursive=True)
                cpu_time, cpu, rss, memory = _usage_of(processes)
                file.write('{:%Y-%m-%d %H:%M:%S}\t{:.1f}\t{:.1f}\t{:.0f}\t'
                           '{:.3f}\t{:.1f}\n'.format(
                               datetime.datetime.utcnow(),
                               time.time() - start, cpu_time, cpu, rss,
                               memory))
                file.flush()
                if halt.wait(interval):
                    return

    thread = threading.Thread(target=_log_resource_usage, daemon=True)
    thread.start()
    try:
        yield
    finally:
        halt.set()
        thread.join()


class SeedTask:
    """Run the pipeline of an experiment for one seed.

    Parameters
    ----------
    function: callable
        Module level function called as ``function(*args)``; it must be
        picklable to run in a worker process.
    args: tuple
        Arguments of `function`.
    name: str
        Name used in log messages.
    """

    def __init__(self, function, args, name):
        self.function = function
        self.args = tuple(args)
        self.name = name
        self.result = None

    def run(self):
        """Run the task in this process and store its result."""
        logger.info("Starting task %s", self.name)
        start = datetime.datetime.utcnow()
        self.result = self.function(*self.args)
        logger.info("Successfully completed task %s in %s", self.name,
                    datetime.datetime.utcnow() - start)
        return self.result

    def __str__(self):
        return "SeedTask({})".format(self.name)


def _run_task(task):
    """Run task and return the result."""
    return task.run()


def run_tasks(tasks, max_parallel_tasks=None):
    """Run tasks and return their results in task order."""
    if max_parallel_tasks == 1 or len(tasks) < 2:
        return _run_tasks_sequential(tasks)
    return _run_tasks_parallel(tasks, max_parallel_tasks)


def _run_tasks_sequential(tasks):
    """Run tasks sequentially."""
    n_tasks = len(tasks)
    logger.info("Running %s tasks sequentially", n_tasks)
    results = []
    for i, task in enumerate(tasks):
        logger.info("Progress: %s/%s done", i, n_tasks)
        results.append(task.run())
    return results


def _run_tasks_parallel(tasks, max_parallel_tasks=None):
    """Run tasks in parallel."""
    n_tasks = len(tasks)
    logger.info("Running %s tasks using at most %s processes", n_tasks,
                max_parallel_tasks or cpu_count())

    with Pool(processes=max_parallel_tasks) as pool:
        pending = [pool.apply_async(_run_task, [task]) for task in tasks]
        n_done = 0
        while n_done < n_tasks:
            time.sleep(0.1)
            ready = sum(result.ready() for result in pending)
            if ready != n_done:
                n_done = ready
                logger.info("Progress: %s tasks running or queued, %s/%s "
                            "done", n_tasks - n_done, n_done, n_tasks)
        results = [result.get() for result in pending]

    for task, result in zip(tasks, results):
        task.result = result
    return results

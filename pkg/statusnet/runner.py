from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import asyncio
import logging
import time
from statusnet.config import get_settings
from statusnet.experiments import ExperimentJob, build_context, get_experiment
from statusnet.io import async_atomic_write_text, dumps_json, frame_to_csv, reports_summary, reports_to_frame
from statusnet.models import ExperimentConfig, ExperimentReport

logger = logging.getLogger(__name__)

class ExperimentRunner:
    """Runs the jobs of one experiment with bounded concurrency and merges their reports in job order"""

    def __init__(self, max_concurrent_jobs: Optional[int] = None):
        self.max_concurrent_jobs = max_concurrent_jobs or get_settings().max_concurrent_jobs
        self.status: Dict[str, str] = {}
        self.timings: Dict[str, float] = {}
        logger.info(f"ExperimentRunner initialized with max {self.max_concurrent_jobs} concurrent jobs")

    async def run(self, config: ExperimentConfig) -> List[ExperimentReport]:
        experiment = get_experiment(config.experiment.kind)
        context = build_context(config)
        jobs = experiment.jobs(context)
        logger.info(f"Running experiment {experiment.name} with {len(jobs)} jobs")
        return await self.run_jobs(jobs)

    async def run_jobs(self, jobs: List[ExperimentJob]) -> List[ExperimentReport]:
        # each run gets its own semaphore so a runner can be reused across event loops
        semaphore = asyncio.Semaphore(self.max_concurrent_jobs)
        self.status = {job.name: "pending" for job in jobs}
        results = await asyncio.gather(*(self._execute_job(job, semaphore) for job in jobs))
        reports = [report for _, report in sorted(results, key=lambda item: item[0])]
        violations = sum(r.violations for r in reports)
        logger.info(f"All {len(jobs)} jobs completed: {violations} violations")
        return reports

    async def _execute_job(self, job: ExperimentJob, semaphore: asyncio.Semaphore):
        async with semaphore:
            self.status[job.name] = "running"
            started = time.perf_counter()
            try:
                report = await asyncio.to_thread(job.run)
            except Exception as e:
                self.status[job.name] = "failed"
                logger.error(f"Job {job.name} failed: {e}")
                raise
            self.timings[job.name] = time.perf_counter() - started
            self.status[job.name] = "completed"
            logger.info(f"Job {job.name} completed: {report.violations} violations / {report.checks} checks")
            return job.index, report

    def get_status(self) -> Dict[str, Any]:
        counts: Dict[str, int] = {}
        for state in self.status.values():
            counts[state] = counts.get(state, 0) + 1
        return {"jobs": len(self.status), **counts}

    async def write_outputs(self, reports: List[ExperimentReport], out_dir: Union[str, Path]) -> Dict[str, Any]:
        """report.csv and summary.json; each file is written atomically"""
        out_dir = Path(out_dir)
        summary = reports_summary(reports)
        await async_atomic_write_text(out_dir / "report.csv", frame_to_csv(reports_to_frame(reports)))
        await async_atomic_write_text(out_dir / "summary.json", dumps_json(summary))
        logger.info(f"Reports written to {out_dir}")
        return summary

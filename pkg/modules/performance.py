"""
Performance Module
Provides timing instrumentation for the pipeline stages of the closure engine.
"""

import time
import logging
from functools import wraps
from typing import Dict, Any, Optional

import psutil

from modules.settings import get_settings

logger = logging.getLogger(__name__)


class PerformanceManager:
    """Per-stage timing metrics"""

    def __init__(self, slow_stage_threshold: Optional[float] = None):
        self.stage_metrics: Dict[str, Dict[str, Any]] = {}
        self.performance_metrics = {
            "stages_run": 0,
            "slow_stages": 0,
            "failed_stages": 0,
        }
        self._slow_stage_threshold = slow_stage_threshold

    @property
    def slow_stage_threshold(self) -> float:
        if self._slow_stage_threshold is None:
            return get_settings().slow_stage_seconds
        return self._slow_stage_threshold

    def record(self, stage: str, execution_time: float, failed: bool = False):
        """Record one run of a stage"""
        entry = self.stage_metrics.setdefault(
            stage, {"calls": 0, "total_seconds": 0.0, "max_seconds": 0.0, "failures": 0}
        )
        entry["calls"] += 1
        entry["total_seconds"] += execution_time
        entry["max_seconds"] = max(entry["max_seconds"], execution_time)
        self.performance_metrics["stages_run"] += 1

        if failed:
            entry["failures"] += 1
            self.performance_metrics["failed_stages"] += 1

        if execution_time > self.slow_stage_threshold:
            self.performance_metrics["slow_stages"] += 1
            logger.warning(f"Slow {stage}: {execution_time:.2f}s")

    def measure_time(self, func_name: str):
        """Decorator to measure function execution time"""
        def decorator(func):
            @wraps(func)
            def wrapper(*args, **kwargs):
                start_time = time.perf_counter()
                try:
                    result = func(*args, **kwargs)
                except Exception as e:
                    execution_time = time.perf_counter() - start_time
                    self.record(func_name, execution_time, failed=True)
                    logger.debug(f"{func_name} failed after {execution_time:.2f}s: {e}")
                    raise
                self.record(func_name, time.perf_counter() - start_time)
                return result

            return wrapper
        return decorator

    def reset(self):
        """Forget all recorded metrics"""
        self.stage_metrics.clear()
        for key in self.performance_metrics:
            self.performance_metrics[key] = 0

    def get_performance_metrics(self) -> Dict[str, Any]:
        """Current metrics plus the resident memory of this process"""
        try:
            rss = psutil.Process().memory_info().rss
        except psutil.Error as e:
            logger.error(f"Error reading process memory: {e}")
            rss = None

        return {
            **self.performance_metrics,
            "memory_rss_mb": None if rss is None else round(rss / (1024 * 1024), 1),
            "stages": {name: dict(entry) for name, entry in sorted(self.stage_metrics.items())},
        }

    def format_summary(self) -> str:
        """Human-readable metrics, one stage per line"""
        metrics = self.get_performance_metrics()
        lines = [
            f"stages run: {metrics['stages_run']}, slow: {metrics['slow_stages']}, "
            f"failed: {metrics['failed_stages']}, rss: {metrics['memory_rss_mb']} MB"
        ]
        for name, entry in metrics["stages"].items():
            lines.append(
                f"  {name}: {entry['calls']} call(s), {entry['total_seconds']:.3f}s total, "
                f"{entry['max_seconds']:.3f}s max"
            )
        return "\n".join(lines)


# Global instance
performance = PerformanceManager()

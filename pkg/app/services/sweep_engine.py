from __future__ import annotations

import asyncio
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from app.constants.constants import DEFAULT_SWEEP_CHUNK_SIZE, DEFAULT_SWEEP_WORKERS
from app.core.errors import NearSingular
from app.model.physics import IntensityRecord, SystemParams
from app.model.sweep import Axis, SweepResult
from app.services.core_model import absorption_of, intensity_ratios

logger = logging.getLogger(__name__)

# (delta_p, phi1, phi2)
GridPoint = Tuple[float, float, float]


def evaluate_point(p: SystemParams, delta_p: float) -> IntensityRecord:
    """intensity_ratios, with a near-singular point turned into a flagged row."""
    try:
        return intensity_ratios(p, delta_p)
    except NearSingular as e:
        logger.debug(f"Flagging point delta_p={delta_p}, phi1={p.phi1}, phi2={p.phi2}: {e}")
        return IntensityRecord.near_singular(delta_p, p.phi1, p.phi2)


def grid_points(p: SystemParams, delta_p: float, axes: Sequence[Axis]) -> List[GridPoint]:
    """Row-major grid: the first axis varies slowest."""
    base: Dict[str, float] = {"delta_p": float(delta_p), "phi1": p.phi1, "phi2": p.phi2}
    values = [a.points().tolist() for a in axes]
    points: List[GridPoint] = []
    for combo in itertools.product(*values):
        coords = dict(base)
        coords.update(zip((a.name for a in axes), combo))
        points.append((coords["delta_p"], coords["phi1"], coords["phi2"]))
    return points


class SweepRunner:
    def __init__(
        self,
        max_workers: int = DEFAULT_SWEEP_WORKERS,
        chunk_size: int = DEFAULT_SWEEP_CHUNK_SIZE,
    ):
        self.max_workers = max(1, max_workers)
        self.chunk_size = max(1, chunk_size)
        self.thread_pool = ThreadPoolExecutor(max_workers=self.max_workers)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.thread_pool.shutdown(wait=True)

    def _run_in_thread(self, func, *args):
        loop = asyncio.get_running_loop()
        return loop.run_in_executor(self.thread_pool, func, *args)

    def _chunk_points(self, points: List[GridPoint]) -> List[List[GridPoint]]:
        return [
            points[i : i + self.chunk_size]
            for i in range(0, len(points), self.chunk_size)
        ]

    @staticmethod
    def _evaluate_chunk(p: SystemParams, chunk: List[GridPoint]) -> List[IntensityRecord]:
        return [
            evaluate_point(p.with_phases(phi1, phi2), delta_p)
            for delta_p, phi1, phi2 in chunk
        ]

    async def _evaluate_all(
        self, p: SystemParams, points: List[GridPoint]
    ) -> List[IntensityRecord]:
        chunks = self._chunk_points(points)
        logger.debug(
            f"Evaluating {len(points)} points in {len(chunks)} chunks on {self.max_workers} workers"
        )
        # gather keeps submission order, so rows come back row-major whatever finishes first.
        results = await asyncio.gather(
            *(self._run_in_thread(self._evaluate_chunk, p, chunk) for chunk in chunks)
        )
        return [record for chunk in results for record in chunk]

    def run(self, p: SystemParams, axes: Sequence[Axis], delta_p: float = 0.0) -> SweepResult:
        points = grid_points(p, delta_p, axes)
        records = asyncio.run(self._evaluate_all(p, points))
        result = SweepResult(params=p, delta_p=delta_p, axes=tuple(axes), records=records)
        if result.flagged_count:
            logger.warning(
                f"{result.flagged_count} of {len(records)} points flagged near-singular"
            )
        logger.info(
            f"Sweep over {[a.describe() for a in axes]} done: {len(records)} rows"
        )
        return result


def run_sweep(
    p: SystemParams,
    axes: Sequence[Axis],
    delta_p: float = 0.0,
    workers: Optional[int] = None,
    chunk_size: int = DEFAULT_SWEEP_CHUNK_SIZE,
) -> SweepResult:
    with SweepRunner(max_workers=workers or DEFAULT_SWEEP_WORKERS, chunk_size=chunk_size) as runner:
        return runner.run(p, axes, delta_p)


def sweep_1d(
    p: SystemParams,
    axis: Axis,
    delta_p: float = 0.0,
    workers: Optional[int] = None,
    chunk_size: int = DEFAULT_SWEEP_CHUNK_SIZE,
) -> SweepResult:
    return run_sweep(p, (axis,), delta_p, workers, chunk_size)


def sweep_2d(
    p: SystemParams,
    outer: Axis,
    inner: Axis,
    delta_p: float = 0.0,
    workers: Optional[int] = None,
    chunk_size: int = DEFAULT_SWEEP_CHUNK_SIZE,
) -> SweepResult:
    if outer.name == inner.name:
        raise ValueError(f"sweep axes must differ, got {outer.name} twice")
    return run_sweep(p, (outer, inner), delta_p, workers, chunk_size)


def point_result(p: SystemParams, delta_p: float = 0.0) -> SweepResult:
    """One point as a zero-axis result.

    Unlike a sweep row, a singular or non-passive point raises here.
    """
    record = intensity_ratios(p, delta_p)
    absorption_of(record)
    return SweepResult(params=p, delta_p=delta_p, axes=(), records=[record])

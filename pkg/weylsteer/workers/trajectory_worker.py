"""
Trajectory worker: samples a chamber trajectory in ordered chunks on a thread pool.
"""

import concurrent.futures

import numpy as np

from .base_worker import BaseWorker
from ..constants import MAX_WORKERS, TRAJECTORY_CHUNK
from ..core.errors import SolverError
from ..core.steer2q import HamiltonianSpec, WeylTrajectory, check_time_grid, weyl_trajectory


class TrajectoryWorker(BaseWorker):
    """
    Worker для построения траектории в камере Вейля.

    Сетка времени режется на последовательные куски; куски считаются
    параллельно, а результат собирается в исходном порядке.
    """

    def __init__(self, hamiltonian: HamiltonianSpec, t_grid, sign: int = 1,
                 chunk_size: int = TRAJECTORY_CHUNK, max_workers: int = MAX_WORKERS,
                 on_progress=None, on_item=None):
        """
        Args:
            hamiltonian: Постоянный гамильтониан
            t_grid: Возрастающая сетка времени
            sign: +1 для e^{-iHt}, −1 для e^{+iHt}
            chunk_size: Точек в одном куске
            max_workers: Размер пула потоков
        """
        super().__init__(on_progress=on_progress, on_item=on_item)
        self.hamiltonian = hamiltonian
        self.t_grid = check_time_grid(t_grid, sign)
        self.sign = sign
        self.chunk_size = max(1, int(chunk_size))
        self.max_workers = max(1, int(max_workers))

    def chunks(self) -> list[np.ndarray]:
        return [self.t_grid[i:i + self.chunk_size] for i in range(0, self.t_grid.size, self.chunk_size)]

    def _run_chunk(self, chunk: np.ndarray) -> WeylTrajectory | None:
        if self.stop_requested:
            return None
        return weyl_trajectory(self.hamiltonian, chunk, self.sign)

    def work(self) -> WeylTrajectory | None:
        chunks = self.chunks()
        self._emit_progress(self._fmt('log.worker.trajectory_start', points=self.t_grid.size, chunks=len(chunks)))
        pieces: list[WeylTrajectory | None] = [None] * len(chunks)
        with concurrent.futures.ThreadPoolExecutor(max_workers=min(self.max_workers, len(chunks))) as pool:
            futures = {pool.submit(self._run_chunk, chunk): index for index, chunk in enumerate(chunks)}
            done = 0
            for future in concurrent.futures.as_completed(futures):
                pieces[futures[future]] = future.result()
                done += 1
                self._emit_item(done, len(chunks))
                if self.stop_requested:
                    for pending in futures:
                        pending.cancel()
                    break
        if self.stop_requested or any(p is None for p in pieces):
            self._emit_progress(self._t('log.worker.trajectory_stopped'))
            return None
        samples = tuple(s for piece in pieces for s in piece.samples)
        self._emit_progress(self._fmt('log.worker.trajectory_done', points=len(samples)))
        return WeylTrajectory(samples=samples, sign=self.sign)


def compute_trajectory(hamiltonian: HamiltonianSpec, t_grid, sign: int = 1, **kwargs) -> WeylTrajectory:
    """Run a TrajectoryWorker to completion and return its trajectory.

    Re-raises the worker's failure; a run that stopped before every chunk
    finished raises SolverError.
    """
    worker = TrajectoryWorker(hamiltonian, t_grid, sign, **kwargs)
    worker.start()
    worker.join()
    if worker.failed:
        raise worker.error
    if worker.result is None:
        raise SolverError(worker._fmt('error.worker.trajectory_incomplete', points=worker.t_grid.size))
    return worker.result

# Workers module for WeylSteer

from .base_worker import BaseWorker
from .trajectory_worker import TrajectoryWorker, compute_trajectory

__all__ = [
    'BaseWorker',
    'TrajectoryWorker',
    'compute_trajectory',
]

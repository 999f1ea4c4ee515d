"""
WeylSteer

Синтез однокубитных импульсных программ на сфере Блоха и управление
двухкубитными гейтами в камере Вейля.
"""

from .constants import APP_VERSION as __version__

__all__ = ['__version__']

from .settings import (
    FIELD_SETTINGS,
    CURVE_SETTINGS,
    FACTOR_SETTINGS,
    TORSION_SETTINGS,
    TOWER_SETTINGS,
    RUN_SETTINGS,
    ATLAS_SETTINGS
)

__all__ = [
    'FIELD_SETTINGS',
    'CURVE_SETTINGS',
    'FACTOR_SETTINGS',
    'TORSION_SETTINGS',
    'TOWER_SETTINGS',
    'RUN_SETTINGS',
    'ATLAS_SETTINGS'
]

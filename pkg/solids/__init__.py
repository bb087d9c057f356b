"""
Pappus solid registry
"""
from typing import Any, Dict, List, Optional, Type

from ambient import Geometry
from errors import InputFormatError

from .base import BaseSolid
from .cones import BallBaseCone, RightCircularCone
from .ngon_cone import NgonCone
from .torus import Torus

_SOLID_REGISTRY: Dict[str, Type[BaseSolid]] = {
    solid.key: solid
    for solid in (
        Torus,
        RightCircularCone,
        BallBaseCone,
        NgonCone,
    )
}


def get_solid_class(key: str) -> Optional[Type[BaseSolid]]:
    """Return the solid class registered under key"""
    if not key:
        return None
    return _SOLID_REGISTRY.get(key.lower())


def list_registered_solids() -> List[Dict[str, Any]]:
    """Describe every registered solid for `volume --list`"""
    return [solid.describe() for solid in _SOLID_REGISTRY.values()]


def make_solid(key: str, geometry: Geometry, **params: Any) -> BaseSolid:
    solid_class = get_solid_class(key)
    if solid_class is None:
        raise InputFormatError(f"Unknown solid {key!r}; expected one of {sorted(_SOLID_REGISTRY)}")
    return solid_class(geometry, **params)


def build_solid(spec: Dict[str, Any]) -> BaseSolid:
    """Parse {"solid": key, "geometry": {...} | kind, "params": {...}}

    A bare geometry kind takes the solid's own dimension ("n" of a ball-cone,
    else 3).
    """
    if not isinstance(spec, dict):
        raise InputFormatError("Solid spec must be a JSON object")
    unknown = set(spec) - {'solid', 'geometry', 'params'}
    if unknown:
        raise InputFormatError(f"Unknown solid-spec keys: {sorted(unknown)}")
    key = spec.get('solid')
    solid_class = get_solid_class(key) if isinstance(key, str) else None
    if solid_class is None:
        raise InputFormatError(f"Unknown solid {key!r}; expected one of {sorted(_SOLID_REGISTRY)}")
    params = spec.get('params') or {}
    if not isinstance(params, dict):
        raise InputFormatError("Solid 'params' must be an object")
    geometry = spec.get('geometry')
    if isinstance(geometry, str):
        n = params.get('n', solid_class.default_dimension) if solid_class is BallBaseCone else solid_class.default_dimension
        geometry = Geometry(geometry, n)
    else:
        geometry = Geometry.from_dict(geometry)
    return solid_class(geometry, **params)


__all__ = [
    "BaseSolid",
    "get_solid_class",
    "list_registered_solids",
    "make_solid",
    "build_solid",
]

"""Size guardrails shared by the constructors and verifiers."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Bounds:
    field_order: int = 2**16
    ag_points: int = 4096
    class_count: int = 10**5
    projective_points: int = 10**5
    discover_vertices: int = 2000
    iso_vertices: int = 500


DEFAULT_BOUNDS = Bounds()

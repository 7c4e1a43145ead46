"""Numerical tolerances shared by every module.

All thresholds are expressed relative to the unit circumcircle of the control
points, so they apply unchanged to any triangle inscribed in it.
"""

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # geometry_core
    angle_sum: float = 1e-12
    unit_norm: float = 1e-12
    distinct_angles: float = 1e-6
    control_point: float = 1e-9
    tangent_z2: float = 1e-12
    trilateration_rel: float = 1e-9

    # p3p_solver
    leading_coefficient: float = 1e-12
    newton_residual: float = 1e-12
    newton_max_iter: int = 50
    cluster_radius: float = 1e-6
    split_residual: float = 1e-6
    triplet_residual: float = 1e-8
    imag: float = 1e-8
    positive: float = 1e-8

    # rieck_entities
    zero_height: float = 1e-9
    eta_degenerate: float = 1e-12
    singular_condition: float = 1e8

    # csdc_surface
    min_sweep_height: float = 0.05
    source_match: float = 1e-6
    companion_off_dc: float = 1e-4
    membership: float = 1e-6
    dedupe_distance: float = 1e-4
    gap_ratio: float = 10.0

    # partition_verifier
    bisection: float = 1e-10

    def with_overrides(self, **kw) -> "Tolerances":
        return replace(self, **kw)

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT = Tolerances()

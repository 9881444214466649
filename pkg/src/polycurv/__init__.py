"""Forman-Ricci and effective-resistance curvature of polytope skeletons."""
from .errors import HypothesisError, PlanarCodeError, PolyCurvError, SkeletonError
from .skeleton import (
    FlagCounts,
    Graph,
    RotationSystem,
    TwoSkeleton,
    attach_faces,
    build_graph,
    cartesian_product,
    face_vector,
    faces_from_rotation,
    flag_counts,
    graph_diameter,
    planar_dual,
)

__version__ = "0.1.0"

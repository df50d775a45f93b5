"""Probability of sufficient field-of-view overlap for self-calibration of
multi-view camera setups with noisy pointing."""
from .camera import (CameraIntrinsics, CameraPose, FootprintPolygon, anchor_footprint_dims,
                     frustum_rays, pixel_ray, project_footprint)
from .formation import FormationConfig, Scenario, build_scenario, camera_positions
from .geometry import NoiseModel, PerturbationSample, look_at, perturb, rodrigues, sample_perturbation
from .graph import ComponentHistogram, ConnectivityCriteria, build_graph, p_calib, pairwise_angle
from .montecarlo import EnsembleConfig, EnsembleStats, run_ensemble, run_sample
from .overlap import OverlapReport, absolute_overlap, convex_clip, overlap_report, polygon_area

__version__ = "0.1.0"

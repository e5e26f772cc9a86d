"""Tunable numerical constants, gathered in one place."""
from dataclasses import dataclass


@dataclass(frozen=True)
class NumericsConfig:
    # result length at which lp_mul switches from np.convolve to FFT
    fft_crossover: int = 64
    # absolute coefficient tolerance for pair_check
    pair_tol: float = 1e-8
    # eta_of grid size is this factor times the coefficient length
    eta_grid_factor: int = 16
    # roots a, b are partners when |a * conj(b) - 1| <= pairing_tol
    pairing_tol: float = 1e-6
    # fallback for clustered roots: reflections must be roots in the backward sense
    pairing_backward_tol: float = 1e-10
    # radius, relative to the root, of the clusters compared by centroid when pairing fails
    cluster_tol: float = 1e-3
    # roots with ||a| - 1| <= circle_snap_tol are treated as lying on the circle
    circle_snap_tol: float = 1e-7
    # default margin for is_outer_poly
    outer_margin: float = 1e-9
    # enumerate_complements refuses b above this degree
    enumerate_max_degree: int = 12
    # above this degree is_outer_poly uses a winding-number count instead of roots
    root_degree_cap: int = 256
    # inlfft switches to layer stripping below this window length (1 = never)
    leaf_size: int = 1
    # tolerance on imaginary parts of gamma for QSP
    real_gate: float = 1e-9
    # slack for sup-norm admissibility checks of targets
    admissibility_slack: float = 1e-12
    # largest n the dense diagnostics accept
    dense_cap: int = 2048


DEFAULT = NumericsConfig()

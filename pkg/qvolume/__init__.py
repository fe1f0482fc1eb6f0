from qvolume.qcore import moments, op_family, op_via_hankel, orthogonality_residues
from qvolume.equilibrium import arc_geometry, density, equilibrium_measure_check
from qvolume.asymptotics import plancherel_rotach, weight_approx_error, zeros
from qvolume.arctic import arctic_curve, extended_airy, find_c_star, saddle
from qvolume.kernel import correlation, correlation_kernel, correlation_kernel_exact
from qvolume.sampler import enumerate_tilings, glauber_step, sample, stats, to_paths, from_paths

__version__ = "0.1.0"

__all__ = [
    'moments', 'op_family', 'op_via_hankel', 'orthogonality_residues',
    'arc_geometry', 'density', 'equilibrium_measure_check',
    'plancherel_rotach', 'weight_approx_error', 'zeros',
    'arctic_curve', 'extended_airy', 'find_c_star', 'saddle',
    'correlation', 'correlation_kernel', 'correlation_kernel_exact',
    'enumerate_tilings', 'glauber_step', 'sample', 'stats', 'to_paths', 'from_paths',
]

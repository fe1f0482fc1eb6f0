# Numerical configuration for qvolume
# Every value can be overridden from a JSON job file (see tools/qvolume_cli.py)

# === QUADRATURE ===
QUADRATURE_CONFIG = {
    'gauss_legendre_nodes': 96,      # nodes per panel for path integrals
    'measure_nodes': 64,             # angle nodes for the equilibrium mass
    'trapezoid_start': 64,           # circle rule, doubled until converged
    'trapezoid_cap': 2 ** 16,
    'relative_tol': 1e-11,
    'boundary_offsets': [1e-3, 2e-3, 3e-3, 4e-3],  # Richardson ladder
}

# === ROOT FINDING ===
ROOT_CONFIG = {
    'max_degree': 200,
    'max_iterations': 500,
    'step_tol': 1e-14,
    'residual_tol': 1e-8,
    'start_offset': 0.37,            # angular offset of the initial circle
    'extra_digits': 30,              # on top of N (c + 1) digits for P_N
    'polyroots_steps': 200,
}

# === ARCTIC GEOMETRY ===
ARCTIC_CONFIG = {
    'saddle_tol': 1e-8,              # |Phi'(s)| filter for quartic roots
    'boundary_tol': 1e-5,            # |Im s| on the arctic curve
    'cauchy_nodes': 64,
    'cauchy_radius': 0.25,           # fraction of distance to nearest cut
    'c_star_bracket': [2.0, 5.0],
    'c_star_xtol': 1e-12,
    'scan_points': 4000,
    'level_step': 1e-3,              # times e^{c/2}
    'level_arc_budget': 40.0,
}

# === KERNEL ===
KERNEL_CONFIG = {
    'start_nodes': 32,
    'node_cap': 2 ** 12,             # per contour; the 2D grid is node_cap^2
    'relative_tol': 1e-9,
    'imag_tol': 1e-8,
    'z_radius_factor': 1.0,          # times q^N, see kernel.default_contours
    'w_radius_factor': 1.5,
}

# === EDGE SCALING ===
EDGE_CONFIG = {
    'sigma': 1.0,
    'sigma_prime': 1.0,
    'omega': 1.0,
    'delta': 0.1,
    'N_list': [32, 64, 128],
    'extra_digits': 50,
}

# === SAMPLER ===
SAMPLER_CONFIG = {
    'max_enumeration_N': 4,
    'burn_in_factor': 1,             # burn-in = factor * N^3 sweeps
    'seed': 20240917,
}

# === OUTPUT ===
OUTPUT_CONFIG = {
    'float_digits': 12,
    'summary_name': 'summary.json',
}

SECTIONS = {
    'QUADRATURE_CONFIG': QUADRATURE_CONFIG,
    'ROOT_CONFIG': ROOT_CONFIG,
    'ARCTIC_CONFIG': ARCTIC_CONFIG,
    'KERNEL_CONFIG': KERNEL_CONFIG,
    'EDGE_CONFIG': EDGE_CONFIG,
    'SAMPLER_CONFIG': SAMPLER_CONFIG,
    'OUTPUT_CONFIG': OUTPUT_CONFIG,
}


def merge(overrides):
    """Merge {section: {key: value}} over the defaults, one level deep."""
    for section, values in (overrides or {}).items():
        if section not in SECTIONS:
            raise ValueError(f"unknown config section {section!r}")
        for key, value in values.items():
            if key not in SECTIONS[section]:
                raise ValueError(f"unknown key {key!r} in {section}")
            SECTIONS[section][key] = value


def snapshot():
    return {name: dict(values) for name, values in SECTIONS.items()}

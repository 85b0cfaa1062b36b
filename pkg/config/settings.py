# config/settings.py
"""
Central Configuration File
All computation caps and run defaults in one place
"""

from pathlib import Path

# =============================================================================
# FIELD SETTINGS
# =============================================================================
FIELD_SETTINGS = {
    "degree_cap": 256,
    # numpy int64 holds p^2 * d comfortably below this prime; larger primes
    # fall back to object arrays of Python ints
    "dtype_switch_prime": 2 ** 20,
}

# =============================================================================
# CURVE SETTINGS
# =============================================================================
CURVE_SETTINGS = {
    "enumeration_bound": 10 ** 6,
}

# =============================================================================
# FACTORIZATION SETTINGS
# =============================================================================
FACTOR_SETTINGS = {
    "trial_bound": 10 ** 6,
    "rho_max_seeds": 64,
}

# =============================================================================
# TORSION SETTINGS
# =============================================================================
TORSION_SETTINGS = {
    "budget_factor": 64,        # samples allowed per l^j before giving up
    "exhaustive_bound": 10 ** 6,
}

# =============================================================================
# TOWER SETTINGS
# =============================================================================
TOWER_SETTINGS = {
    "valuation_window": 6,
    "bits_budget": 10 ** 5,
    "stable_differences": 3,
    "verify_window": {2: 3, 3: 3, 5: 1, 7: 1},
    "verify_window_default": 1,
}

# =============================================================================
# RUN SETTINGS
# =============================================================================
RUN_SETTINGS = {
    "seed": 0,
    "format": "human",
    "formats": ("human", "csv", "kv"),
    "workers": 1,
    "m_range": (1, 1),
    "n": 1,
}

# =============================================================================
# ATLAS SETTINGS
# =============================================================================
ATLAS_SETTINGS = {
    "data_dir": Path(__file__).resolve().parent.parent / "atlas" / "data",
    "checksum_file": "SHA256SUMS",
    "tables": ("I", "II", "III", "IV", "V"),
    "fields": {"I": 3, "II": 5, "III": 7, "IV": 11, "V": 13},
    "row_counts": {"I": 8, "II": 12, "III": 18, "IV": 22, "V": 32},
    # tables that print the K_4 ... K_12 extension columns
    "extended_tables": ("I", "II", "III"),
    # regenerated tables carry the K_4 ... K_12 and sylow columns up to this field
    "extended_field_max": 7,
    "kgroup_columns": ("K2_part2", "K4", "K6", "K8", "K10", "K12"),
}

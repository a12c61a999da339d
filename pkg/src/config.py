"""
zerohull configuration
Module-level defaults, overridable from the environment.
"""

import os

# ========================================
# ENUMERATION
# ========================================

# Largest |S| the exponential subset scan will accept
ORACLE_CAP = int(os.getenv('ZEROHULL_ORACLE_CAP', '16'))

# Subsets are stored as Python int bitmasks serialized through 64-bit fields
MASK_LIMIT = 64

# ========================================
# GENERATION
# ========================================

REJECTION_BUDGET = int(os.getenv('ZEROHULL_REJECTION_BUDGET', '10000'))
DEFAULT_COORD_BOUND = int(os.getenv('ZEROHULL_COORD_BOUND', '100'))

# ========================================
# BATCH / CLI
# ========================================

DEFAULT_JOBS = int(os.getenv('ZEROHULL_JOBS', '1'))
LOG_LEVEL = os.getenv('ZEROHULL_LOG_LEVEL', 'WARNING')

# Exit codes
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FALSIFIED = 2

"""qcsearch: gate-efficient quantum circuit discovery.

Grows a deduplicated graph of circuit unitaries by importance-weighted
Monte Carlo sampling, jointly tunes continuous gate parameters by gradient
descent, and ships random-search, genetic, particle-filter, and
simulated-annealing baselines under identical sample accounting.
"""

__version__ = "0.1.0"

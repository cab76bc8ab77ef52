"""Task definitions: unitary synthesis, CA state preparation, classification."""

from .base import Task
from .cellular import CaStatePrepTask, ca_evolve, ca_loss, ca_step, rule_from_code, wolfram_code
from .synthesis import UnitarySynthesisTask, dft_matrix

__all__ = [
    "Task",
    "UnitarySynthesisTask",
    "dft_matrix",
    "CaStatePrepTask",
    "ca_loss",
    "ca_step",
    "ca_evolve",
    "wolfram_code",
    "rule_from_code",
]

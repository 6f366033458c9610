from dataclasses import dataclass

import numpy as np

from cv_entanglement.step_01_phase_space.methods.symplectic_form import mode_permutation
from cv_entanglement.utils.errors import StructuralError


@dataclass(frozen=True)
class ModePartition:
    """Assignment of every mode to party 'A' or party 'B'."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(str(label).upper() for label in self.labels)
        if not labels or set(labels) - {"A", "B"}:
            raise StructuralError(f"Partition labels must be 'A' or 'B', got {self.labels}")
        if "A" not in labels or "B" not in labels:
            raise StructuralError(f"Both parties need at least one mode, got {''.join(labels)}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_labels(cls, labels):
        return cls(tuple(labels))

    @classmethod
    def split(cls, n_a, n_b):
        return cls(("A",) * n_a + ("B",) * n_b)

    @property
    def n(self):
        return len(self.labels)

    @property
    def modes_a(self):
        return [k for k, label in enumerate(self.labels) if label == "A"]

    @property
    def modes_b(self):
        return [k for k, label in enumerate(self.labels) if label == "B"]

    @property
    def n_a(self):
        return len(self.modes_a)

    @property
    def n_b(self):
        return len(self.modes_b)

    def permutation(self):
        # P @ gamma @ P.T lists all A modes before all B modes
        return mode_permutation(self.modes_a + self.modes_b)

    def momentum_flip(self):
        flips = np.ones(2 * self.n)
        for mode in self.modes_b:
            flips[2 * mode + 1] = -1.0
        return np.diag(flips)

    def check_dimension(self, matrix):
        if np.asarray(matrix).shape[0] != 2 * self.n:
            raise StructuralError(f"Partition '{self}' covers {self.n} modes, matrix has dimension {np.asarray(matrix).shape[0]}")

    def __str__(self):
        return "".join(self.labels)


def default_partition(n):
    # First half of the modes to A, the rest to B
    if n < 2:
        raise StructuralError(f"A bipartition needs at least two modes, got {n}")
    return ModePartition.split(n // 2, n - n // 2)


def resolve_partition(partition, n):
    if partition is None:
        return default_partition(n)
    if isinstance(partition, ModePartition):
        return partition
    return ModePartition.from_labels(partition)

import json
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, field_validator, model_validator

from cv_entanglement.step_01_phase_space.methods.states import GaussianState
from cv_entanglement.utils.errors import StructuralError

SIGNIFICANT_DIGITS = 17


class StateFile(BaseModel):
    n: int
    gamma: List[List[float]]
    d: Optional[List[float]] = None
    partition: Optional[str] = None

    @field_validator("n")
    @classmethod
    def positive_modes(cls, n):
        if n < 1:
            raise ValueError(f"n must be at least 1, got {n}")
        return n

    @model_validator(mode="after")
    def consistent_shapes(self):
        dim = 2 * self.n
        if len(self.gamma) != dim or any(len(row) != dim for row in self.gamma):
            raise ValueError(f"gamma must be {dim}x{dim} for n={self.n}")
        if self.d is not None and len(self.d) != dim:
            raise ValueError(f"d must have length {dim} for n={self.n}")
        if self.partition is not None:
            if len(self.partition) != self.n or set(self.partition) - {"A", "B"}:
                raise ValueError(f"partition must be {self.n} labels from 'A'/'B', got '{self.partition}'")
        return self

    def to_state(self):
        return GaussianState(np.array(self.gamma), None if self.d is None else np.array(self.d))


class ChannelFile(BaseModel):
    A: List[List[float]]
    G: List[List[float]]
    shift: Optional[List[float]] = None

    @model_validator(mode="after")
    def consistent_shapes(self):
        rows = len(self.A)
        if rows == 0 or any(len(row) != len(self.A[0]) for row in self.A):
            raise ValueError("A must be a non-empty rectangular matrix")
        if len(self.G) != rows or any(len(row) != rows for row in self.G):
            raise ValueError(f"G must be {rows}x{rows} to match A")
        if self.shift is not None and len(self.shift) != rows:
            raise ValueError(f"shift must have length {rows}")
        return self


def _round(values):
    # 17 significant digits reproduce every double exactly
    return [float(format(v, f".{SIGNIFICANT_DIGITS}g")) for v in values]


def state_to_file(state, partition=None):
    return StateFile(
        n=state.n,
        gamma=[_round(row) for row in state.cov],
        d=_round(state.disp),
        partition=partition,
    )


def read_state_file(path):
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"State file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        return StateFile.model_validate(json.load(f))


def read_state(path):
    return read_state_file(path).to_state()


def write_state(state, path=None, partition=None):
    """Serialise ``state``; returns the JSON text and writes it when ``path`` is given."""
    text = json.dumps(state_to_file(state, partition).model_dump(exclude_none=True), indent=2, ensure_ascii=False)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    return text


def read_channel_file(path):
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Channel file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        return ChannelFile.model_validate(json.load(f))


def _read_numbers(path):
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    text = path.read_text(encoding="utf-8").strip()
    if text.startswith("["):
        return json.loads(text)
    try:
        rows = [[float(x) for x in line.split()] for line in text.splitlines() if line.strip()]
    except ValueError as e:
        raise StructuralError(f"Could not parse numbers in {path}: {e}")
    return rows


def read_matrix(path):
    matrix = np.array(_read_numbers(path), dtype=float)
    if matrix.ndim != 2:
        raise StructuralError(f"Expected a matrix in {path}, got array of shape {matrix.shape}")
    return matrix


def read_vector(path):
    return np.array(_read_numbers(path), dtype=float).reshape(-1)

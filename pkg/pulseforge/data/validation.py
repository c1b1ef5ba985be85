"""
Data validation utilities for pulseforge inputs and artifacts
"""

from typing import Any, Dict, List, Sequence

import numpy as np


class DataValidator:
    """Data validation utilities"""

    @staticmethod
    def validate_generate_request(pairs: int, seed: int, threads: int) -> List[str]:
        """Validate dataset generation flags"""
        errors = []

        if pairs < 1:
            errors.append("pairs must be at least 1")

        if seed < 0:
            errors.append("seed must be non-negative")

        if threads < 1:
            errors.append("threads must be at least 1")

        return errors

    @staticmethod
    def validate_profiles(profiles: np.ndarray, input_len: int) -> List[str]:
        """Validate a profile matrix before training or evaluation"""
        errors = []

        if profiles.ndim != 2:
            errors.append(f"profiles must be a 2-D array, got {profiles.ndim} dimensions")
            return errors

        if profiles.shape[1] != input_len:
            errors.append(f"profiles have {profiles.shape[1]} samples, architecture expects {input_len}")

        if profiles.shape[0] < 2:
            errors.append("at least two profiles are required")

        if not np.all(np.isfinite(profiles)):
            errors.append("profiles contain non-finite values")

        return errors

    @staticmethod
    def validate_split(indices: Sequence[int], count: int) -> List[str]:
        """Validate stored held-out indices against a dataset"""
        errors = []

        if len(indices) == 0:
            errors.append("split metadata is missing or empty")

        out_of_range = [i for i in indices if not 0 <= i < count]
        if out_of_range:
            errors.append(f"{len(out_of_range)} held-out indices exceed the dataset size {count}")

        if len(set(indices)) != len(indices):
            errors.append("held-out indices contain duplicates")

        return errors

    @staticmethod
    def validate_gmm_document(data: Any) -> List[str]:
        """Validate a GMM JSON document"""
        errors = []

        if not isinstance(data, dict):
            return ["GMM document must be a JSON object"]

        required_fields = ["weights", "means", "covariances"]
        for field in required_fields:
            if field not in data:
                errors.append(f"Missing required field: {field}")

        if "weights" in data:
            weights = np.asarray(data["weights"], dtype=np.float64)
            if weights.ndim != 1 or weights.size == 0:
                errors.append("weights must be a non-empty list")
            elif np.any(weights < 0) or not np.isclose(weights.sum(), 1.0, atol=1e-6):
                errors.append("weights must be non-negative and sum to 1")

        return errors

    @staticmethod
    def validate_indices(indices: Dict[str, int], count: int) -> List[str]:
        """Validate named profile indices such as --from and --to"""
        errors = []

        for name, value in indices.items():
            if not 0 <= value < count:
                errors.append(f"{name} index {value} out of range [0, {count})")

        return errors

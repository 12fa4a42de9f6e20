"""shiftlab: thermodynamic formalism and word combinatorics for concrete shift spaces."""
from __future__ import annotations

__version__ = "0.1.0"

from .models import (SFT, BetaShift, BlockCode, CapExceeded, FullShift, GeneratedCoded,
                     LanguageSlice, SGap, ShiftModel, Staircase, apply_factor_code,
                     enumerate_language, membership, model_from_config)
from .thermo import (Potential, hyperbolicity_check, partition_sum, pressure_bracket,
                     sup_ergodic_bracket)

__all__ = [
    "__version__", "SFT", "BetaShift", "BlockCode", "CapExceeded", "FullShift",
    "GeneratedCoded", "LanguageSlice", "SGap", "ShiftModel", "Staircase",
    "apply_factor_code", "enumerate_language", "membership", "model_from_config",
    "Potential", "hyperbolicity_check", "partition_sum", "pressure_bracket",
    "sup_ergodic_bracket",
]

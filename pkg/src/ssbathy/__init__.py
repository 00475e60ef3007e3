"""Seabed bathymetry reconstruction from sidescan sonar.

End-to-end toolkit: synthetic seabed and survey generation, forward
sidescan simulation, waterfall dataset construction, a convolutional
depth-and-uncertainty regressor, confidence-weighted grid fusion, and
an evaluation/ablation harness, wired together by a batch CLI.
"""

__version__ = "0.1.0"

from ssbathy.errors import DomainError, ParameterError

__all__ = ["DomainError", "ParameterError", "__version__"]

"""Optimal dividends with capital injections and fixed transaction costs
for spectrally negative Levy risk processes.

Core layout:

* :mod:`.levy` — model specification (Laplace exponent, right inverse);
* :mod:`.scale` — q-scale functions via Laplace inversion plus exact
  exponential-mixture backends;
* :mod:`.dividends` — barrier and reflected-pair policies and their values;
* :mod:`.constrained` — injection-budget constraint via Lagrangian duality;
* :mod:`.simulate` — Monte Carlo validator with bridge-exact boundaries;
* :mod:`.datasets` — tabular datasets behind the reference figures;
* :mod:`.service` — FastAPI wrapper; :mod:`.cli` — thin command-line client.
"""

from .errors import DomainError, NumericalError
from .levy import CompoundPoisson, Exponential, Gamma, LevyModel, paper_model
from .scale import ScaleEngine

__all__ = [
    "CompoundPoisson",
    "DomainError",
    "Exponential",
    "Gamma",
    "LevyModel",
    "NumericalError",
    "ScaleEngine",
    "paper_model",
]

__version__ = "0.1.0"

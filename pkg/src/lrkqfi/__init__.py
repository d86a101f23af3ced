"""Quantum Fisher information of the long-range Kitaev chain and critical-sensing experiments."""
__version__ = "0.1.0"

from .model import (Convention, ModelParams, Momentum, ModeState, QfiMatrix2,  # noqa: E402
                    dispersion_curve, ground_state_fidelity, mode_qfi, mode_state,
                    momentum_grid, pairing_function, qfi_matrix, qfi_mu, qfi_mu_oracle)
from .asymptotics import expansion_coefficient, pairing_expansion, predicted_max_qfi, zeta  # noqa: E402,E501
from .fitting import FitResult, exp_decay_fit, linear_fit, power_law_fit  # noqa: E402
from .table import SweepTable, read_csv, write_csv  # noqa: E402

"""Secure and green RSMA-ISAC beamforming optimization toolkit."""

from .config import SystemConfig, RicianParams, db2lin, lin2db
from .channel import (ChannelSet, CsiUncertainty, build_channel_set,
                      steering_pair, steering_vector, perturb_csi,
                      csi_matrix_bound)
from .metrics import (BeamformerSet, Metrics, FeasibilityReport, evaluate,
                      check_feasibility, echo_scnr)

__version__ = "0.1.0"

__all__ = [
    "SystemConfig", "RicianParams", "db2lin", "lin2db",
    "ChannelSet", "CsiUncertainty", "build_channel_set",
    "steering_pair", "steering_vector", "perturb_csi", "csi_matrix_bound",
    "BeamformerSet", "Metrics", "FeasibilityReport", "evaluate",
    "check_feasibility", "echo_scnr",
]

"""Cyclic-shifted-IFFT selected mapping (SLM) for OFDM PAPR reduction."""
from .analysis import ccrr, ccrr_table, complexity_model, predicted_nonzero_taus, rho_profile
from .mc_sim import SimConfig, SimReport, ccdf_at, run_simulation
from .signal_core import CcdfCurve, PaprValue, ccdf_accumulate, map_16qam, papr
from .slm_conventional import SlmResult, gen_random_phase_vectors, run_conventional_slm
from .slm_cyclic import (GoodnessReport, ShiftTable, check_good_condition, equivalent_phase_vector,
                         gen_mj_shifts, gen_random_shifts, run_cyclic_slm)
from .transform import (OpCount, StageTapConfig, SubblockSet, TwiddleTable, combine_with_shifts,
                        direct_combine, ifft, ifft_to_stage)

__version__ = "0.1.0"

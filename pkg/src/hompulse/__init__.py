"""Two-photon interference between weak coherent pulse trains."""

__version__ = "0.1.0"

from .clicksim import DetectorModel, ScanPoint, ScanResult, estimate_visibility, run_point, run_scan
from .config import PulseTrainConfig
from .correlator import IntensityMoments, classical_visibility, cross_slot_correlation, same_slot_correlation
from .field import OpticalField, SpectralModel, DelayGeometry, beamsplitter_intensities, coherence_envelope
from .phase import IndependentRF, IndependentRFWithFMNoise, Synchronized, TrialKey, sample_phase_pair
from .quantum import SourceModel, SingleHeralded, WeakCoherent, oracle_visibility

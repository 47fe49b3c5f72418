"""
__init__.py

Package initialization file for ell1reg.
Re-exports the forecasters, the comparator oracle and the bound evaluators.
"""

# Version
__version__ = "1.0"
__description__ = "Online linear regression on l1-balls: adaptive forecasters and regret bounds"

# Import main components for easier access
try:
    from .core import Round, LossSpec, RegretTrace, Forecaster, NullForecaster, clip, alpha_loss, run_protocol, compute_regret
    from .errors import Ell1Error, ProtocolError, DimensionError, NonFiniteError, RegimeError, GridTooLargeError, ConvergenceError
    from .comparator import ComparatorResult, min_alpha_loss_l1, min_square_loss_l1, min_lip_loss_l1
    from .adaptive_eg import AdaptiveEGForecaster, adaptive_eg_square_forecaster, fixed_eta_eg_square_forecaster
    from .lipschitz import LipLoss, lip_eval, lip_gradient, update_threshold
    from .leg import LegForecaster, leg_forecaster
    from .ewa import EwaState, EwaForecaster, ewa_predict, ewa_feed
    from .maurey import MaureyGrid, MaureyForecaster, enumerate_grid, select_m, maurey_forecaster
    from .scaling import UGrid, ScalingForecaster, FullyAdaptiveForecaster, build_grid, build_adaptive_grid
    from .bounds import kappa, bound_theorem1, bound_corollary1, bound_corollary2, bound_theorem3, bound_theorem4
    from .sequences import StreamConfig, gen_uniform_bounded, gen_sparse_linear, gen_sinusoidal_model, gen_alternating_sign

    __all__ = [
        'Round',
        'LossSpec',
        'RegretTrace',
        'Forecaster',
        'NullForecaster',
        'clip',
        'alpha_loss',
        'run_protocol',
        'compute_regret',
        'Ell1Error',
        'ProtocolError',
        'DimensionError',
        'NonFiniteError',
        'RegimeError',
        'GridTooLargeError',
        'ConvergenceError',
        'ComparatorResult',
        'min_alpha_loss_l1',
        'min_square_loss_l1',
        'min_lip_loss_l1',
        'AdaptiveEGForecaster',
        'adaptive_eg_square_forecaster',
        'fixed_eta_eg_square_forecaster',
        'LipLoss',
        'lip_eval',
        'lip_gradient',
        'update_threshold',
        'LegForecaster',
        'leg_forecaster',
        'EwaState',
        'EwaForecaster',
        'ewa_predict',
        'ewa_feed',
        'MaureyGrid',
        'MaureyForecaster',
        'enumerate_grid',
        'select_m',
        'maurey_forecaster',
        'UGrid',
        'ScalingForecaster',
        'FullyAdaptiveForecaster',
        'build_grid',
        'build_adaptive_grid',
        'kappa',
        'bound_theorem1',
        'bound_corollary1',
        'bound_corollary2',
        'bound_theorem3',
        'bound_theorem4',
        'StreamConfig',
        'gen_uniform_bounded',
        'gen_sparse_linear',
        'gen_sinusoidal_model',
        'gen_alternating_sign',
    ]

except ImportError as e:
    print(f"Warning: Could not import all modules: {e}")

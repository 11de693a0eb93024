from .config import (
    COMMAND_CONFIGS,
    ConfigError,
    EvaluateConfig,
    PilingRunConfig,
    RunConfig,
    SampleConfig,
    TabulateConfig,
    TrainRunConfig,
    VerifyConfig,
    load_run_config,
)
from .main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, build_parser, main

__all__ = [
    "COMMAND_CONFIGS",
    "EXIT_FAILURE",
    "EXIT_OK",
    "EXIT_USAGE",
    "ConfigError",
    "EvaluateConfig",
    "PilingRunConfig",
    "RunConfig",
    "SampleConfig",
    "TabulateConfig",
    "TrainRunConfig",
    "VerifyConfig",
    "build_parser",
    "load_run_config",
    "main",
]

"""
Experiment Module
=================

Experiment and verification configurations plus the parameter-sweep runner.

An experiment names a catalog model, one or more catalog channels and one
swept variable. Every grid value is injected by name into the model and
channel parameters that declare it (`lambda` maps to the `lam` parameter);
`x` is the evaluation point itself. Points run in a thread pool and the
resulting rows are ordered by grid index, then by channel, before emission.

Usage:
    config = load_config("experiments/spin_meter_schemes.json")
    table = run_experiment(config, threads=4)
    write_text_file("spin_meter_schemes.csv", table.to_csv())
"""

# Python Imports
import logging
from concurrent.futures import ThreadPoolExecutor
from copy import deepcopy
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

# Library Imports
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

# Local Imports
from src.api.io.fs import read_json
from src.api.io.tables import ResultTable, columns_with_flag, config_hash
from src.core.catalog import ResolvedModel, build_channel, channel_entry, evaluate_channel, model_entry, \
    predict_retention, resolve_model, validate_params
from src.core.exceptions import ConfigError, LccError
from src.core.system_info import SystemInfo

logger = logging.getLogger(__name__)

SWEEP_PARAMETERS = {"x": None, "theta": "theta", "epsilon": "epsilon", "lambda": "lam", "ratio": "ratio"}
Quantity = Literal["gamma", "one_minus_gamma", "c", "eta", "p_check", "I_rho", "I_post", "residuals", "analytic"]


class Schema(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ModelSpec(Schema):
    name: str
    params: Dict[str, Any] = Field(default_factory=dict)


class ChannelSpec(Schema):
    name: str
    label: Optional[str] = None
    params: Dict[str, Any] = Field(default_factory=dict)

    @property
    def display(self) -> str:
        return self.label or self.name


class GridSpec(Schema):
    """Explicit values, or num points from start to stop on a linear or log scale."""

    values: Optional[List[float]] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    num: Optional[int] = Field(None, ge=1)
    scale: Literal["linear", "log"] = "linear"

    @model_validator(mode="after")
    def nonempty(self) -> 'GridSpec':
        if self.values is not None:
            if not self.values:
                raise ValueError("grid values must be nonempty")
        elif None in (self.start, self.stop, self.num):
            raise ValueError("grid needs either values or start, stop and num")
        elif self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise ValueError("log grid bounds must be positive")
        return self

    def points(self) -> List[float]:
        if self.values is not None:
            return [float(v) for v in self.values]
        if self.scale == "log":
            return [float(v) for v in np.geomspace(self.start, self.stop, self.num)]
        return [float(v) for v in np.linspace(self.start, self.stop, self.num)]


class SweepSpec(Schema):
    variable: Literal["x", "theta", "epsilon", "lambda", "ratio"]
    grid: GridSpec


class ExperimentConfig(Schema):
    """
    A parameter sweep over one model and one or more channels.

    Attributes:
        name (str): Experiment name.
        model (ModelSpec): Catalog model and its parameters.
        channels (List[ChannelSpec]): Catalog channels, evaluated in order.
        sweep (SweepSpec): The swept variable and its grid.
        x (float): Evaluation point when x is not swept.
        outputs (List[Quantity]): Reported quantities.
        seed (int): Seed handed to seeded catalog models.
        threads (Optional[int]): Worker count; --threads overrides it, config.yml supplies the default.
    """

    kind: Literal["run"] = "run"
    name: str
    model: ModelSpec
    channels: List[ChannelSpec] = Field(min_length=1)
    sweep: SweepSpec
    x: float = 0.0
    outputs: List[Quantity] = Field(default_factory=lambda: ["gamma", "c", "eta"], min_length=1)
    seed: int = 0
    threads: Optional[int] = Field(None, ge=1)


class InputCheck(Schema):
    """A POVM document, optionally evaluated on a point-state document."""

    povm: str
    state: Optional[str] = None
    expect: Literal["pass", "fail"] = "pass"


class VerifyConfig(Schema):
    """
    Selection and sizing of the verification suites.

    Attributes:
        suites (Optional[List[str]]): Suites to run; all discovered suites by default.
        trials (Dict[str, int]): Per-suite override of the randomized trial count.
        inputs (List[InputCheck]): Documents checked by the input suite.
    """

    kind: Literal["verify"] = "verify"
    name: str = "verify"
    seed: int = 0
    suites: Optional[List[str]] = None
    trials: Dict[str, int] = Field(default_factory=dict)
    inputs: List[InputCheck] = Field(default_factory=list)


def load_config(path: Union[str, Path]) -> Union[ExperimentConfig, VerifyConfig]:
    """
    Read and validate a JSON configuration, dispatching on its 'kind'.

    Relative document paths inside a verify config are resolved against the
    config file's directory.

    Raises:
        ConfigError: If the file is unreadable or invalid.
    """
    try:
        document = read_json(path)
    except (OSError, ValueError) as e:
        raise ConfigError(f"Cannot read configuration '{path}': {e}") from e
    if not isinstance(document, dict):
        raise ConfigError(f"Configuration '{path}' must be a JSON object")
    try:
        if document.get("kind", "run") == "verify":
            config = VerifyConfig.model_validate(document)
            base = Path(path).resolve().parent
            for check in config.inputs:
                check.povm = str(base / check.povm)
                if check.state:
                    check.state = str(base / check.state)
            return config
        config = ExperimentConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration '{path}': {e}") from e
    validate_experiment(config)
    return config


def _injected(params: Dict[str, Any], accepted: List[str], key: Optional[str], value: float) -> Dict[str, Any]:
    params = deepcopy(params)
    if key is not None and key in accepted:
        params[key] = value
    return params


def validate_experiment(config: ExperimentConfig) -> None:
    """
    Check catalog names, parameters and the swept variable before running.

    Raises:
        CatalogError: On unknown model or channel names.
        ConfigError: On invalid parameters or a variable nothing accepts.
    """
    model = model_entry(config.model.name)
    channels = [channel_entry(spec.name) for spec in config.channels]
    key = SWEEP_PARAMETERS[config.sweep.variable]
    if key is not None and key not in model.parameter_names() \
            and not any(key in entry.parameter_names() for entry in channels):
        raise ConfigError(f"Swept variable '{config.sweep.variable}' is not a parameter of "
                          f"'{config.model.name}' or of any channel")
    sample = config.sweep.grid.points()[0]
    validate_params(model, _injected(_model_params(config), model.parameter_names(), key, sample))
    for spec, entry in zip(config.channels, channels):
        validate_params(entry, _injected(spec.params, entry.parameter_names(), key, sample))
    labels = [spec.display for spec in config.channels]
    if len(set(labels)) != len(labels):
        raise ConfigError(f"Channel labels must be unique, got {labels}")


def _model_params(config: ExperimentConfig) -> Dict[str, Any]:
    params = dict(config.model.params)
    if "seed" in model_entry(config.model.name).parameter_names():
        params.setdefault("seed", config.seed)
    return params


def output_columns(config: ExperimentConfig) -> List[str]:
    columns = []
    for quantity in config.outputs:
        if quantity == "residuals":
            columns += ["residual_completeness", "residual_coherence"]
        else:
            columns.append(quantity)
    return columns_with_flag(columns, ["label", config.sweep.variable])


def _quantities(config: ExperimentConfig, record: Dict[str, Any], prediction: Optional[float]) -> Dict[str, float]:
    values = {
        "gamma": record["gamma"],
        "one_minus_gamma": 1.0 - record["gamma"],
        "c": record["c"],
        "eta": record["eta"],
        "p_check": record["p_check"],
        "I_rho": record["I_rho"],
        "I_post": record["I_post"],
        "residual_completeness": record["residual_completeness"],
        "residual_coherence": record["residual_coherence"],
    }
    if prediction is not None:
        values["analytic"] = prediction
    columns = output_columns(config)
    return {name: float(value) for name, value in values.items() if name in columns}


class SweepRunner:
    """
    Evaluates an ExperimentConfig point by point.

    The model is resolved once when the swept variable is not one of its
    parameters, and once per grid point otherwise.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.key = SWEEP_PARAMETERS[config.sweep.variable]
        self.model_entry = model_entry(config.model.name)
        self.channel_entries = [channel_entry(spec.name) for spec in config.channels]
        self.logger = logging.getLogger(__name__)
        self._shared_model: Optional[ResolvedModel] = None
        if self.key is None or self.key not in self.model_entry.parameter_names():
            self._shared_model = resolve_model(config.model.name, _model_params(config))

    def _model_at(self, value: float) -> ResolvedModel:
        if self._shared_model is not None:
            return self._shared_model
        params = _injected(_model_params(self.config), self.model_entry.parameter_names(), self.key, value)
        return resolve_model(self.config.model.name, params)

    def evaluate_point(self, index: int, value: float) -> List[Tuple[Dict[str, Any], Optional[str]]]:
        """
        Rows of one grid point, one per channel.

        Returns:
            List[Tuple[Dict[str, Any], Optional[str]]]: (row, error text or None).
        """
        variable = self.config.sweep.variable
        x = value if variable == "x" else self.config.x
        rows = []
        try:
            resolved = self._model_at(value)
        except LccError as e:
            self.logger.warning(f"Point {index} ({variable}={value:g}): model failed: {e}")
            return [({"label": spec.display, variable: value}, str(e)) for spec in self.config.channels]

        for spec, entry in zip(self.config.channels, self.channel_entries):
            base = {"label": spec.display, variable: value}
            params = _injected(spec.params, entry.parameter_names(), self.key, value)
            try:
                channel = build_channel(spec.name, params, resolved, x)
                record = evaluate_channel(resolved, channel, x).to_record()
                prediction = None
                if "analytic" in self.config.outputs:
                    prediction = predict_retention(spec.name, params, resolved, x)
                base.update(_quantities(self.config, record, prediction))
                base["failed"] = 0
                rows.append((base, None))
            except LccError as e:
                self.logger.warning(f"Point {index} ({variable}={value:g}), channel '{spec.display}' failed: {e}")
                rows.append((base, f"{spec.display} at {variable}={value!r}: {e}"))
        return rows


def run_experiment(config: ExperimentConfig, threads: int = 1, system_info: Optional[SystemInfo] = None) \
        -> ResultTable:
    """
    Run a sweep and collect a ResultTable.

    Args:
        config (ExperimentConfig): Validated configuration.
        threads (int): Worker count.
        system_info (Optional[SystemInfo]): Host information for the metadata line.

    Returns:
        ResultTable: Rows ordered by grid index, then channel; failed points flagged.
    """
    validate_experiment(config)
    runner = SweepRunner(config)
    grid = config.sweep.grid.points()
    logger.info(f"Running '{config.name}': {len(grid)} points x {len(config.channels)} channels "
                f"on {threads} thread(s)")

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futures = [pool.submit(runner.evaluate_point, index, value) for index, value in enumerate(grid)]
        results = [future.result() for future in futures]

    metadata = {
        "experiment": config.name,
        "config_hash": config_hash(config.model_dump(mode="json")),
        "seed": config.seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    metadata.update((system_info or SystemInfo()).run_metadata())
    table = ResultTable(output_columns(config), metadata=metadata)
    for point in results:
        for row, error in point:
            if error is None:
                table.append(row)
            else:
                table.append_failure(row, error)
    logger.info(f"Finished '{config.name}': {len(table.rows)} rows, {table.failed_rows} failed")
    return table

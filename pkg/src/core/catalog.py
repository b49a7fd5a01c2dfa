"""
Catalog Module
==============

Named model families and postselection channels addressable from experiment
configurations.

Every entry declares a pydantic parameter schema; unknown names raise
CatalogError and invalid parameters raise ConfigError, both before any
numerics run. A resolved model exposes the family on the full Hilbert space
and, for bipartite models, the BipartiteModel used by restricted channels.

Channels either act on the full space (evaluated with compression_report) or
on factor A of a bipartite model (evaluated with restricted_report).
"""

# Python Imports
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Type, Union

# Library Imports
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

# Local Imports
from src.api.io.codec import bipartite_model_from_doc, decode_array
from src.api.io.fs import read_json
from src.core.exceptions import CatalogError, ConfigError
from src.core.lcc import CompressionReport, GaugeSpec, build_lcc, compression_report, two_level_lcc
from src.core.models import DEFAULT_MODES, ThreeQubitModel, TwoLevelFamily, VonNeumannModel, lcc_angle, \
    meter_lcc_channel, random_family, random_sum_model, wva_angle, wva_channel
from src.core.povm import PovmSet
from src.core.qfi import ParametricPureState
from src.core.restricted import BipartiteModel, entangled_lcc, entangled_loss_prediction, restricted_report, \
    weak_entanglement_lcc

logger = logging.getLogger(__name__)


class Params(BaseModel):
    model_config = ConfigDict(extra="forbid")


EncodedArray = Dict[str, Any]


# Model parameter schemas

class TwoLevelParams(Params):
    Delta: float = 1.0


class VonNeumannParams(Params):
    theta: float = np.pi / 3
    sigma: float = Field(1.0, gt=0.0)
    n_modes: int = Field(DEFAULT_MODES, ge=2)


class ThreeQubitParams(Params):
    omega0: float = 1.0
    DeltaB: Optional[float] = None
    ratio: Optional[float] = Field(None, gt=0.0)
    theta: float = np.pi / 3
    p1: float = Field(2.0 / 3, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def one_scale(self) -> 'ThreeQubitParams':
        if (self.DeltaB is None) == (self.ratio is None):
            raise ValueError("give exactly one of DeltaB and ratio")
        return self


class ProductParams(Params):
    H_A: EncodedArray
    H_B: EncodedArray
    phi_A: EncodedArray
    phi_B: EncodedArray


class SumComponentParams(Params):
    weight: float = Field(gt=0.0)
    phi_A: EncodedArray
    phi_B: EncodedArray


class SumParams(Params):
    H_A: EncodedArray
    H_B: EncodedArray
    components: List[SumComponentParams] = Field(min_length=1)


class BipartiteFileParams(Params):
    path: str


class RandomFamilyParams(Params):
    seed: int = 0
    d: int = Field(4, ge=2)


class RandomSumParams(Params):
    seed: int = 0
    block_dims: List[int] = Field(default_factory=lambda: [3, 3], min_length=1)
    d_B: int = Field(2, ge=1)


# Channel parameter schemas

class IdentityParams(Params):
    pass


class ScaledRhoParams(Params):
    lam: Union[float, List[float]] = 0.25
    q: Optional[List[float]] = None
    x_star: Optional[float] = None


class JenneGaetaParams(Params):
    lam: float = Field(0.25, gt=0.0, lt=1.0)
    x_star: Optional[float] = None


class TwoLevelLccParams(Params):
    lam: float = Field(0.25, gt=0.0, lt=1.0)
    x_star: Optional[float] = None


class WvaParams(Params):
    theta_star: Optional[float] = None
    epsilon: Optional[float] = None

    @model_validator(mode="after")
    def one_angle(self) -> 'WvaParams':
        if (self.theta_star is None) == (self.epsilon is None):
            raise ValueError("give exactly one of theta_star and epsilon")
        return self


class QubitLccParams(Params):
    epsilon: float = 0.0


class MeterLccParams(Params):
    epsilon: float = Field(1e-4, gt=0.0, le=1.0)


class WeakEntanglementParams(Params):
    q: List[float] = Field(default_factory=lambda: [1.0], min_length=1)
    epsilon: float = Field(0.0, ge=0.0)
    swap: bool = False


class EntangledParams(Params):
    epsilon: float = Field(1e-4, ge=0.0)
    weights: Optional[List[List[float]]] = None
    support: Optional[List[int]] = None
    conjugate: bool = True


@dataclass
class ResolvedModel:
    """
    A catalog model built from its parameters.

    Attributes:
        name (str): Catalog name.
        family (ParametricPureState): The state family on the full space.
        bipartite (Optional[BipartiteModel]): The bipartite structure, if any.
        source (Any): The built model object (TwoLevelFamily, VonNeumannModel, ...).
    """

    name: str
    family: ParametricPureState
    bipartite: Optional[BipartiteModel] = None
    source: Any = None


class ChannelScope(Enum):
    FULL = "full"
    RESTRICTED = "restricted"


@dataclass
class Channel:
    """
    A built postselection channel.

    Attributes:
        povm (PovmSet): The POVM, on the full space or on factor A.
        scope (ChannelScope): Where the POVM acts.
        model (Optional[BipartiteModel]): The model whose factor A the POVM acts on.
    """

    povm: PovmSet
    scope: ChannelScope = ChannelScope.FULL
    model: Optional[BipartiteModel] = None


@dataclass(frozen=True)
class CatalogEntry:
    """
    A named builder with its parameter schema.

    Attributes:
        name (str): Name used in configurations.
        description (str): One-line description.
        params (Type[Params]): Parameter schema.
        builder (Callable): Builds the model or channel from validated parameters.
        predict (Optional[Callable]): Leading-order 1 − γ prediction, channels only.
    """

    name: str
    description: str
    params: Type[Params]
    builder: Callable
    predict: Optional[Callable] = None

    def parameter_names(self) -> List[str]:
        return list(self.params.model_fields)

    def describe(self) -> Dict[str, Any]:
        defaults = {}
        for key, info in self.params.model_fields.items():
            default = info.get_default(call_default_factory=True)
            defaults[key] = "required" if info.is_required() else default
        return {"name": self.name, "description": self.description, "params": defaults}


def _require(source: Any, kind: type, channel: str):
    if not isinstance(source, kind):
        raise ConfigError(f"Channel '{channel}' needs a {kind.__name__} model")
    return source


def _require_bipartite(resolved: ResolvedModel, channel: str) -> BipartiteModel:
    if resolved.bipartite is None:
        raise ConfigError(f"Channel '{channel}' needs a bipartite model, '{resolved.name}' is not one")
    return resolved.bipartite


# Model builders

def _two_level(p: TwoLevelParams) -> ResolvedModel:
    family = TwoLevelFamily(p.Delta)
    return ResolvedModel("two_level", family, source=family)


def _von_neumann(p: VonNeumannParams) -> ResolvedModel:
    model = VonNeumannModel(p.theta, p.sigma, p.n_modes)
    return ResolvedModel("von_neumann", model.family(), model.as_bipartite(), model)


def _three_qubit(p: ThreeQubitParams) -> ResolvedModel:
    if p.ratio is not None:
        model = ThreeQubitModel.for_ratio(p.ratio, p.omega0, p.theta, p.p1)
    else:
        model = ThreeQubitModel(p.omega0, p.DeltaB, p.theta, p.p1)
    return ResolvedModel("three_qubit", model.model.family(), model.model, model)


def _from_bipartite(name: str, model: BipartiteModel) -> ResolvedModel:
    return ResolvedModel(name, model.family(), model, model)


def _product(p: ProductParams) -> ResolvedModel:
    model = BipartiteModel.product(decode_array(p.H_A), decode_array(p.H_B),
                                   decode_array(p.phi_A), decode_array(p.phi_B))
    return _from_bipartite("product", model)


def _sum(p: SumParams) -> ResolvedModel:
    components = [(c.weight, decode_array(c.phi_A), decode_array(c.phi_B)) for c in p.components]
    return _from_bipartite("sum", BipartiteModel.sum(decode_array(p.H_A), decode_array(p.H_B), components))


def _bipartite_file(p: BipartiteFileParams) -> ResolvedModel:
    try:
        document = read_json(p.path)
    except (OSError, ValueError) as e:
        raise ConfigError(f"Cannot read bipartite model file '{p.path}': {e}") from e
    return _from_bipartite("bipartite_file", bipartite_model_from_doc(document))


def _random_family(p: RandomFamilyParams) -> ResolvedModel:
    family = random_family(np.random.default_rng(p.seed), p.d)
    return ResolvedModel("random_family", family, source=family)


def _random_sum(p: RandomSumParams) -> ResolvedModel:
    return _from_bipartite("random_sum", random_sum_model(np.random.default_rng(p.seed), p.block_dims, p.d_B))


# Channel builders, called as builder(resolved, params, x)

def _identity(resolved: ResolvedModel, p: IdentityParams, x: float) -> Channel:
    return Channel(PovmSet({"keep": np.eye(resolved.family.dim, dtype=complex)}, ("keep",)))


def _scaled_rho(resolved: ResolvedModel, p: ScaledRhoParams, x: float) -> Channel:
    lam = [p.lam] if isinstance(p.lam, float) else list(p.lam)
    gauge = GaugeSpec.scaled_rho(lam, p.q)
    return Channel(build_lcc(resolved.family, x if p.x_star is None else p.x_star, gauge))


def _jenne_gaeta(resolved: ResolvedModel, p: JenneGaetaParams, x: float) -> Channel:
    return Channel(build_lcc(resolved.family, x if p.x_star is None else p.x_star, GaugeSpec.jenne_gaeta(p.lam)))


def _two_level_lcc(resolved: ResolvedModel, p: TwoLevelLccParams, x: float) -> Channel:
    family = _require(resolved.source, TwoLevelFamily, "two_level_lcc")
    keep = two_level_lcc(x if p.x_star is None else p.x_star, family.Delta, p.lam)
    return Channel(PovmSet.complete_with_remainder({"keep": keep}, 2))


def _wva_theta_star(model: VonNeumannModel, p: WvaParams) -> float:
    return p.theta_star if p.theta_star is not None else wva_angle(model.theta, p.epsilon)


def _wva(resolved: ResolvedModel, p: WvaParams, x: float) -> Channel:
    model = _require(resolved.source, VonNeumannModel, "wva")
    return Channel(wva_channel(_wva_theta_star(model, p), model.N))


def _qubit_lcc(resolved: ResolvedModel, p: QubitLccParams, x: float) -> Channel:
    model = _require(resolved.source, VonNeumannModel, "qubit_lcc")
    return Channel(wva_channel(lcc_angle(model.theta, p.epsilon), model.N))


def _meter_lcc(resolved: ResolvedModel, p: MeterLccParams, x: float) -> Channel:
    model = _require(resolved.source, VonNeumannModel, "meter_lcc")
    return Channel(meter_lcc_channel(p.epsilon, model.N))


def _weak_entanglement(resolved: ResolvedModel, p: WeakEntanglementParams, x: float) -> Channel:
    model = _require_bipartite(resolved, "weak_entanglement_lcc")
    if p.swap:
        model = model.swapped()
    return Channel(weak_entanglement_lcc(model, p.q, p.epsilon), ChannelScope.RESTRICTED, model)


def _entangled(resolved: ResolvedModel, p: EntangledParams, x: float) -> Channel:
    model = _require_bipartite(resolved, "entangled_lcc")
    povm = entangled_lcc(model, p.weights, p.epsilon, x if p.conjugate else 0.0, p.support)
    return Channel(povm, ChannelScope.RESTRICTED, model)


# Leading-order predictions of 1 − γ

def _lossless(resolved: ResolvedModel, p: Params, x: float) -> float:
    return 1.0


def _wva_retention(resolved: ResolvedModel, p: WvaParams, x: float) -> float:
    model = _require(resolved.source, VonNeumannModel, "wva")
    half_offset = (_wva_theta_star(model, p) - model.theta + np.pi) / 2.0
    return 1.0 - np.cos(model.theta + half_offset) ** 2


def _meter_retention(resolved: ResolvedModel, p: MeterLccParams, x: float) -> float:
    model = _require(resolved.source, VonNeumannModel, "meter_lcc")
    return 1.0 - x ** 2 / (4.0 * model.sigma ** 2 * p.epsilon)


def _entangled_retention(resolved: ResolvedModel, p: EntangledParams, x: float) -> float:
    return 1.0 - entangled_loss_prediction(_require_bipartite(resolved, "entangled_lcc"))


MODELS: Dict[str, CatalogEntry] = {entry.name: entry for entry in [
    CatalogEntry("two_level", "ψ_x = cos(xΔ/2)|0⟩ + i sin(xΔ/2)|1⟩", TwoLevelParams, _two_level),
    CatalogEntry("von_neumann", "spin ⊗ Hermite–Gaussian meter, H = xσ_z⊗P_u", VonNeumannParams, _von_neumann),
    CatalogEntry("three_qubit", "entangled three-qubit Sum model", ThreeQubitParams, _three_qubit),
    CatalogEntry("product", "generic Product model H = x·H_A⊗H_B", ProductParams, _product),
    CatalogEntry("sum", "generic Sum model H = x·(H_A + H_B)", SumParams, _sum),
    CatalogEntry("bipartite_file", "bipartite model JSON document", BipartiteFileParams, _bipartite_file),
    CatalogEntry("random_family", "seeded random analytic family", RandomFamilyParams, _random_family),
    CatalogEntry("random_sum", "seeded random Sum model", RandomSumParams, _random_sum),
]}

CHANNELS: Dict[str, CatalogEntry] = {entry.name: entry for entry in [
    CatalogEntry("identity", "retain every sample (c = 1)", IdentityParams, _identity, _lossless),
    CatalogEntry("scaled_rho_lcc", "E_ω = q_ω ρ^⊥ + λ_ω ρ at x*", ScaledRhoParams, _scaled_rho, _lossless),
    CatalogEntry("jenne_gaeta_lcc", "E = I + (λ − 1)ρ at x*", JenneGaetaParams, _jenne_gaeta, _lossless),
    CatalogEntry("two_level_lcc", "exact two-level LCC", TwoLevelLccParams, _two_level_lcc, _lossless),
    CatalogEntry("wva", "spin postselection |φ_θ*⟩⟨φ_θ*| ⊗ I", WvaParams, _wva, _wva_retention),
    CatalogEntry("qubit_lcc", "spin postselection at θ* = −θ", QubitLccParams, _qubit_lcc, _lossless),
    CatalogEntry("meter_lcc", "meter postselection I ⊗ (Π_1 + εΠ_0)", MeterLccParams, _meter_lcc,
                 _meter_retention),
    CatalogEntry("weak_entanglement_lcc", "restricted LCC of a Product model", WeakEntanglementParams,
                 _weak_entanglement, _lossless),
    CatalogEntry("entangled_lcc", "energy-subspace restricted LCC of a Sum model", EntangledParams,
                 _entangled, _entangled_retention),
]}


def family_catalog() -> List[CatalogEntry]:
    return list(MODELS.values())


def channel_catalog() -> List[CatalogEntry]:
    return list(CHANNELS.values())


def _lookup(registry: Dict[str, CatalogEntry], kind: str, name: str) -> CatalogEntry:
    if name not in registry:
        raise CatalogError(kind, name, list(registry))
    return registry[name]


def validate_params(entry: CatalogEntry, params: Dict[str, Any]) -> Params:
    """
    Validate a parameter map against an entry's schema.

    Raises:
        ConfigError: On invalid or unknown parameters.
    """
    try:
        return entry.params.model_validate(params or {})
    except ValidationError as e:
        raise ConfigError(f"Invalid parameters for '{entry.name}': {e}") from e


def model_entry(name: str) -> CatalogEntry:
    return _lookup(MODELS, "model", name)


def channel_entry(name: str) -> CatalogEntry:
    return _lookup(CHANNELS, "channel", name)


def resolve_model(name: str, params: Optional[Dict[str, Any]] = None) -> ResolvedModel:
    entry = model_entry(name)
    resolved = entry.builder(validate_params(entry, params))
    logger.debug(f"Resolved model '{name}' (dim {resolved.family.dim})")
    return resolved


def build_channel(name: str, params: Optional[Dict[str, Any]], resolved: ResolvedModel, x: float) -> Channel:
    entry = channel_entry(name)
    return entry.builder(resolved, validate_params(entry, params), x)


def predict_retention(name: str, params: Optional[Dict[str, Any]], resolved: ResolvedModel, x: float) -> float:
    entry = channel_entry(name)
    return float(entry.predict(resolved, validate_params(entry, params), x))


def evaluate_channel(resolved: ResolvedModel, channel: Channel, x: float) -> CompressionReport:
    """Compression report of a built channel at x, in the picture the channel lives in."""
    if channel.scope is ChannelScope.RESTRICTED:
        return restricted_report(channel.model, x, channel.povm)
    return compression_report(resolved.family, x, channel.povm)

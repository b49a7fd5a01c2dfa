"""
JSON Codec Module

Import and export of POVMs, evaluated point states and bipartite models as
JSON documents.

Complex arrays are stored as {"shape": [...], "data": [[re, im], ...]} in
row-major order. Python's json module writes floats with repr(), which
round-trips every double exactly, so decode(encode(obj)) reproduces the
arrays bit for bit.

Document kinds:
    {"kind": "povm", "dim", "elements": [{"label", "matrix"}], "retained"}
    {"kind": "point_state", "dim", "x", "psi", "dpsi"}
    {"kind": "bipartite_model", "dims", "hamiltonian", "H_A", "H_B",
     "components": [{"weight", "phi_A", "phi_B"}], "energy", "shifted", "name"}
"""

# Python Imports
import logging
from typing import Any, Dict

# Library Imports
import numpy as np

# Local Imports
from src.core.exceptions import ConfigError, ModelError
from src.core.povm import PovmSet
from src.core.qfi import PointState
from src.core.restricted import BipartiteModel, HamiltonianKind, SubspaceComponent, orthogonality_ledger

logger = logging.getLogger(__name__)

SHIFTED_LEDGER_TOL = 1e-9


def encode_array(a: np.ndarray) -> Dict[str, Any]:
    a = np.asarray(a, dtype=complex)
    flat = a.reshape(-1)
    return {"shape": list(a.shape), "data": [[float(z.real), float(z.imag)] for z in flat]}


def decode_array(doc: Dict[str, Any]) -> np.ndarray:
    """
    Rebuild a complex array from its [re, im] pair encoding.

    Raises:
        ConfigError: If the document is malformed.
    """
    try:
        shape = tuple(int(n) for n in doc["shape"])
        pairs = np.asarray(doc["data"], dtype=float).reshape(-1, 2)
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Malformed complex array document: {e}") from e
    if pairs.shape[0] != int(np.prod(shape)):
        raise ConfigError(f"Complex array has {pairs.shape[0]} entries for shape {shape}")
    return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(shape)


def _require_kind(doc: Dict[str, Any], kind: str) -> None:
    if not isinstance(doc, dict) or doc.get("kind") != kind:
        raise ConfigError(f"Expected a '{kind}' document, got {doc.get('kind') if isinstance(doc, dict) else doc!r}")


def povm_to_doc(povm: PovmSet) -> Dict[str, Any]:
    return {
        "kind": "povm",
        "dim": povm.dim,
        "elements": [{"label": label, "matrix": encode_array(E)} for label, E in povm.elements.items()],
        "retained": list(povm.retained),
    }


def povm_from_doc(doc: Dict[str, Any]) -> PovmSet:
    """Decode a POVM document; the POVM is not validated here."""
    _require_kind(doc, "povm")
    elements = {item["label"]: decode_array(item["matrix"]) for item in doc["elements"]}
    povm = PovmSet(elements, tuple(doc.get("retained", ())))
    if povm.dim != int(doc.get("dim", povm.dim)):
        raise ConfigError(f"POVM document declares dim {doc['dim']} but holds {povm.dim}x{povm.dim} elements")
    unknown = set(povm.retained) - set(elements)
    if unknown:
        raise ConfigError(f"Retained labels {sorted(unknown)} are not POVM elements")
    return povm


def point_state_to_doc(point: PointState) -> Dict[str, Any]:
    return {"kind": "point_state", "dim": point.dim, "x": point.x,
            "psi": encode_array(point.psi), "dpsi": encode_array(point.dpsi)}


def point_state_from_doc(doc: Dict[str, Any]) -> PointState:
    _require_kind(doc, "point_state")
    return PointState.from_vectors(decode_array(doc["psi"]), decode_array(doc["dpsi"]), float(doc.get("x", 0.0)))


def bipartite_model_to_doc(model: BipartiteModel) -> Dict[str, Any]:
    return {
        "kind": "bipartite_model",
        "name": model.name,
        "dims": list(model.dims),
        "hamiltonian": model.kind.value,
        "H_A": encode_array(model.H_A),
        "H_B": encode_array(model.H_B),
        "components": [{"weight": c.weight, "phi_A": encode_array(c.phi_A), "phi_B": encode_array(c.phi_B)}
                       for c in model.components],
        "energy": model.energy,
        "shifted": model.kind is HamiltonianKind.SUM,
    }


def bipartite_model_from_doc(doc: Dict[str, Any]) -> BipartiteModel:
    """
    Decode a bipartite model document.

    Product documents and unshifted Sum documents go through the validating
    builders. Sum documents written by bipartite_model_to_doc hold already
    shifted Hamiltonians; they are rebuilt as stored and checked against the
    orthogonality ledger instead, which keeps the round trip exact.

    Raises:
        ConfigError: If the document is malformed.
        ModelError: If the model violates its invariants.
    """
    _require_kind(doc, "bipartite_model")
    try:
        kind = HamiltonianKind(doc["hamiltonian"])
        H_A = decode_array(doc["H_A"])
        H_B = decode_array(doc["H_B"])
        parts = [(float(c["weight"]), decode_array(c["phi_A"]), decode_array(c["phi_B"])) for c in doc["components"]]
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Malformed bipartite model document: {e}") from e
    name = doc.get("name", "bipartite model")
    if list(doc.get("dims", [H_A.shape[0], H_B.shape[0]])) != [H_A.shape[0], H_B.shape[0]]:
        raise ConfigError(f"Model '{name}' declares dims {doc['dims']} but holds {H_A.shape[0]}x{H_B.shape[0]}")

    if kind is HamiltonianKind.PRODUCT:
        _, phi_A, phi_B = parts[0]
        return BipartiteModel.product(H_A, H_B, phi_A, phi_B, name)
    if not doc.get("shifted", False):
        return BipartiteModel.sum(H_A, H_B, parts, name)

    components = [SubspaceComponent(p, a, b) for p, a, b in parts]
    psi0 = sum(np.sqrt(c.weight) * np.kron(c.phi_A, c.phi_B) for c in components)
    model = BipartiteModel(kind, H_A, H_B, psi0, components, float(doc.get("energy", 0.0)), name)
    ledger = orthogonality_ledger(model)
    if not ledger.passed(SHIFTED_LEDGER_TOL):
        raise ModelError(f"Stored sum model '{name}' fails the orthogonality ledger "
                         f"(max residual {ledger.max_residual:.3e})")
    return model


DECODERS = {
    "povm": povm_from_doc,
    "point_state": point_state_from_doc,
    "bipartite_model": bipartite_model_from_doc,
}


def decode_document(doc: Dict[str, Any]):
    """Decode any supported document by its 'kind' field."""
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind not in DECODERS:
        raise ConfigError(f"Unknown document kind {kind!r}. Known: {', '.join(sorted(DECODERS))}")
    return DECODERS[kind](doc)

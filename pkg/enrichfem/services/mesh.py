import logging
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from enrichfem.core.exceptions import MeshError

logger = logging.getLogger("service.mesh")

# Interfaces closer than NODE_TOLERANCE * (b - a) to a node count as sitting on it.
NODE_TOLERANCE = 1e-14


@dataclass(frozen=True)
class InterfaceHit:
    interface: int
    element: int
    alpha: float


@dataclass(frozen=True)
class Mesh1D:
    """Partition a = x_0 < ... < x_n = b with interfaces strictly inside their elements."""

    nodes: np.ndarray
    interface_hits: Tuple[InterfaceHit, ...] = ()

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "interface_hits", tuple(self.interface_hits))

    @property
    def a(self) -> float:
        return float(self.nodes[0])

    @property
    def b(self) -> float:
        return float(self.nodes[-1])

    @property
    def n_elements(self) -> int:
        return len(self.nodes) - 1

    @property
    def h_max(self) -> float:
        return float(np.max(np.diff(self.nodes)))

    @property
    def interface_elements(self) -> Tuple[int, ...]:
        return tuple(hit.element for hit in self.interface_hits)

    def element_bounds(self, element: int) -> Tuple[float, float]:
        return float(self.nodes[element]), float(self.nodes[element + 1])


def _locate_interfaces(nodes: np.ndarray, interfaces: Sequence[float]) -> Tuple[InterfaceHit, ...]:
    a, b = float(nodes[0]), float(nodes[-1])
    tol = NODE_TOLERANCE * (b - a)
    n = len(nodes) - 1

    if len(set(float(alpha) for alpha in interfaces)) != len(interfaces):
        raise MeshError(f"Interfaces must be pairwise distinct, got {list(interfaces)}")

    hits = []
    owners: Dict[int, int] = {}
    for index, alpha in enumerate(interfaces):
        alpha = float(alpha)
        if not a < alpha < b:
            raise MeshError(f"Interface {alpha!r} is not strictly inside ({a}, {b})")

        k = int(np.searchsorted(nodes, alpha, side="right")) - 1
        k = min(max(k, 0), n - 1)
        nearest = min(abs(alpha - nodes[k]), abs(nodes[k + 1] - alpha))
        if nearest <= tol:
            node = k if abs(alpha - nodes[k]) <= tol else k + 1
            raise MeshError(
                f"Interface {alpha!r} coincides with node x_{node} = {nodes[node]!r}; "
                f"the interface must lie strictly inside an element, choose a different n"
            )
        if k in owners:
            raise MeshError(
                f"Interfaces {interfaces[owners[k]]!r} and {alpha!r} fall in the same element {k}; refine the mesh"
            )
        owners[k] = index
        hits.append(InterfaceHit(interface=index, element=k, alpha=alpha))

    return tuple(hits)


def mesh_from_nodes(nodes: Sequence[float], interfaces: Sequence[float] = ()) -> Mesh1D:
    nodes = np.asarray(nodes, dtype=float)
    if nodes.ndim != 1 or len(nodes) < 3:
        raise MeshError("A mesh needs at least two elements")
    if not np.all(np.diff(nodes) > 0):
        raise MeshError("Mesh nodes must be strictly increasing")

    mesh = Mesh1D(nodes=nodes, interface_hits=_locate_interfaces(nodes, interfaces))
    logger.debug(f"Mesh with {mesh.n_elements} elements, interface elements {mesh.interface_elements}")
    return mesh


def build_mesh(a: float, b: float, n: int, interfaces: Sequence[float] = ()) -> Mesh1D:
    if not a < b:
        raise MeshError(f"Empty domain [{a}, {b}]")
    if int(n) != n or n < 2:
        raise MeshError(f"Element count must be an integer >= 2, got {n}")

    nodes = np.linspace(a, b, int(n) + 1)
    nodes[0], nodes[-1] = a, b
    return mesh_from_nodes(nodes, interfaces)


def locate_element(mesh: Mesh1D, x: float) -> int:
    """Element whose left endpoint is x at interior nodes; x = b maps to the last element."""
    if not mesh.a <= x <= mesh.b:
        raise MeshError(f"Point {x!r} is outside [{mesh.a}, {mesh.b}]")
    k = int(np.searchsorted(mesh.nodes, x, side="right")) - 1
    return min(max(k, 0), mesh.n_elements - 1)

import numpy as np
import pytest

from enrichfem.core.exceptions import MeshError
from enrichfem.services.mesh import build_mesh, locate_element, mesh_from_nodes


def test_build_mesh_locates_single_interface() -> None:
    mesh = build_mesh(0.0, 1.0, 8, [1 / 9])
    assert mesh.n_elements == 8
    assert mesh.interface_elements == (0,)
    assert mesh.interface_hits[0].alpha == 1 / 9
    assert mesh.nodes[0] == 0.0 and mesh.nodes[-1] == 1.0


def test_build_mesh_locates_three_interfaces() -> None:
    mesh = build_mesh(0.0, 1.0, 8, [1 / 9, 1 / 3, 2 / 3])
    assert set(mesh.interface_elements) == {0, 2, 5}
    for hit in mesh.interface_hits:
        x_k, x_k1 = mesh.element_bounds(hit.element)
        assert x_k < hit.alpha < x_k1


def test_interface_on_node_is_rejected() -> None:
    with pytest.raises(MeshError, match="coincides with node"):
        build_mesh(0.0, 1.0, 3, [1 / 3])


def test_interfaces_sharing_an_element_are_rejected() -> None:
    with pytest.raises(MeshError, match="same element"):
        build_mesh(0.0, 1.0, 2, [0.1, 0.2])


@pytest.mark.parametrize(
    "a, b, n, interfaces",
    [
        (1.0, 0.0, 4, []),
        (0.0, 1.0, 1, []),
        (0.0, 1.0, 2.5, []),
        (0.0, 1.0, 4, [1.0]),
        (0.0, 1.0, 4, [-0.3]),
        (0.0, 1.0, 8, [0.3, 0.3]),
    ],
)
def test_invalid_mesh_requests(a, b, n, interfaces) -> None:
    with pytest.raises(MeshError):
        build_mesh(a, b, n, interfaces)


def test_h_max_matches_nodes() -> None:
    for n in (2, 7, 8, 64, 100):
        mesh = build_mesh(0.0, 1.0, n)
        assert mesh.h_max == float(np.max(np.diff(mesh.nodes)))


def test_nodes_are_read_only() -> None:
    mesh = build_mesh(0.0, 1.0, 4)
    with pytest.raises(ValueError):
        mesh.nodes[1] = 0.3


def test_permuted_interfaces_give_same_hits() -> None:
    forward = build_mesh(0.0, 1.0, 16, [1 / 9, 1 / 3, 2 / 3])
    backward = build_mesh(0.0, 1.0, 16, [2 / 3, 1 / 3, 1 / 9])
    assert {(h.alpha, h.element) for h in forward.interface_hits} == {
        (h.alpha, h.element) for h in backward.interface_hits
    }


def test_locate_element_cases() -> None:
    mesh = build_mesh(0.0, 1.0, 8)
    assert locate_element(mesh, 0.5) == 4
    assert locate_element(mesh, 0.13) == 1
    assert locate_element(mesh, 0.0) == 0
    assert locate_element(mesh, 1.0) == 7
    with pytest.raises(MeshError):
        locate_element(mesh, 1.5)
    with pytest.raises(MeshError):
        locate_element(mesh, -0.01)


def test_locate_element_brackets_random_points(rng) -> None:
    mesh = build_mesh(-2.0, 3.0, 37)
    for x in rng.uniform(-2.0, 3.0, size=500):
        k = locate_element(mesh, x)
        assert mesh.nodes[k] <= x <= mesh.nodes[k + 1]


def test_non_uniform_mesh() -> None:
    mesh = mesh_from_nodes([0.0, 0.1, 0.5, 1.0], [0.3])
    assert mesh.interface_elements == (1,)
    assert mesh.h_max == pytest.approx(0.5)
    with pytest.raises(MeshError):
        mesh_from_nodes([0.0, 0.5, 0.4, 1.0])

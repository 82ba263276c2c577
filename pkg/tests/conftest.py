import pytest

from kpoly.core.config import ConfigManager
from kpoly.core.fixtures import (
    cube,
    doubled_square,
    flat_torus,
    heptagonal_bipyramid,
    icosahedron,
    spherical_octahedron,
    tetrahedron,
)

### Fixtures


@pytest.fixture(autouse=True)
def fresh_config():
    """Every test starts from the default tolerances."""
    ConfigManager.reset()
    yield
    ConfigManager.reset()


@pytest.fixture
def cube_surface():
    return cube()


@pytest.fixture
def torus_surface():
    return flat_torus()


@pytest.fixture
def octant_sphere():
    return spherical_octahedron(1.0)


@pytest.fixture(
    params=[
        pytest.param(tetrahedron, id='tetrahedron'),
        pytest.param(cube, id='cube'),
        pytest.param(icosahedron, id='icosahedron'),
        pytest.param(flat_torus, id='torus'),
        pytest.param(doubled_square, id='doubled-square'),
        pytest.param(spherical_octahedron, id='octant-sphere'),
        pytest.param(heptagonal_bipyramid, id='saddle'),
    ]
)
def any_fixture(request):
    """Each polyhedron of the fixture suite."""
    return request.param()


def error_code(excinfo) -> int:
    return excinfo.value.context.code

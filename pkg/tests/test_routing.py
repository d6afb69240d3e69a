from hypothesis import given, strategies as st

from nocmap.model import Mesh
from nocmap.routing import hop_count, xy_route


@st.composite
def mesh_and_pair(draw):
    mesh = Mesh(draw(st.integers(1, 9)), draw(st.integers(1, 9)))
    a = draw(st.integers(1, mesh.n))
    b = draw(st.integers(1, mesh.n))
    return mesh, a, b


@given(mesh_and_pair())
def test_route_is_x_then_y_minimal(args):
    mesh, a, b = args
    path = xy_route(mesh, a, b)
    (x0, y0), (x1, y1) = mesh.coords(a), mesh.coords(b)
    assert path.routers[0] == a and path.routers[-1] == b
    assert path.eta == abs(x0 - x1) + abs(y0 - y1) + 1 == hop_count(mesh, a, b)
    coords = [mesh.coords(t) for t in path.routers]
    # every router keeps the source row until the destination column is reached
    turned = False
    for (xa, ya), (xb, yb) in zip(coords, coords[1:]):
        assert abs(xa - xb) + abs(ya - yb) == 1
        if ya != yb:
            turned = True
            assert xa == x1
        else:
            assert not turned
    assert list(path.links) == list(zip(path.routers, path.routers[1:]))
    assert set(path.links) <= set(mesh.links())


def test_same_tile_route_is_one_router():
    path = xy_route(Mesh(3, 3), 5, 5)
    assert path.routers == (5,) and path.links == () and path.eta == 1


def test_known_route():
    # 3x3: tile 1 at (0,0), tile 9 at (2,2)
    assert xy_route(Mesh(3, 3), 1, 9).routers == (1, 2, 3, 6, 9)
    assert xy_route(Mesh(3, 3), 9, 1).routers == (9, 8, 7, 4, 1)
    assert xy_route(Mesh(3, 3), 1, 9).core_links == (("core", 1), (9, "core"))

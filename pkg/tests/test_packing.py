import json
import math
import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from shapely.geometry import Point, Polygon
from shapely.ops import unary_union

from packdense import f53_family as f53, ft_family as ft, packing as pk, roots
from packdense.errors import DomainError, PackingFormatError

HEX = math.pi / math.sqrt(12)
Q1, Q53 = roots.q1(), roots.q53()


@pytest.fixture(scope="module")
def table():
    return roots.critical_ratios()


def brute_force_overlap(p):
    """Worst overlap over the 3x3 block of translates, the textbook check."""
    B = p.matrix
    c, r = p.centers, p.radii
    worst = -math.inf
    for i in range(len(c)):
        for j in range(len(c)):
            for a in (-1, 0, 1):
                for b in (-1, 0, 1):
                    if i == j and a == b == 0:
                        continue
                    d = np.linalg.norm(c[i] - c[j] - B @ (a, b))
                    worst = max(worst, r[i] + r[j] - d)
    return worst


def shapely_density(p):
    B = p.matrix
    discs = [Point(*(ctr + B @ (a, b))).buffer(d.radius, quad_segs=512)
             for d, ctr in zip(p.disks, p.centers) for a in (-1, 0, 1) for b in (-1, 0, 1)]
    cell = Polygon([tuple(B @ v) for v in ((0, 0), (1, 0), (1, 1), (0, 1))])
    return unary_union(discs).intersection(cell).area / cell.area


def test_hexagonal():
    h = pk.build_hexagonal()
    rep = pk.verify_packing(h)
    assert rep.ok
    assert rep.density == pytest.approx(HEX, abs=1e-12)
    g = pk.contact_graph(h)
    assert g.n_edges == 3
    assert g.degrees() == [6]
    assert g.triangulated
    assert g.euler_characteristic == 0


def test_inflated_hexagonal_overlaps():
    h = pk.build_hexagonal()
    fat = pk.TorusPacking(h.basis, (pk.Disk((0.0, 0.0), 1.01, "L"),))
    rep = pk.verify_packing(fat)
    assert not rep.ok
    assert rep.worst_overlap == pytest.approx(0.02, abs=1e-12)


def test_degenerate_basis():
    with pytest.raises(DomainError):
        pk.TorusPacking(((1, 0), (2, 0)), ())


@pytest.mark.parametrize("q", [Q1, 0.64, 0.65, 0.7, 0.9, 1.0])
def test_build_ft(q):
    p = pk.build_ft(q)
    assert len(p.disks) == 4
    assert sorted(p.labels) == ["L", "L", "S", "S"]
    assert pk.verify_packing(p).ok
    assert brute_force_overlap(p) <= 1e-9
    assert p.density == pytest.approx(ft.ft_density_closed(q), abs=1e-10)


@pytest.mark.parametrize("q", [Q53, 0.655, 0.7, 0.8, 0.95])
def test_build_f53(q):
    p = pk.build_f53(q)
    assert {lab: p.labels.count(lab) for lab in "LMS"} == {"L": 4, "M": 4, "S": 4}
    (ux, uy), (vx, vy) = p.basis
    assert abs(ux * vx + uy * vy) < 1e-9  # rectangular cell
    assert pk.verify_packing(p).ok
    assert brute_force_overlap(p) <= 1e-9
    assert p.density == pytest.approx(f53.f53_density_closed(q), abs=1e-9)


def test_polygon_area_oracle():
    for p in (pk.build_ft(0.65), pk.build_f53(0.7)):
        assert shapely_density(p) == pytest.approx(p.density, abs=2e-4)


def test_builder_domains():
    with pytest.raises(DomainError):
        pk.build_ft(0.6)
    with pytest.raises(DomainError):
        pk.build_f53(0.64)
    with pytest.raises(DomainError):
        pk.build_f53(1.0)


def test_triangulation_endpoints():
    assert pk.contact_graph(pk.build_ft(Q1)).triangulated
    assert pk.contact_graph(pk.build_f53(Q53)).triangulated
    assert not pk.contact_graph(pk.build_ft(0.65)).triangulated
    assert not pk.contact_graph(pk.build_f53(0.66)).triangulated


def test_f53_contact_counts():
    g = pk.contact_graph(pk.build_f53(Q53))
    assert g.n_edges == 36 and len(g.faces) == 24
    gp = pk.contact_graph(pk.build_f53(0.66))
    # each of the two small-disc rhombi loses its large-large contact
    assert gp.n_edges == 34
    assert sorted(gp.face_sizes).count(4) == 2


def test_ft_q2_same_density_not_hexagonal(table):
    p = pk.build_ft(table["q2"].value)
    assert p.density == pytest.approx(HEX, abs=1e-9)
    assert len(set(p.radii)) == 2


def test_f53_at_qft(table):
    assert pk.build_f53(table["qFT"].value).density == pytest.approx(HEX, abs=1e-9)


def test_triangulated_two_radii_beat_hexagonal():
    for p in (pk.build_ft(Q1), pk.build_f53(Q53)):
        assert pk.contact_graph(p).triangulated
        assert p.density > HEX


def test_contact_edges_match_tolerance():
    p = pk.build_f53(0.7)
    g = pk.contact_graph(p)
    B, c, r = p.matrix, p.centers, p.radii
    for i, j, n in g.edges:
        d = np.linalg.norm(c[j] + B @ np.array(n) - c[i])
        assert abs(d - r[i] - r[j]) <= 1e-7


def test_json_round_trip():
    for p in (pk.build_hexagonal(), pk.build_ft(0.65), pk.build_f53(Q53)):
        assert pk.from_json(pk.to_json(p)) == p


def test_json_errors():
    with pytest.raises(PackingFormatError) as exc:
        pk.from_json('{"basis": [[2, 0], [1, 1.7]],\n "disks": [}')
    assert "line 2" in str(exc.value)
    with pytest.raises(PackingFormatError):
        pk.from_json('{"disks": []}')
    with pytest.raises(PackingFormatError):
        pk.from_json('{"basis": [[1, 0], [2, 0]], "disks": []}')
    with pytest.raises(PackingFormatError):
        pk.from_json('{"basis": [[1, 0], [0, 1]], "disks": [{"c": [0, 0], "r": -1}]}')
    with pytest.raises(PackingFormatError):
        pk.from_json('[1, 2]')


def test_json_unknown_keys_ignored():
    doc = json.loads(pk.to_json(pk.build_hexagonal()))
    doc["comment"] = "extra"
    doc["disks"][0]["colour"] = "red"
    assert pk.from_json(json.dumps(doc)) == pk.build_hexagonal()


coord = st.floats(-50, 50, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(coord, coord, st.floats(1e-3, 5), st.sampled_from("LMS")), max_size=8),
       st.floats(0.5, 10), st.floats(-5, 5), st.floats(0.5, 10))
def test_json_round_trip_property(disks, ux, vx, vy):
    p = pk.TorusPacking(((ux, 0.0), (vx, vy)),
                        tuple(pk.Disk((x, y), r, lab) for x, y, r, lab in disks))
    assert pk.from_json(pk.to_json(p)) == p


def test_svg_hexagonal_tiles():
    svg = pk.render_svg(pk.build_hexagonal(), tiles=2)
    root = ET.fromstring(svg.split("\n", 1)[1])
    ns = "{http://www.w3.org/2000/svg}"
    assert root.tag == ns + "svg"
    assert len(root.findall(f"{ns}g")) == 4
    assert len(root.findall(f".//{ns}circle")) == 4
    assert len(root.findall(f"{ns}polygon")) == 1


def test_svg_f53_colours():
    svg = pk.render_svg(pk.build_f53(Q53))
    circles = re.findall(r'<circle class="(\w)"[^>]*fill="(#[0-9a-f]+)"', svg)
    assert len(circles) == 12
    assert len({fill for _, fill in circles}) == 3
    assert {cls for cls, _ in circles} == {"L", "M", "S"}


def test_svg_deterministic_and_palette():
    p = pk.build_ft(0.65)
    assert pk.render_svg(p, tiles=3) == pk.render_svg(p, tiles=3)
    assert 'fill="#000001"' in pk.render_svg(p, palette={"S": "#000001"})
    with pytest.raises(DomainError):
        pk.render_svg(p, tiles=0)


def test_reduce_basis_preserves_lattice():
    B = np.array([[1.0, 7.0], [0.0, 1.0]])
    Br, U = pk.reduce_basis(B)
    assert np.allclose(B @ U, Br)
    assert abs(round(np.linalg.det(U))) == 1
    assert np.linalg.norm(Br[:, 0]) <= np.linalg.norm(Br[:, 1])


def test_skewed_basis_still_finds_all_overlaps():
    # A very skewed basis for the hexagonal lattice: the 3x3 block misses near neighbours.
    h = pk.build_hexagonal()
    skew = pk.TorusPacking(((2.0, 0.0), (1.0 + 2 * 5, math.sqrt(3.0))), h.disks)
    rep = pk.verify_packing(skew)
    assert rep.worst_overlap == pytest.approx(0.0, abs=1e-12)
    assert pk.contact_graph(skew).degrees() == [6]

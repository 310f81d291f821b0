import json
import math

import numpy as np
import pytest

from hypack.flow import solve
from hypack.hyptrig import curvature_to_radius
from hypack.packing import vertex_curvatures
from hypack.realize import (
    boundary_data,
    classify,
    cone_angle,
    cone_data,
    gauss_bonnet_audit,
    realize_metric,
    render_face_svg,
    report_document,
)

CONE_ALL2 = 2.6869943815735949          # 3 * arccos(5/8)
BOUNDARY_TETRA = 17.030678280288161     # 3 * s(r*)


class TestClassify:
    def test_solved_tetrahedron(self, tetrahedron):
        res = solve(tetrahedron, np.ones(4))
        i1, i2, i3 = classify(np.exp(res.K))
        assert i1 == (0, 1, 2, 3)
        assert i2 == () and i3 == ()

    def test_cusps_within_tolerance(self):
        i1, i2, i3 = classify([1.0, 1.0 + 1e-12, 1.0 - 1e-12])
        assert i2 == (0, 1, 2)

    def test_one_of_each(self):
        i1, i2, i3 = classify([0.5, 1.0, 2.0])
        assert (i1, i2, i3) == ((0,), (1,), (2,))

    def test_partition(self, rng):
        for tol in (1e-12, 1e-9, 1e-3):
            k = 10.0 ** rng.uniform(-1, 1, size=12)
            i1, i2, i3 = classify(k, tol)
            assert sorted(i1 + i2 + i3) == list(range(12))

    def test_positive_only(self):
        with pytest.raises(ValueError):
            classify([1.0, -0.5])


class TestConeData:
    def test_tetra_all_two(self, tetrahedron):
        K = np.log(np.full(4, 2.0))
        cones = cone_data(tetrahedron, K)
        assert set(cones) == {0, 1, 2, 3}
        for th in cones.values():
            assert th == pytest.approx(CONE_ALL2, abs=1e-12)
        # discrete Gaussian curvature = 2 pi - Theta
        assert 2 * math.pi - cones[0] == pytest.approx(3.5961909256059916, abs=1e-12)

    def test_circle_neighborhood_identity(self, octahedron, rng):
        # L_v = Theta_v cosh r_v when every incident corner is a circle
        K = np.log(rng.uniform(1.5, 4.0, size=6))
        rep = vertex_curvatures(octahedron, K)
        cones = cone_data(octahedron, K)
        for v in range(6):
            r = curvature_to_radius(math.exp(K[v]))
            assert abs(rep.L[v] - cones[v] * math.cosh(r)) < 1e-10

    def test_non_circle_vertex_rejected(self, tetrahedron):
        K = np.log(np.array([2.0, 2.0, 2.0, 0.5]))
        with pytest.raises(ValueError):
            cone_angle(tetrahedron, K, 3)


class TestBoundaryData:
    def test_solved_tetrahedron(self, tetrahedron):
        res = solve(tetrahedron, np.ones(4))
        lengths, cusps = boundary_data(tetrahedron, res.K)
        assert cusps == []
        for v in range(4):
            assert lengths[v] == pytest.approx(BOUNDARY_TETRA, abs=1e-8)

    def test_arc_total_identity(self, tetrahedron, rng):
        # L_v = sum over corners of s * sinh r_v at hypercycle vertices
        K = np.log(rng.uniform(0.1, 0.9, size=4))
        rep = vertex_curvatures(tetrahedron, K)
        lengths, _ = boundary_data(tetrahedron, K)
        for v in range(4):
            r = curvature_to_radius(math.exp(K[v]))
            assert rep.L[v] == pytest.approx(lengths[v] * math.sinh(r), rel=1e-10)

    def test_cusp_listed_without_length(self, tetrahedron):
        K = np.log(np.array([0.5, 1.0, 2.0, 0.7]))
        lengths, cusps = boundary_data(tetrahedron, K)
        assert cusps == [1]
        assert set(lengths) == {0, 3}

    def test_boundary_closure_combinatorics(self, tetrahedron):
        # one axis segment per incident face at every boundary vertex
        res = solve(tetrahedron, np.ones(4))
        rep = vertex_curvatures(tetrahedron, res.K)
        for v in range(4):
            segments = [rep.faces[fi].gen_angle[tetrahedron.faces[fi].index(v)]
                        for fi in tetrahedron.vertex_faces[v]]
            assert len(segments) == tetrahedron.degree(v)
            assert all(s > 0 for s in segments)


class TestAudit:
    def test_tetra_exact_hexagon_case(self, tetrahedron):
        res = solve(tetrahedron, np.ones(4))
        rep = vertex_curvatures(tetrahedron, res.K)
        for fg in rep.faces:
            assert fg.polygon_area == pytest.approx(math.pi, abs=1e-14)
        assert gauss_bonnet_audit(tetrahedron, res.K) < 1e-10

    def test_arbitrary_states(self, tetrahedron, octahedron, rng):
        for tri in (tetrahedron, octahedron):
            for _ in range(10):
                K = rng.uniform(-2.0, 2.0, size=tri.num_vertices)
                assert gauss_bonnet_audit(tri, K) < 1e-8

    def test_with_cusp_entries(self, tetrahedron):
        K = np.log(np.array([0.5, 1.0, 2.0, 1.5]))
        assert gauss_bonnet_audit(tetrahedron, K) < 1e-8

    def test_all_circle_counting_identity(self, octahedron, rng):
        # sum_f (pi - sum theta) = -2 pi chi + sum_v (2 pi - Theta_v)
        K = np.log(rng.uniform(1.2, 3.0, size=6))
        rep = vertex_curvatures(octahedron, K)
        lhs = sum(fg.polygon_area for fg in rep.faces)
        cones = cone_data(octahedron, K)
        rhs = -2 * math.pi * 2 + sum(2 * math.pi - th for th in cones.values())
        assert lhs == pytest.approx(rhs, abs=1e-10)


class TestRealizedMetric:
    def test_solved_tetrahedron(self, tetrahedron):
        res = solve(tetrahedron, np.ones(4))
        m = realize_metric(tetrahedron, res.K)
        assert m.classes == ("boundary",) * 4
        assert m.chi_surface == 2
        assert m.chi_realized == -2
        assert m.total_area == pytest.approx(4 * math.pi, abs=1e-10)
        assert m.audit_residual < 1e-10
        assert m.cusps == ()
        assert not m.cone_angles

    def test_mixed_octahedron(self, octahedron):
        res = solve(octahedron, [12.0, 1, 1, 1, 1, 1])
        m = realize_metric(octahedron, res.K)
        assert m.classes[0] == "cone"
        assert all(c == "boundary" for c in m.classes[1:])
        assert 0 in m.cone_angles
        assert m.gaussian_curvature[0] == pytest.approx(
            2 * math.pi - m.cone_angles[0], abs=1e-14)
        assert m.audit_residual < 1e-8

    def test_report_document(self, tetrahedron):
        res = solve(tetrahedron, np.ones(4))
        m = realize_metric(tetrahedron, res.K)
        doc1 = report_document(m)
        doc2 = report_document(m)
        assert doc1 == doc2
        parsed = json.loads(doc1)
        assert parsed["schema_version"] == 1
        assert len(parsed["vertices"]) == 4
        rec = parsed["vertices"][0]
        assert rec["class"] == "boundary"
        assert "boundary_length" in rec
        assert parsed["global"]["chi_realized"] == -2
        assert parsed["global"]["audit_residual"] < 1e-10


class TestRenderSvg:
    def test_deterministic(self):
        assert render_face_svg(1, 1, 1) == render_face_svg(1, 1, 1)
        assert render_face_svg(2.0, 0.5, 1.3) == render_face_svg(2.0, 0.5, 1.3)

    def test_three_horocycles(self):
        svg = render_face_svg(1, 1, 1)
        # unit circle + 3 horocycle circles + 3 tangency dots, no arcs
        assert svg.count("<circle") == 7
        assert svg.count("<path") == 0
        assert svg.startswith("<svg ")
        assert svg.rstrip().endswith("</svg>")

    def test_horocycles_internally_tangent(self):
        svg = render_face_svg(1, 1, 1)
        # parse the circles: each horocycle circle touches the unit circle
        import re
        circles = re.findall(
            r'<circle cx="([-\d.]+)" cy="([-\d.]+)" r="([\d.]+)"', svg)
        disk_cx, disk_cy, disk_r = map(float, circles[0])
        for cx, cy, r in [map(float, c) for c in circles[1:4]]:
            d = math.hypot(cx - disk_cx, cy - disk_cy)
            assert d + r == pytest.approx(disk_r, abs=1e-3)

    def test_hypercycles_render_as_arcs(self):
        svg = render_face_svg(0.4, 0.6, 0.8)
        assert svg.count("<path") == 3
        svg2 = render_face_svg(2.0, 2.0, 0.5)
        assert svg2.count("<path") == 1

    def test_symmetric_circles_congruent(self):
        import re
        svg = render_face_svg(2, 2, 2)
        circles = re.findall(r'<circle[^/]*r="([\d.]+)"', svg)
        # curves are circles[1:4]; all three congruent by symmetry
        radii = [float(r) for r in circles[1:4]]
        assert radii[0] == pytest.approx(radii[1], abs=2e-6)

import json
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fair.errors import InvalidK, InvalidPoint, TooFewPoints
from fair.kmeans import GeoPoint, assign, cost, fit, model_to_json

from tests.support import lloyds_reference


def campus_points(records):
    """One (deduplicated) point per university, in record order."""
    seen = {}
    for r in records:
        if r.university not in seen and r.latitude is not None and r.longitude is not None:
            seen[r.university] = GeoPoint(r.university, r.latitude, r.longitude)
    return list(seen.values())


@pytest.fixture(scope="module")
def fixture_points(faculty_records):
    points = campus_points(faculty_records)
    assert len(points) == 31
    return points


class TestGeoPoint:
    def test_accepts_boundary_coordinates(self):
        GeoPoint("a", 90.0, 180.0)
        GeoPoint("b", -90.0, -180.0)
        assert GeoPoint("c", 26, 80).coords == (26.0, 80.0)

    @pytest.mark.parametrize("lat,lon", [
        (90.0001, 0.0), (-91.0, 0.0), (0.0, 180.5), (0.0, -181.0),
        (float("nan"), 0.0), (0.0, float("inf")),
    ])
    def test_rejects_bad_coordinates(self, lat, lon):
        with pytest.raises(InvalidPoint):
            GeoPoint("bad", lat, lon)

    def test_rejects_non_numbers(self):
        with pytest.raises(InvalidPoint):
            GeoPoint("bad", "17.9", 79.5)
        with pytest.raises(InvalidPoint):
            GeoPoint("bad", True, 79.5)


class TestAssign:
    CENTROIDS = ((0.0, 0.0), (10.0, 0.0), (0.0, 10.0))

    def test_coincident_point(self):
        assert assign(GeoPoint("x", 0.0, 10.0), self.CENTROIDS) == 2

    def test_equidistant_tie_goes_low(self):
        assert assign(GeoPoint("x", 5.0, 0.0), self.CENTROIDS) == 0
        assert assign(GeoPoint("x", 5.0, 5.0), self.CENTROIDS) == 0

    def test_matches_exhaustive_scan(self, fixture_points):
        southern = min(fixture_points, key=lambda p: p.lat)
        distances = [
            (southern.lat - c[0]) ** 2 + (southern.lon - c[1]) ** 2
            for c in self.CENTROIDS
        ]
        assert assign(southern, self.CENTROIDS) == distances.index(min(distances))


class TestFitBasics:
    def test_single_point_k1(self):
        model = fit([GeoPoint("only", 12.0, 77.0)], k=1, seed=0)
        assert model.centroids == ((12.0, 77.0),)
        assert model.assignments == (0,)
        assert model.cost == 0.0
        assert model.iterations == 1

    def test_k_equals_n_distinct_points(self):
        points = [GeoPoint(f"p{i}", float(i), float(-i)) for i in range(4)]
        model = fit(points, k=4, seed=7)
        assert model.cost == 0.0
        assert sorted(model.assignments) == [0, 1, 2, 3]
        assert set(model.centroids) == {p.coords for p in points}

    def test_two_obvious_clusters(self):
        points = [GeoPoint("a1", 0.0, 0.0), GeoPoint("a2", 0.1, 0.1),
                  GeoPoint("b1", 50.0, 50.0), GeoPoint("b2", 50.1, 50.1)]
        model = fit(points, k=2, seed=3)
        assert model.assignments[0] == model.assignments[1]
        assert model.assignments[2] == model.assignments[3]
        assert model.assignments[0] != model.assignments[2]
        assert model.cost == pytest.approx(0.02)

    def test_error_cases(self):
        points = [GeoPoint("a", 1.0, 1.0)]
        with pytest.raises(InvalidK):
            fit(points, k=0, seed=1)
        with pytest.raises(TooFewPoints):
            fit(points, k=2, seed=1)
        with pytest.raises(InvalidK):
            fit(points, k=1, seed=1, max_iters=0)
        with pytest.raises(InvalidK):
            fit(points, k=1, seed=1, tol=-1.0)

    def test_duplicate_coordinates_allowed(self):
        points = [GeoPoint(f"d{i}", 5.0, 5.0) for i in range(3)]
        points.append(GeoPoint("far", -60.0, -60.0))
        model = fit(points, k=2, seed=11)
        assert model.cost == 0.0


class TestModelInvariants:
    def test_fixture_model_properties(self, fixture_points):
        model = fit(fixture_points, k=3, seed=42)
        assert model.k == 3
        assert len(model.assignments) == 31
        assert all(0 <= a < 3 for a in model.assignments)

        # non-empty centroids are the means of their members
        for c in range(3):
            members = [p for p, a in zip(fixture_points, model.assignments) if a == c]
            assert members, "k=3 on 31 campuses should use every cluster"
            assert model.centroids[c][0] == pytest.approx(
                math.fsum(m.lat for m in members) / len(members))
            assert model.centroids[c][1] == pytest.approx(
                math.fsum(m.lon for m in members) / len(members))

        # assignment optimality against the final centroids
        for point, a in zip(fixture_points, model.assignments):
            own = (point.lat - model.centroids[a][0]) ** 2 + (point.lon - model.centroids[a][1]) ** 2
            for c in range(3):
                other = (point.lat - model.centroids[c][0]) ** 2 + (point.lon - model.centroids[c][1]) ** 2
                assert own <= other + 1e-12

    def test_costs_monotone_and_consistent(self, fixture_points):
        model = fit(fixture_points, k=3, seed=42)
        for earlier, later in zip(model.iteration_costs, model.iteration_costs[1:]):
            assert later <= earlier + 1e-12
        assert model.cost <= model.iteration_costs[-1] + 1e-12
        assert model.cost == pytest.approx(cost(fixture_points, model), rel=1e-9)

    def test_fixed_point_after_convergence(self, fixture_points):
        model = fit(fixture_points, k=3, seed=42)
        assert model.iterations < 100  # converged by tol, not by the cap
        for point, a in zip(fixture_points, model.assignments):
            assert assign(point, model.centroids) == a

    def test_seed_determinism(self, fixture_points):
        a = fit(fixture_points, k=3, seed=42)
        b = fit(fixture_points, k=3, seed=42)
        assert a == b

    def test_permutation_equivariance(self, fixture_points):
        base = fit(fixture_points, k=3, seed=42)
        rng = random.Random(9)
        for _ in range(5):
            shuffled = fixture_points[:]
            rng.shuffle(shuffled)
            other = fit(shuffled, k=3, seed=42)
            assert partition_of(shuffled, other) == partition_of(fixture_points, base)
            assert other.centroids == base.centroids  # fsum makes this exact
            assert other.cost == base.cost


def partition_of(points, model):
    groups = {}
    for point, a in zip(points, model.assignments):
        groups.setdefault(a, set()).add(point.label)
    return frozenset(frozenset(g) for g in groups.values())


class TestAgainstReference:
    def triples(self, points):
        return [(p.label, p.lat, p.lon) for p in points]

    def test_fixture_bit_identical(self, fixture_points):
        model = fit(fixture_points, k=3, seed=42)
        ref = lloyds_reference.run(self.triples(fixture_points), k=3, seed=42)
        assert list(model.centroids) == ref["centroids"]
        assert model.cost == ref["cost"]
        assert model.iterations == ref["iterations"]
        assert list(model.iteration_costs) == ref["iteration_costs"]
        assert partition_of(fixture_points, model) == frozenset(
            frozenset(g) for g in ref["partition"])

    @pytest.mark.parametrize("seed", range(8))
    def test_fixture_other_seeds(self, fixture_points, seed):
        model = fit(fixture_points, k=3, seed=seed)
        ref = lloyds_reference.run(self.triples(fixture_points), k=3, seed=seed)
        assert list(model.centroids) == ref["centroids"]
        assert model.cost == ref["cost"]

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_random_instances_bit_identical(self, data):
        n = data.draw(st.integers(2, 24), label="n")
        k = data.draw(st.integers(1, min(6, n)), label="k")
        seed = data.draw(st.integers(0, 2**32 - 1), label="seed")
        coord = st.floats(min_value=-89.0, max_value=89.0).map(lambda v: round(v, 4))
        points = [
            GeoPoint(f"u{i}", data.draw(coord), data.draw(coord) * 2.0)
            for i in range(n)
        ]
        model = fit(points, k=k, seed=seed)
        ref = lloyds_reference.run(self.triples(points), k=k, seed=seed)
        assert list(model.centroids) == ref["centroids"]
        assert model.cost == ref["cost"]
        assert model.iterations == ref["iterations"]
        for earlier, later in zip(model.iteration_costs, model.iteration_costs[1:]):
            assert later <= earlier + 1e-12


class TestExport:
    def test_json_shape(self, fixture_points):
        model = fit(fixture_points, k=3, seed=42)
        payload = model_to_json(fixture_points, model)
        assert set(payload) == {"k", "centroids", "clusters", "cost", "iterations"}
        assert payload["k"] == 3
        assert len(payload["centroids"]) == 3
        members = [m for c in payload["clusters"] for m in c["members"]]
        assert sorted(members) == sorted(p.label for p in fixture_points)
        for c in payload["clusters"]:
            assert c["members"] == sorted(c["members"])
        json.dumps(payload)  # must be serializable as-is

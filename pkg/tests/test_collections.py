"""Collection builders, the verification battery, and serialization.

Every builder's length is compared with the Schubert cell count of its
space, the battery is run on positive cases and on deliberately broken
controls, and fibration towers are compared object-for-object with the
direct product builders.
"""

from fractions import Fraction

import pytest

from excol import (
    BundleObject,
    CollectionSpec,
    ExcolError,
    KClass,
    Weight,
    build_beilinson,
    build_igr26,
    build_orthogonal_flag,
    build_quadric,
    build_symplectic_flag,
    compose_fibration,
    dump_collection,
    kclass_of,
    load_collection,
    parabolic_space,
    verify,
    weight,
)

IGR = parabolic_space("C", 3, [2])


def symplectic_tower(n):
    """The same product collection assembled one fibration step at a time."""
    base_space = parabolic_space("C", n, [1])
    names = []
    objects = []
    for j in range(-2 * n + 1, 1):
        w = Weight((Fraction(j),) + (Fraction(0),) * (n - 1))
        objects.append(BundleObject(base_space, w))
        names.append(f"O({j})" if j else "O")
    coll = CollectionSpec(
        base_space, tuple(objects), "bundles", tuple(names), "tower:base"
    )
    for m in range(2, n + 1):
        total = parabolic_space("C", n, range(1, m + 1))
        twists = []
        labels = []
        for j in range(-2 * n + 2 * m - 1, 1):
            coords = [Fraction(0)] * n
            coords[m - 1] = Fraction(j)
            twists.append(Weight(tuple(coords)))
            labels.append(f"T{m}({j})")
        coll = compose_fibration(coll, total, twists, labels)
    return coll


class TestBuilders:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_projective_space_lengths(self, n):
        coll = build_beilinson(n)
        assert len(coll) == n + 1 == coll.space.cell_count

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_quadric_lengths(self, n):
        coll = build_quadric(n)
        assert len(coll) == coll.space.cell_count
        assert coll.space.dim == n

    @pytest.mark.parametrize("n,length", [(1, 2), (2, 8), (3, 48)])
    def test_symplectic_flag_lengths(self, n, length):
        coll = build_symplectic_flag(n)
        assert len(coll) == length == coll.space.cell_count

    @pytest.mark.parametrize("n,length", [(2, 8), (3, 48)])
    def test_orthogonal_flag_lengths(self, n, length):
        coll = build_orthogonal_flag(n)
        assert len(coll) == length == coll.space.cell_count
        assert coll.mode == "kclasses"

    def test_igr_roster(self):
        coll = build_igr26()
        assert len(coll) == 12
        assert coll.labels == (
            "U(-4)", "O(-4)", "S^2U(-3)", "U(-3)", "O(-3)",
            "S^2U(-2)", "U(-2)", "O(-2)", "U(-1)", "O(-1)", "U", "O",
        )
        assert coll.objects[-1].hw == weight(0, 0, 0)
        assert coll.objects[0].hw == weight(-4, -5, 0)

    def test_quadric_two_is_a_product_of_lines(self):
        # the rank-2 even case: both spinor lines plus two twists of O
        coll = build_quadric(2)
        assert coll.space.rs.family == "D"
        assert coll.space.crossed == frozenset({1, 2})
        assert [o.hw for o in coll.objects] == [
            weight("-3/2", "1/2"),
            weight("-3/2", "-1/2"),
            weight(-1, 0),
            weight(0, 0),
        ]
        assert all(BundleObject(coll.space, o.hw).rank == 1 for o in coll.objects)

    def test_symplectic_order_convention(self):
        # top index slowest, every index ascending to zero
        coll = build_symplectic_flag(2)
        assert coll.labels[0] == "O(-1,-3)"
        assert coll.labels[-1] == "O(0,0)"
        assert coll.objects[0].hw == weight(-3, -1)
        assert coll.objects[-1].hw == weight(0, 0)
        tuples = [tuple(o.hw.coords) for o in coll.objects]
        assert tuples == sorted(tuples, key=lambda t: (t[1], t[0]))

    def test_orthogonal_roster_small(self):
        coll = build_orthogonal_flag(2)
        assert coll.labels == (
            "Sig1*Sig0", "Sig1*O_Q(-2)", "Sig1*O_Q(-1)", "Sig1",
            "Sig0", "O_Q(-2)", "O_Q(-1)", "O",
        )
        leftmost = coll.objects[0]
        assert leftmost.as_dict() == {
            weight(-3, 0): 1,
            weight(-3, -1): 1,
        }
        assert coll.objects[-1].as_dict() == {weight(0, 0): 1}

    def test_builder_guards(self):
        with pytest.raises(ExcolError):
            build_beilinson(0)
        with pytest.raises(ExcolError):
            build_quadric(1)
        with pytest.raises(ExcolError):
            build_symplectic_flag(0)
        with pytest.raises(ExcolError):
            build_orthogonal_flag(1)


class TestCollectionSpec:
    def test_validation(self):
        o = BundleObject(IGR, weight(0, 0, 0))
        with pytest.raises(ExcolError):
            CollectionSpec(IGR, (), "bundles", (), "empty")
        with pytest.raises(ExcolError):
            CollectionSpec(IGR, (o,), "bundles", ("a", "b"), "labels")
        with pytest.raises(ExcolError):
            CollectionSpec(IGR, (o,), "sheaves", ("a",), "mode")
        other = BundleObject(parabolic_space("C", 3, [1]), weight(0, 0, 0))
        with pytest.raises(ExcolError):
            CollectionSpec(IGR, (other,), "bundles", ("a",), "space")


class TestVerify:
    def test_igr_passes_exact(self):
        report = verify(build_igr26(), mode="exact")
        assert report.passed
        assert report.verdict == "complete-candidate"
        assert report.summary_line() == (
            "12/12 exceptional, 66/66 semiorthogonal, "
            "length=cells=12, det=1, thread=true"
        )
        assert report.det == 1
        assert report.thread_ok is True
        assert len(report.gram) == 12
        text = report.render_text()
        assert "verdict: complete-candidate (necessary conditions only)" in text

    def test_parallel_equals_serial(self):
        serial = verify(build_igr26(), mode="exact", jobs=1)
        parallel = verify(build_igr26(), mode="exact", jobs=4)
        assert serial.passed and parallel.passed
        assert serial.gram == parallel.gram
        assert [r.ok for r in serial.semiorthogonal] == [
            r.ok for r in parallel.semiorthogonal
        ]

    def test_chi_only_agrees_on_bundles(self):
        report = verify(build_igr26(), mode="chi_only")
        assert report.passed
        assert report.thread_ok is None
        assert "thread=skipped" in report.summary_line()

    def test_swapped_pair_is_caught_and_flagged_fixable(self):
        base = build_igr26()
        objs = list(base.objects)
        labs = list(base.labels)
        objs[2], objs[3] = objs[3], objs[2]
        labs[2], labs[3] = labs[3], labs[2]
        bad = CollectionSpec(
            base.space, tuple(objs), "bundles", tuple(labs), "igr26-swapped"
        )
        report = verify(bad, mode="exact")
        assert not report.passed
        assert report.verdict == "failed"
        failures = [r for r in report.semiorthogonal if not r.ok]
        assert len(failures) == 1
        failure = failures[0]
        assert (failure.row, failure.col) == (3, 2)
        assert failure.evidence == "k^6 in degree 0"
        assert failure.ordering_fixable
        text = report.render_text()
        assert "[ordering-fixable]" in text
        assert "Hom(S^2U(-3), U(-3)) = k^6 in degree 0" in text

    def test_duplicate_object_fails_without_fixable_tag(self):
        o = BundleObject(IGR, weight(0, 0, 0))
        dup = CollectionSpec(IGR, (o, o), "bundles", ("O", "O"), "dup")
        report = verify(dup, mode="exact")
        assert not report.passed
        failures = [r for r in report.semiorthogonal if not r.ok]
        assert failures and not failures[0].ordering_fixable
        assert not report.length_ok

    def test_exact_mode_rejects_kclass_collections(self):
        with pytest.raises(ExcolError):
            verify(build_orthogonal_flag(2), mode="exact")
        with pytest.raises(ExcolError):
            verify(build_igr26(), mode="euler")

    def test_report_json_shape(self):
        report = verify(build_beilinson(1), mode="exact")
        doc = report.to_json_dict()
        assert doc["summary"] == report.summary_line()
        assert doc["gram"] == [[1, 2], [0, 1]]
        assert doc["length"] == doc["cells"] == 2
        assert doc["thread"] is True
        assert doc["verdict"] == "complete-candidate"

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_quadrics_pass_exact(self, n):
        report = verify(build_quadric(n), mode="exact")
        assert report.passed, report.render_text()

    def test_symplectic_small_passes_exact(self):
        report = verify(build_symplectic_flag(2), mode="exact", jobs=2)
        assert report.passed, report.render_text()

    def test_orthogonal_small_passes_chi_only(self):
        report = verify(build_orthogonal_flag(2), mode="chi_only")
        assert report.passed, report.render_text()


class TestComposeFibration:
    @pytest.mark.parametrize("n", [2, 3])
    def test_tower_equals_direct_builder(self, n):
        tower = symplectic_tower(n)
        direct = build_symplectic_flag(n)
        assert tower.space == direct.space
        assert tower.objects == direct.objects

    def test_tower_is_associative(self):
        # composing the last two stages in one shot gives the same list
        n = 2
        base_space = parabolic_space("C", n, [1])
        objects = tuple(
            BundleObject(base_space, weight(j, 0)) for j in range(-3, 1)
        )
        base = CollectionSpec(
            base_space, objects, "bundles",
            tuple(str(j) for j in range(-3, 1)), "base",
        )
        full = parabolic_space("C", n, [1, 2])
        one_shot = compose_fibration(
            base, full, [weight(0, j) for j in range(-1, 1)]
        )
        direct = build_symplectic_flag(n)
        assert one_shot.objects == direct.objects

    def test_rejects_kclass_base(self):
        full = parabolic_space("B", 2, [1, 2])
        with pytest.raises(ExcolError):
            compose_fibration(build_orthogonal_flag(2), full, [weight(0, 0)])

    def test_rejects_non_refining_total(self):
        base = build_igr26()
        with pytest.raises(ExcolError):
            compose_fibration(base, IGR, [weight(0, 0, 0)])  # not strict
        with pytest.raises(ExcolError):
            compose_fibration(
                base, parabolic_space("C", 3, [1, 3]), [weight(0, 0, 0)]
            )

    def test_rejects_filtered_pullbacks(self):
        # the rank-2 tautological bundle does not stay irreducible upstairs
        u = BundleObject(IGR, weight(0, -1, 0))
        base = CollectionSpec(IGR, (u,), "bundles", ("U",), "just-u")
        flag = parabolic_space("C", 3, [1, 2])
        with pytest.raises(ExcolError) as err:
            compose_fibration(base, flag, [weight(0, 0, 0)])
        assert "filtered" in str(err.value)

    def test_requires_a_twist(self):
        base = build_igr26()
        flag = parabolic_space("C", 3, [1, 2])
        o_only = CollectionSpec(
            IGR, (BundleObject(IGR, weight(0, 0, 0)),), "bundles", ("O",), "o"
        )
        with pytest.raises(ExcolError):
            compose_fibration(o_only, flag, [])

    def test_twist_ordering_is_slowest(self):
        o_base = CollectionSpec(
            parabolic_space("C", 2, [1]),
            tuple(
                BundleObject(parabolic_space("C", 2, [1]), weight(j, 0))
                for j in (-1, 0)
            ),
            "bundles",
            ("O(-1)", "O"),
            "mini",
        )
        flag = parabolic_space("C", 2, [1, 2])
        coll = compose_fibration(
            o_base, flag, [weight(0, -1), weight(0, 0)], ["A", "B"]
        )
        assert coll.labels == ("A*O(-1)", "A*O", "B*O(-1)", "B*O")
        assert [o.hw for o in coll.objects] == [
            weight(-1, -1), weight(0, -1), weight(-1, 0), weight(0, 0)
        ]


class TestSerialization:
    def test_bundle_round_trip(self):
        coll = build_igr26()
        doc = dump_collection(coll)
        assert doc["order"] == "explicit"
        assert doc["mode"] == "bundles"
        loaded = load_collection(doc)
        assert loaded.objects == coll.objects
        assert loaded.labels == coll.labels
        assert loaded.provenance == coll.provenance

    def test_kclass_round_trip(self):
        coll = build_orthogonal_flag(2)
        doc = dump_collection(coll)
        assert doc["mode"] == "kclasses"
        # half-integral coordinates must serialize as exact "p/q" strings
        flat = str(doc)
        assert "/2" in flat
        loaded = load_collection(doc)
        assert loaded.objects == coll.objects
        assert loaded.labels == coll.labels

    def test_shifted_bundles_round_trip(self):
        o = BundleObject(IGR, weight(0, 0, 0), shift=-1)
        coll = CollectionSpec(IGR, (o,), "bundles", ("O[-1]",), "shifty")
        loaded = load_collection(dump_collection(coll))
        assert loaded.objects[0].shift == -1

    def test_labels_default_when_missing(self):
        doc = dump_collection(build_beilinson(1))
        del doc["labels"]
        loaded = load_collection(doc)
        assert loaded.labels == ("E0", "E1")

    def test_mode_inference_and_conversion(self):
        doc = {
            "space": {"family": "A", "rank": 1, "crossed": [1]},
            "objects": [
                {"terms": [{"weight": [0, 0], "coeff": 1}]},
                {"shift": 0, "weight": [1, 0], "mult": 1},
            ],
        }
        loaded = load_collection(doc)
        assert loaded.mode == "kclasses"
        assert all(isinstance(o, KClass) for o in loaded.objects)
        assert loaded.objects[1] == kclass_of(
            BundleObject(parabolic_space("A", 1, [1]), weight(1, 0))
        )

    def test_malformed_documents_rejected(self):
        good = dump_collection(build_beilinson(1))
        for mutate in [
            lambda d: d.pop("space"),
            lambda d: d.update(objects=[]),
            lambda d: d.update(objects="nope"),
            lambda d: d["objects"][0].update(mult=2),
            lambda d: d["objects"][0].update(weight=[True, 0]),
            lambda d: d.update(labels=["only-one"]),
        ]:
            doc = {
                "space": dict(good["space"]),
                "mode": good["mode"],
                "objects": [dict(o) for o in good["objects"]],
                "labels": list(good["labels"]),
            }
            mutate(doc)
            with pytest.raises(ExcolError):
                load_collection(doc)

    def test_declared_bundle_mode_with_kclass_objects_rejected(self):
        doc = {
            "space": {"family": "A", "rank": 1, "crossed": [1]},
            "mode": "bundles",
            "objects": [{"terms": [{"weight": [0, 0], "coeff": 1}]}],
        }
        with pytest.raises(ExcolError):
            load_collection(doc)

import random
import tempfile
from pathlib import Path

from django.test import SimpleTestCase, tag
from hypothesis import given, settings
from hypothesis import strategies as st

from fibred.domain.corr.services import CorrServices
from fibred.domain.fincat.models import (
    FinCatFactory,
    FinFunctorFactory,
    LawReport,
    NatTransFactory,
)
from fibred.domain.fincat.services import FinCatServices
from fibred.domain.groth.services import GrothServices
from fibred.domain.indexed.generators import (
    random_pseudo_indexed,
    random_split_fibration,
    slice_indexed,
    union_lax_monoidal,
)
from fibred.domain.zoo.models import FinSetSkeleton
from utils.django.exceptions import ParseError, ShapeMismatch

from .services import InterchangeServices, Workspace

TERMINAL = "kind: fincat\nname: one\nobjects: [a]\n"


def fincat_text(compose: str) -> str:
    return TERMINAL + "morphisms: [[1a, a, a]]\nidentity: [[a, 1a]]\n" + compose


class InterchangeRoundTripTests(SimpleTestCase):
    def setUp(self):
        self.arrow = FinCatFactory.build_walking_arrow()
        self.functor = FinFunctorFactory.build_identity(self.arrow)

    def assertStable(self, entity):
        text = InterchangeServices.dumps(entity)
        loaded = InterchangeServices.loads(text)
        self.assertIs(type(loaded), type(entity))
        self.assertEqual(InterchangeServices.dumps(loaded), text)
        return loaded

    def test_category_survives_a_dump(self):
        self.assertEqual(self.assertStable(self.arrow), self.arrow)

    def test_object_order_is_kept(self):
        c = FinCatFactory.build_discrete(["b", "a", "c"])
        self.assertEqual(self.assertStable(c).objects, c.objects)

    def test_functor_and_transformation_survive_a_dump(self):
        self.assertEqual(self.assertStable(self.functor), self.functor)
        t = NatTransFactory.build_identity(self.functor)
        self.assertEqual(self.assertStable(t), t)

    def test_monoidal_structure_survives_a_dump(self):
        m = FinSetSkeleton(2).witness.monoidal
        self.assertEqual(self.assertStable(m), m)

    def test_strict_indexed_category_survives_a_dump(self):
        m = slice_indexed(self.arrow)
        self.assertEqual(self.assertStable(m), m)

    @settings(deadline=None, max_examples=10)
    @given(st.randoms(use_true_random=False))
    def test_pseudo_indexed_category_survives_a_dump(self, rng):
        m = random_pseudo_indexed(rng, max_objects=3, max_morphisms=6)
        self.assertEqual(self.assertStable(m), m)

    def test_fibration_survives_a_dump(self):
        p = random_split_fibration(random.Random(1), max_objects=3, max_morphisms=6)
        self.assertEqual(self.assertStable(p), p)

    def test_twisted_lax_monoidal_redumps_identically(self):
        l, _ = union_lax_monoidal(random.Random(4), twisted=True)
        self.assertStable(l)

    def test_fibrewise_redumps_identically(self):
        l, w = union_lax_monoidal(random.Random(2))
        f = CorrServices.global_to_fibrewise(l, w)
        loaded = self.assertStable(f)
        self.assertEqual(loaded.base_monoidal, w.monoidal)

    @tag("extended_slow")
    def test_monoidal_total_redumps_identically(self):
        l, _ = union_lax_monoidal(random.Random(5), n=2)
        self.assertStable(GrothServices.monoidal_grothendieck(l))

    def test_reports_survive_a_dump(self):
        report = FinCatServices.check_category(self.arrow)
        self.assertEqual(self.assertStable(report), report)
        failed = LawReport(subject="mutated")
        failed.fail("associativity", ("h", "g", "f"), "sides differ")
        loaded = self.assertStable(failed.finish())
        self.assertFalse(loaded.passed)
        self.assertEqual(loaded.first("associativity").witness, ("h", "g", "f"))

    def test_unknown_entities_have_no_kind(self):
        with self.assertRaises(ShapeMismatch):
            InterchangeServices.dumps(object())


class InterchangeErrorTests(SimpleTestCase):
    def test_well_formed_text_loads(self):
        c = InterchangeServices.loads(fincat_text("compose: [[1a, 1a, 1a]]\n"))
        self.assertEqual(c.objects, ("a",))

    def test_invalid_yaml_reports_its_line(self):
        with self.assertRaises(ParseError) as caught:
            InterchangeServices.loads(TERMINAL + "morphisms: [[1a, a\n")
        self.assertEqual(caught.exception.item, "invalid-yaml")
        self.assertIsNotNone(caught.exception.line)

    def test_unknown_kind_is_rejected(self):
        with self.assertRaises(ParseError) as caught:
            InterchangeServices.loads("name: x\nkind: sheaf\n")
        self.assertEqual(caught.exception.item, "unknown-kind")
        self.assertEqual(caught.exception.field, "kind")
        self.assertEqual(caught.exception.line, 2)

    def test_schema_violation_names_field_and_line(self):
        with self.assertRaises(ParseError) as caught:
            InterchangeServices.loads(fincat_text("compose: 7\n"))
        self.assertEqual(caught.exception.item, "schema-violation")
        self.assertEqual(caught.exception.field, "compose")
        self.assertEqual(caught.exception.line, 6)

    def test_duplicate_rows_are_rejected(self):
        text = fincat_text("compose: [[1a, 1a, 1a], [1a, 1a, 1a]]\n")
        with self.assertRaises(ParseError) as caught:
            InterchangeServices.loads(text)
        self.assertEqual(caught.exception.item, "duplicate-row")
        self.assertEqual(caught.exception.field, "compose.1")
        self.assertEqual(caught.exception.line, 6)

    def test_error_data_carries_line_and_field(self):
        with self.assertRaises(ParseError) as caught:
            InterchangeServices.loads(fincat_text("compose: 7\n"))
        data = caught.exception.error_data()
        self.assertEqual((data["line"], data["field"]), (6, "compose"))


class WorkspaceTests(SimpleTestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.root = Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def write(self, name: str, entity) -> Path:
        path = self.root / name
        InterchangeServices.dump_file(entity, path)
        return path

    def test_entities_are_named_after_themselves(self):
        paths = [
            self.write("arrow.yaml", FinCatFactory.build_walking_arrow()),
            self.write("one.yaml", FinCatFactory.build_terminal()),
        ]
        workspace = InterchangeServices.load_workspace(paths)
        self.assertIsInstance(workspace, Workspace)
        self.assertEqual(list(workspace.entities), ["2", "1"])
        self.assertEqual(workspace.sources["1"], paths[1])

    def test_duplicate_names_are_rejected(self):
        arrow = FinCatFactory.build_walking_arrow()
        paths = [self.write("a.yaml", arrow), self.write("b.yaml", arrow)]
        with self.assertRaises(ParseError) as caught:
            InterchangeServices.load_workspace(paths)
        self.assertEqual(caught.exception.item, "duplicate-name")

    def test_missing_files_are_parse_errors(self):
        with self.assertRaises(ParseError) as caught:
            InterchangeServices.load_file(self.root / "absent.yaml")
        self.assertEqual(caught.exception.item, "unreadable-file")

import logging
from pathlib import Path
from typing import Any, Optional, Tuple

from django.core.management.base import BaseCommand, CommandError
from django.test import override_settings

from fibred.domain.fincat.models import LawReport
from fibred.infrastructure.custom_response.response_and_error import (
    FORMATS,
    TEXT,
    ReportResponse,
)
from fibred.infrastructure.interchange.services import InterchangeServices
from utils.django.exceptions import EXIT_LAW_FAILURE
from utils.django.exceptions import BaseException as CustomException
from utils.django.exceptions import ShapeMismatch

log = logging.getLogger(__name__)

# flag destination -> setting it overrides for the duration of a command
BOUND_SETTINGS = {
    "vertex_bound": "VERTEX_BOUND",
    "set_bound": "SET_BOUND",
    "state_bound": "STATE_BOUND",
    "port_bound": "PORT_BOUND",
    "max_objects": "MAX_OBJECTS",
    "seed": "SEED",
}

Outcome = Tuple[Optional[Any], LawReport, str]


class FibredCommand(BaseCommand):
    """
    Shared surface of the fibred commands.

    Subclasses add their positional arguments in add_inputs and implement run, which
    returns the produced entity (or None), the law report and the rendered response.
    The entity goes to --output, or to stdout when no path is given. Commands that only
    check write the report document to --output when one is given.

    The rendered report goes to --report when given, to stderr when the entity took
    stdout, and to stdout otherwise.

    Exit codes: 0 when every law holds, 1 on a violated law, 2 on unusable input.
    """

    def add_inputs(self, parser) -> None:
        pass

    def add_arguments(self, parser) -> None:
        self.add_inputs(parser)
        parser.add_argument("--output", help="Interchange file to write.")
        parser.add_argument(
            "--format",
            choices=FORMATS,
            default=TEXT,
            help="Report rendering: text, or one JSON record per line.",
        )
        parser.add_argument("--report", help="File for the rendered report.")
        parser.add_argument("--vertex-bound", type=int, help="Graph vertex bound.")
        parser.add_argument("--set-bound", type=int, help="Finite set bound.")
        parser.add_argument("--state-bound", type=int, help="Machine state bound.")
        parser.add_argument("--port-bound", type=int, help="Wiring port bound.")
        parser.add_argument(
            "--max-objects", type=int, help="Largest isomorphism search."
        )
        parser.add_argument("--seed", type=int, help="Seed for random fixtures.")

    def run(self, **options) -> Outcome:
        raise NotImplementedError

    def handle(self, *args, **options) -> None:
        self.output_format = options["format"]
        self.interchange_services = InterchangeServices()
        overrides = {
            setting: options[flag]
            for flag, setting in BOUND_SETTINGS.items()
            if options.get(flag) is not None
        }
        with override_settings(**overrides):
            try:
                entity, report, response = self.run(**options)
            except CustomException as error:
                log.warning("%s stopped: %s", self.__module__, error)
                response = ReportResponse(
                    errors=error, output_format=self.output_format
                )
                self.write_report(response, options.get("report"), self.stderr)
                raise CommandError(str(error), returncode=error.exit_code) from error

        output = options.get("output")
        if entity is not None and output is None:
            self.stdout.write(self.interchange_services.dumps(entity), ending="")
            self.write_report(response, options.get("report"), self.stderr)
        else:
            if output is not None:
                self.interchange_services.dump_file(
                    report if entity is None else entity, Path(output)
                )
            self.write_report(response, options.get("report"), self.stdout)

        if not report.passed:
            raise CommandError(
                f"{len(report.violations)} law violation(s) in {report.subject}",
                returncode=EXIT_LAW_FAILURE,
            )

    @staticmethod
    def write_report(response: str, path: Optional[str], stream) -> None:
        if path is not None:
            Path(path).write_text(response, encoding="utf-8")
        else:
            stream.write(response, ending="")

    def load(self, path: str, *kinds: type) -> Any:
        """
        Loads one interchange file and insists on its kind.

        Raises:
        - ParseError: If the file cannot be read.
        - ShapeMismatch: If it holds another kind of entity.
        """
        entity = self.interchange_services.load_file(Path(path))
        if kinds and not isinstance(entity, kinds):
            expected = " or ".join(kind.__name__ for kind in kinds)
            raise ShapeMismatch(
                item="wrong-kind",
                message=f"{path} holds a {type(entity).__name__}, expected {expected}",
            )
        return entity

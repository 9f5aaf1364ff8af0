import inspect
import json
from typing import Any, Dict, List, Optional, Union

import sentry_sdk
from django.core.serializers.json import DjangoJSONEncoder

from fibred.domain.fincat.models import LawReport
from utils.django.exceptions import BaseException as CustomException

TEXT = "text"
RECORDS = "records"
FORMATS = (TEXT, RECORDS)


class ReportResponse:
    """
    Renders the outcome of a command as a human readable block or as records.

    Like an API response it has a success and a failure shape, built by struct_response.
    A failed law report or an exception selects the failure shape. Records are one JSON
    object per line: the summary first, then one line per witness or error.

    Calling ReportResponse(...) returns the rendered string, not an instance.
    """

    def __new__(
        cls,
        report: Optional[LawReport] = None,
        errors: Union[List[dict], Exception, None] = None,
        data: Optional[Dict[str, Any]] = None,
        message: str = "",
        output_format: str = TEXT,
        for_error: bool = False,
    ) -> str:
        instance = super().__new__(cls)
        instance.report = report
        instance.data = dict(data or {})
        instance.message = message
        instance.output_format = output_format
        instance.errors = list(errors or []) if isinstance(errors, list) else errors
        instance.for_error = for_error
        instance.caller_function = inspect.stack()[1].function
        if report is not None:
            instance.data.update(instance.report_data(report))
            if not report.passed:
                instance.for_error = True
                instance.errors = (instance.errors or []) + instance.witnesses(report)
        if isinstance(errors, CustomException):
            instance.for_error = True
            instance.errors = [errors.error_data()]
        elif isinstance(errors, Exception):
            instance.for_error = True
            instance.errors = [{"item": type(errors).__name__, "message": str(errors)}]
            sentry_sdk.capture_exception(
                errors, tags={"catched-exceptions": "catched-exceptions"}
            )
        return instance.response_builder_callback()

    @staticmethod
    def report_data(report: LawReport) -> Dict[str, Any]:
        return {
            "subject": report.subject,
            "checked": list(report.checked),
            "instances": report.instances,
            "notes": list(report.notes),
            "skipped": dict(report.skipped),
        }

    @staticmethod
    def witnesses(report: LawReport) -> List[dict]:
        return [
            {
                "law": v.law,
                "witness": [str(item) for item in v.witness],
                "message": v.message,
            }
            for v in report.violations
        ]

    def response_builder_callback(self) -> str:
        if self.for_error:
            return self.fail()
        else:
            return self.success()

    def struct_response(
        self,
        data: Dict[str, Any],
        success: bool,
        message: str,
        errors=None,
        is_partially_processed: bool = False,
    ) -> dict:
        response = dict(success=success, message=message, data=data)
        if errors:
            response["errors"] = errors
        if is_partially_processed:
            response["is_partially_processed"] = is_partially_processed
        return response

    def success_message(self) -> str:
        return f'{self.caller_function.replace("_", "-").title()} Successful.'

    def success(self) -> str:
        """Passed reports and completed constructions."""
        success_message = self.message if self.message else self.success_message()
        is_partially_processed = bool(self.report is not None and self.report.skipped)
        response_data = self.struct_response(
            data=self.data,
            success=True,
            message=success_message,
            is_partially_processed=is_partially_processed,
        )
        return self.render(response_data)

    def fail(self) -> str:
        """Law violations, or the input error that stopped the command."""
        if self.message:
            error_message = self.message
        elif self.report is not None and not self.report.passed:
            count = len(self.report.violations)
            error_message = f"{count} law violation(s) in {self.report.subject}."
        elif self.errors:
            error_message = str(self.errors[0].get("message", ""))
        else:
            error_message = f'{self.caller_function.replace("_", "-").title()} Failed.'
        response_data = self.struct_response(
            data=self.data, success=False, message=error_message, errors=self.errors
        )
        return self.render(response_data)

    def render(self, response: dict) -> str:
        if self.output_format == RECORDS:
            return self.render_records(response)
        return self.render_text(response)

    @staticmethod
    def render_records(response: dict) -> str:
        summary = {key: value for key, value in response.items() if key != "errors"}
        lines = [json.dumps(summary, cls=DjangoJSONEncoder, sort_keys=True)]
        for error in response.get("errors", ()):
            lines.append(json.dumps(error, cls=DjangoJSONEncoder, sort_keys=True))
        return "\n".join(lines) + "\n"

    @staticmethod
    def render_text(response: dict) -> str:
        lines = [f'{"PASS" if response["success"] else "FAIL"} {response["message"]}']
        data = response["data"]
        for key in sorted(data):
            value = data[key]
            if key == "notes":
                lines.extend(f"  note: {note}" for note in value)
            elif isinstance(value, dict):
                if value:
                    pairs = ", ".join(f"{k}={v}" for k, v in sorted(value.items()))
                    lines.append(f"  {key}: {pairs}")
            elif isinstance(value, (list, tuple)):
                lines.append(f'  {key}: {", ".join(map(str, value))}')
            else:
                lines.append(f"  {key}: {value}")
        for error in response.get("errors", ()):
            if "law" in error:
                witness = ", ".join(error["witness"])
                lines.append(
                    f'  violated {error["law"]} at ({witness}): {error["message"]}'
                )
            else:
                where = [
                    f"{label} {error[label]}"
                    for label in ("line", "field")
                    if error.get(label) is not None
                ]
                suffix = f' [{", ".join(where)}]' if where else ""
                lines.append(f'  {error["item"]}: {error["message"]}{suffix}')
        return "\n".join(lines) + "\n"

"""
Text rendering of reports and the catalog using Jinja2
"""
from typing import Any, Dict, List

from jinja2.sandbox import SandboxedEnvironment

from ..models.report import CheckStatus, Report

REPORT_TEMPLATE = """\
Suite {{ report.suite }} on {{ report.braiding }} (version {{ report.version }})
{% for record in report.records %}
[{{ record.status.value | status_mark }}] {{ record.check_id }}{% if record.parameters %} {{ record.parameters | params }}{% endif %}

{% if record.detail %}
      {{ record.detail }}
{% endif %}
{% if record.witness %}
      witness: {{ record.witness }}
{% endif %}
{% if record.witness_ref %}
      certificate: {{ record.witness_ref }}
{% endif %}
{% endfor %}
{% for note in report.notes %}
note: {{ note }}
{% endfor %}
{{ report.summary.total }} checks: {{ report.summary.passed }} passed, {{ report.summary.failed }} failed, \
{{ report.summary.inconclusive }} inconclusive, {{ report.summary.skipped }} skipped
"""

CATALOG_TEMPLATE = """\
Built-in braidings:
{% for entry in braidings %}
  {{ entry.name }} N={{ entry.N }} {{ entry.kind }} m={{ entry.m }}
{% endfor %}

Suites:
{% for suite in suites %}
  {{ "%-11s" | format(suite.name) }} {{ suite.description }}{% if suite.default_braiding %} (default braiding: {{ suite.default_braiding }}){% endif %}

{% endfor %}
"""

STATUS_MARKS = {
    CheckStatus.PASS.value: "PASS",
    CheckStatus.FAIL.value: "FAIL",
    CheckStatus.INCONCLUSIVE.value: "INCO",
    CheckStatus.SKIPPED.value: "SKIP",
}


class ReportRenderer:
    """Jinja2-based rendering of run reports and the catalog"""

    def __init__(self):
        self.env = SandboxedEnvironment(
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True
        )
        self.env.filters["status_mark"] = self._status_mark
        self.env.filters["params"] = self._params

    def _status_mark(self, value: str) -> str:
        return STATUS_MARKS.get(value, value.upper())

    def _params(self, parameters: Dict[str, str]) -> str:
        return " ".join(f"{key}={value}" for key, value in parameters.items())

    def render_report(self, report: Report) -> str:
        return self.env.from_string(REPORT_TEMPLATE).render(report=report)

    def render_catalog(self, braidings: List[Dict[str, Any]], suites: List[Dict[str, Any]]) -> str:
        return self.env.from_string(CATALOG_TEMPLATE).render(braidings=braidings, suites=suites)


renderer = ReportRenderer()

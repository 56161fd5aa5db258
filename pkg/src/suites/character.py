"""Trace characters l = rho I of the reflection equation algebra."""

from ..models import CheckReport
from ..moment import character_check
from . import register_suite
from .base import BaseSuite, SuiteContext


@register_suite
class CharacterSuite(BaseSuite):
    order = 5
    description = "scalar matrices solve the reflection equation"

    @classmethod
    def suite_name(cls) -> str:
        return "character"

    def run(self, ctx: SuiteContext) -> list[CheckReport]:
        reports = []
        for n in ctx.distinct_dims:
            reports.append(self.guarded("character", {"N": n}, None, lambda n=n: character_check(n)))
            reports.append(self.guarded("character", {"N": n, "rho": "1"}, None, lambda n=n: character_check(n, 1)))
        return reports

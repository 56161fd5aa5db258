"""R-matrix axioms for every vertex dimension of the quiver."""

from ..freealg import hecke_check, qybe_check
from ..models import CheckReport
from . import register_suite
from .base import BaseSuite, SuiteContext


@register_suite
class QybeSuite(BaseSuite):
    order = 0
    description = "braid relation for tau R"

    @classmethod
    def suite_name(cls) -> str:
        return "qybe"

    def run(self, ctx: SuiteContext) -> list[CheckReport]:
        return [self.guarded("qybe", {"N": n}, None, lambda n=n: qybe_check(n)) for n in ctx.distinct_dims]


@register_suite
class HeckeSuite(BaseSuite):
    order = 1
    description = "Hecke relation tau R - R^-1 tau = (q - q^-1) id"

    @classmethod
    def suite_name(cls) -> str:
        return "hecke"

    def run(self, ctx: SuiteContext) -> list[CheckReport]:
        return [self.guarded("hecke", {"N": n}, None, lambda n=n: hecke_check(n)) for n in ctx.distinct_dims]

"""PBW certification of the O_q and D_q presentations."""

from ..models import CheckReport
from ..relations import AlgebraKind
from ..verify import pbw_check, rank_crosscheck
from . import register_suite
from .base import BaseSuite, SuiteContext


@register_suite
class PbwSuite(BaseSuite):
    order = 10
    description = "standard monomials span and filtered dimensions match the classical counts"

    @classmethod
    def suite_name(cls) -> str:
        return "pbw"

    def run(self, ctx: SuiteContext) -> list[CheckReport]:
        reports = []
        threshold = int(ctx.setting("degree_bounds", "pbw_large_threshold", 8))
        for kind in (AlgebraKind.OQ, AlgebraKind.DQ):
            p = ctx.presentation(kind)
            if len(p.generators) > threshold:
                D = ctx.bound("pbw_large", 3)
            else:
                D = ctx.bound("pbw_small", 4)
            params = {"kind": kind.value, "bound": D}

            def check(p=p, D=D) -> CheckReport:
                engine = ctx.engine(p.kind)
                span = engine.span(D)
                report = pbw_check(p, D, span)
                if report.ok:
                    crosscheck = rank_crosscheck(
                        span,
                        int(ctx.setting("crosscheck", "points", 3)),
                        int(ctx.setting("crosscheck", "seed", 20240229)),
                    )
                    report.witness = {**(report.witness or {}), "crosscheck": crosscheck}
                return report

            reports.append(self.guarded("pbw", params, D, check))
        return reports

"""Classical and quasi-classical limits."""

from ..degeneration import classical_limit_check, hbar_moment_check
from ..models import CheckReport
from ..relations import AlgebraKind
from . import register_suite
from .base import BaseSuite, SuiteContext


@register_suite
class ClassicalSuite(BaseSuite):
    order = 70
    description = "q = 1 relations and the h^2 coefficient of the moment ideal"

    @classmethod
    def suite_name(cls) -> str:
        return "classical"

    def run(self, ctx: SuiteContext) -> list[CheckReport]:
        reports = [
            self.guarded(
                "classical_limit", {"kind": kind.value}, None,
                lambda kind=kind: classical_limit_check(ctx.presentation(kind)),
            )
            for kind in (AlgebraKind.OQ, AlgebraKind.DQ)
        ]
        # loop vertices have no h-expansion; `degenerate` reports them
        if not ctx.loop_edges:
            order = int(ctx.setting("degeneration", "order", 2))
            reports.append(self.guarded(
                "hbar_moment", {"order": order}, None, lambda: hbar_moment_check(ctx.quiver, order=order)
            ))
        return reports

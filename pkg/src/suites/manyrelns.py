"""Exchange identities between the edge moment matrices and A, D."""

from ..identities import manyrelns_check
from ..models import CheckReport
from ..relations import AlgebraKind
from . import register_suite
from .base import BaseSuite, SuiteContext


@register_suite
class ManyRelnsSuite(BaseSuite):
    order = 40
    description = "the seven exchange identities for g^alpha, g^beta, A and D"

    @classmethod
    def suite_name(cls) -> str:
        return "manyrelns"

    def run(self, ctx: SuiteContext) -> list[CheckReport]:
        D = ctx.bound("identity", 4)
        reports = []
        for e in ctx.nonloop_edges:
            engine = ctx.engine(AlgebraKind.DQ, e)
            reports.append(self.guarded(
                "manyrelns", {"edge": e.id}, D,
                lambda e=e, engine=engine: manyrelns_check(engine.presentation.quiver, e.id, engine.presentation, D, engine),
            ))
        return reports

"""Moment-map conditions: edge moment condition, loop image, vertex commutation."""

from ..identities import loop_moment_check, moment_condition_check, vertex_commutation_check
from ..models import CheckReport
from ..relations import AlgebraKind
from . import register_suite
from .base import BaseSuite, SuiteContext


@register_suite
class MomentSuite(BaseSuite):
    order = 30
    description = "quantum moment map condition and its consequences"

    @classmethod
    def suite_name(cls) -> str:
        return "moment"

    def run(self, ctx: SuiteContext) -> list[CheckReport]:
        D = ctx.bound("identity", 4)
        reports = []
        for e in ctx.nonloop_edges:
            engine = ctx.engine(AlgebraKind.DQ, e)
            q = engine.presentation.quiver
            reports.append(self.guarded(
                "moment_condition", {"edge": e.id}, D,
                lambda e=e, engine=engine, q=q: moment_condition_check(q, e.id, engine.presentation, D, engine),
            ))
        D_loop = ctx.bound("fourier", 6)
        for e in ctx.loop_edges:
            reports.append(self.guarded(
                "loop_moment", {"edge": e.id}, D_loop, lambda e=e: loop_moment_check(ctx.quiver, e.id, D_loop)
            ))
        q = ctx.quiver
        if not ctx.loop_edges and len(q.vertices) > 1 and all(v.dim == 1 for v in q.vertices):
            reports.append(self.guarded(
                "vertex_commutation", {"quiver": q.name}, D_loop, lambda: vertex_commutation_check(q, D_loop)
            ))
        return reports

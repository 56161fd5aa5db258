"""Reflection equation for edge and vertex moment matrices."""

from ..identities import reflection_check
from ..models import CheckReport
from ..moment import edge_moment_alpha_bar, edge_moment_beta, localized_presentation, vertex_moment
from ..relations import AlgebraKind
from ..verify import IdealEngine
from . import register_suite
from .base import BaseSuite, SuiteContext


@register_suite
class ReflectionSuite(BaseSuite):
    order = 20
    description = "M and Mbar satisfy the reflection equation modulo the D_q ideal"

    @classmethod
    def suite_name(cls) -> str:
        return "reflection"

    def run(self, ctx: SuiteContext) -> list[CheckReport]:
        D = ctx.bound("identity", 4)
        reports = []
        for e in ctx.nonloop_edges:
            engine = ctx.engine(AlgebraKind.DQ, e)
            q = engine.presentation.quiver
            for side, build in (("beta", edge_moment_beta), ("alpha_bar", edge_moment_alpha_bar)):
                params = {"edge": e.id, "side": side}
                reports.append(self.guarded(
                    "reflection", params, D,
                    lambda build=build, engine=engine, q=q: reflection_check(build(q, e.id), engine.presentation, D, engine),
                ))
        # one-dimensional vertices: the vertex moment map is a product of edge factors
        small = [v.id for v in ctx.quiver.vertices if v.dim == 1]
        if small:
            def vertex_checks() -> CheckReport:
                p = localized_presentation(ctx.quiver)
                engine = IdealEngine(p, ctx.max_words, ctx.max_generators)
                parts = [reflection_check(vertex_moment(ctx.quiver, v), p, D, engine) for v in small]
                failing = [r for r in parts if not r.ok]
                return failing[0] if failing else CheckReport.passed(
                    "reflection", {"vertices": small, "bound": D}, {"vertices_checked": len(parts)}
                )

            reports.append(self.guarded("reflection", {"vertices": small}, D, vertex_checks))
        return reports

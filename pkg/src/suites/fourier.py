"""q-Fourier transforms on single edges at d = 1."""

from ..identities import fourier_check
from ..models import CheckReport
from . import register_suite
from .base import BaseSuite, SuiteContext


@register_suite
class FourierSuite(BaseSuite):
    order = 50
    description = "the Fourier transform respects every defining and unit relation"

    @classmethod
    def suite_name(cls) -> str:
        return "fourier"

    def run(self, ctx: SuiteContext) -> list[CheckReport]:
        D = ctx.bound("fourier", 6)
        return [
            self.guarded(
                "fourier", {"edge": e.id}, D,
                lambda e=e: fourier_check(ctx.quiver, e.id, None, D, ctx.max_words, ctx.max_generators),
            )
            for e in ctx.quiver.edges
        ]

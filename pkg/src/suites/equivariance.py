"""Invariance of relation spans under the vertex quantum groups."""

from ..identities import equivariance_check
from ..models import CheckReport
from ..relations import AlgebraKind
from . import register_suite
from .base import BaseSuite, SuiteContext


@register_suite
class EquivarianceSuite(BaseSuite):
    order = 60
    description = "relation spans are stable under every l^{+-i}_j"

    @classmethod
    def suite_name(cls) -> str:
        return "equivariance"

    def run(self, ctx: SuiteContext) -> list[CheckReport]:
        D = ctx.bound("equivariance", 2)
        return [
            self.guarded(
                "equivariance", {"kind": kind.value}, D,
                lambda kind=kind: equivariance_check(ctx.presentation(kind), D, ctx.max_words, ctx.max_generators),
            )
            for kind in (AlgebraKind.OQ, AlgebraKind.DQ)
        ]

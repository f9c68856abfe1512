"""Global caps and default options.

Everything here bounds *search effort*, never correctness: hitting a cap
turns into an explicit error or an Inconclusive verdict upstream, it can
never silently weaken a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


# Composed products grow like d^2 and binom(d, m); this bounds the output
# degree (and hence memory), overridable per call.
DEFAULT_DEGREE_CAP = 4096

# Puiseux expansion order escalates 1, 2, 4, ... up to 2**DEFAULT_ORDER_CAP_EXP.
DEFAULT_ORDER_CAP_EXP = 8

# Bit width at which interval refinement gives up and falls back to exact
# (resultant-based) zero tests.
DEFAULT_PRECISION_BITS = 128

# Default cap for the entry-index scan of Algorithm 1 step 3.
DEFAULT_MAX_UNROLL = 10_000

# Degree cap for standalone algebraic-number resultant arithmetic; exceeding
# it raises DegreeCapExceeded, mapped to Inconclusive by the certifier.
ALGEBRAIC_DEGREE_CAP = 1200


class DegreeCapExceeded(Exception):
    """Raised when a composed product or resultant would exceed a degree cap."""


class OrderCapExceeded(Exception):
    """Raised when Puiseux order escalation hits the configured cap."""


@dataclass(frozen=True)
class Options:
    """Knobs for the certification pipeline (CLI flags map onto these)."""

    truncation_order: int = 1
    max_expansion_order: int = 2 ** DEFAULT_ORDER_CAP_EXP
    max_unroll: int = DEFAULT_MAX_UNROLL
    precision_bits: int = DEFAULT_PRECISION_BITS
    degree_cap: int = DEFAULT_DEGREE_CAP
    dump_cones: str | None = None

    def initial_order(self) -> Fraction:
        return Fraction(self.truncation_order)

"""Commutative semirings driving the inference engine.

Three instances cover the solver's needs: BOOLEAN decides existence (only
zero-versus-positive matters, so one bit per entry suffices), COUNTING
carries exact equilibrium counts in arbitrary-precision integers, and
MAX_PRODUCT performs max-product inference.

MAX_PRODUCT works on exponents: the value eps**k is represented by the
integer k (min is max, addition is multiplication), so results stay exact
for every eps in [0,1) and a numeric eps is applied only when reporting.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Any, Callable


@dataclass(frozen=True)
class Semiring:
    """Carrier plus (plus, times) with identities zero and one.

    ``indicator`` maps a satisfied/violated best-response bit to the carrier
    value of one player's indicator function; ``requires_zero_epsilon``
    marks the instances whose indicator cannot represent a nonzero eps.
    """

    name: str
    zero: Any
    one: Any
    plus: Callable[[Any, Any], Any]
    times: Callable[[Any, Any], Any]
    indicator: Callable[[bool], Any]
    requires_zero_epsilon: bool

    def number(self, value: Any, epsilon: float = 0.0) -> Any:
        """Numeric rendering of a carrier value (exponents become eps**k)."""
        if self.name == "max-product":
            if value == math.inf:
                return 0.0
            return 1 if value == 0 else epsilon**value
        return value


BOOLEAN = Semiring(
    name="boolean",
    zero=False,
    one=True,
    plus=operator.or_,
    times=operator.and_,
    indicator=bool,
    requires_zero_epsilon=True,
)

COUNTING = Semiring(
    name="counting",
    zero=0,
    one=1,
    plus=operator.add,
    times=operator.mul,
    indicator=lambda satisfied: 1 if satisfied else 0,
    requires_zero_epsilon=True,
)

MAX_PRODUCT = Semiring(
    name="max-product",
    zero=math.inf,
    one=0,
    plus=min,
    times=operator.add,
    indicator=lambda satisfied: 0 if satisfied else 1,
    requires_zero_epsilon=False,
)

SEMIRINGS = {s.name: s for s in (BOOLEAN, COUNTING, MAX_PRODUCT)}

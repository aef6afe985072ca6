from typing import TYPE_CHECKING, Optional, Union

from hypdiskpy.expr import Node, has_var, parse, unparse
from hypdiskpy.hypops import HypPoint, OrderEstimate, evaluate, order_estimates
from hypdiskpy.log import log_warning

if TYPE_CHECKING:
    from .crit import CriticalClient
    from .flow import FlowClient
    from .levels import LevelsClient


class HypDisk(object):
    """
    Entry point for one analytic self-map of the disk.

    :param function: DSL text such as ``"example1(a=0.5)"`` or ``"z*z/2"``, or a parsed tree
    """

    def __init__(self, function: Union[str, Node]):
        self._phi = parse(function) if isinstance(function, str) else function
        if not has_var(self._phi):
            log_warning("map %s does not depend on z; phi' vanishes everywhere", unparse(self._phi))

        # service clients
        self._flow: Optional[FlowClient] = None
        self._levels: Optional[LevelsClient] = None
        self._critical: Optional[CriticalClient] = None

    @property
    def phi(self) -> Node:
        return self._phi

    @property
    def text(self) -> str:
        return unparse(self._phi)

    def evaluate(self, z: complex) -> HypPoint:
        return evaluate(self._phi, z)

    def order_estimates(self, grid_density: int) -> OrderEstimate:
        return order_estimates(self._phi, grid_density)

    @property
    def flow(self) -> "FlowClient":
        if not self._flow:
            from hypdiskpy.flow import FlowClient

            self._flow = FlowClient(self._phi)
        return self._flow

    @property
    def levels(self) -> "LevelsClient":
        if not self._levels:
            from .levels import LevelsClient

            self._levels = LevelsClient(self._phi)
        return self._levels

    @property
    def critical(self) -> "CriticalClient":
        if not self._critical:
            from .crit import CriticalClient

            self._critical = CriticalClient(self._phi)
        return self._critical

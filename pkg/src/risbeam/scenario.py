"""Full link description: surface, Tx/Rx placement, and radio parameters."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .geometry import Placement, RisPanel
from .radiation import RadioConfig


@dataclass(frozen=True)
class Scenario:
    """One surface-assisted Tx -> surface -> Rx link."""

    panel: RisPanel
    placement: Placement
    radio: RadioConfig

    def with_placement(self, **changes) -> "Scenario":
        """Copy of the scenario with placement fields replaced."""
        return replace(self, placement=replace(self.placement, **changes))

    def with_panel(self, **changes) -> "Scenario":
        """Copy of the scenario with panel fields replaced."""
        return replace(self, panel=replace(self.panel, **changes))

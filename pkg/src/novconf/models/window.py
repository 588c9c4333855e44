"""Index windows, the finite slice of an infinite generator family."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, ConfigDict, Field


class Window(BaseModel):
    """Bounds on generator emission and on membership multipliers."""

    model_config = ConfigDict(frozen=True)

    index_lo: int
    index_hi: int
    s_max: int = Field(default=2, ge=0)
    max_p: int = Field(default=1, ge=0)
    max_multiplier_degree: int = Field(default=1, ge=0)

    def model_post_init(self, __context: Any) -> None:
        if self.index_lo > self.index_hi:
            msg = f"index_lo ({self.index_lo}) must not exceed index_hi ({self.index_hi})"
            raise ValueError(msg)

    @property
    def indices(self) -> range:
        return range(self.index_lo, self.index_hi + 1)

    @property
    def span(self) -> int:
        return self.index_hi - self.index_lo + 1

    def contains_index(self, n: int) -> bool:
        return self.index_lo <= n <= self.index_hi

    def covers(self, other: Window) -> bool:
        """True when every generator and multiplier of ``other`` is also allowed here."""
        return (
            self.index_lo <= other.index_lo
            and other.index_hi <= self.index_hi
            and self.s_max >= other.s_max
            and self.max_p >= other.max_p
            and self.max_multiplier_degree >= other.max_multiplier_degree
        )

    def label(self) -> str:
        return (
            f"[{self.index_lo},{self.index_hi}] s_max={self.s_max} "
            f"max_p={self.max_p} degree<={self.max_multiplier_degree}"
        )

"""Check reports shared by every audit."""

from typing import Any

from pydantic import BaseModel, Field, computed_field


class CheckItem(BaseModel):
    """One compared quantity."""

    name: str = Field(..., description="What was compared, e.g. 'dF/dz[3]'")
    observed: float
    expected: float
    tolerance: float
    passed: bool

    @classmethod
    def compare(cls, name: str, observed: float, expected: float, tolerance: float) -> "CheckItem":
        """Pass iff |observed - expected| <= tolerance."""
        return cls(
            name=name,
            observed=float(observed),
            expected=float(expected),
            tolerance=float(tolerance),
            passed=bool(abs(observed - expected) <= tolerance),
        )


class CheckReport(BaseModel):
    """Outcome of one audit. ``passed`` holds iff every item passes."""

    check: str
    items: list[CheckItem] = Field(default_factory=list)
    details: dict[str, Any] = Field(
        default_factory=dict, description="Descriptive values that are reported, not asserted"
    )

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    @property
    def failures(self) -> list[CheckItem]:
        return [item for item in self.items if not item.passed]

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def to_text(self) -> str:
        """Plain-text rendering, one line per item."""
        status = "PASS" if self.passed else "FAIL"
        lines = [f"{self.check}: {status} ({len(self.items) - len(self.failures)}/{len(self.items)} items)"]
        for item in self.items:
            mark = "ok " if item.passed else "BAD"
            lines.append(
                f"  [{mark}] {item.name}: observed={item.observed:.6g} "
                f"expected={item.expected:.6g} tol={item.tolerance:.3g}"
            )
        for key, value in self.details.items():
            lines.append(f"  {key}: {value}")
        return "\n".join(lines)

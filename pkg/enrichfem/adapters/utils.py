import math
from fractions import Fraction
from typing import Optional

# 6 significant digits
SCIENTIFIC = "{:.5e}"


def format_sci(value: Optional[float]) -> str:
    if value is None:
        return ""
    if math.isinf(value):
        return "inf"
    return SCIENTIFIC.format(value)


def format_order(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.2f}"


def format_mesh_size(h: float) -> str:
    fraction = Fraction(h).limit_denominator(1 << 20)
    if float(fraction) == h:
        return str(fraction)
    return format_sci(h)


def shifted(orders: list[Optional[float]]) -> list[Optional[float]]:
    """Orders aligned with table rows: the first row has none."""
    return [None] + list(orders)

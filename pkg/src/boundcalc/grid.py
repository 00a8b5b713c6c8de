"""Sample grid: the evaluation points every numeric check runs over.

Dense small naturals catch off-by-one behaviour, powers of two catch
scale trends, and exponential towers probe the asymptotic regime where
slow-growing primitives finally separate.
"""
from __future__ import annotations

from .config import Config, DEFAULT
from .numeral import Numeral


def sample_grid(cfg: Config = DEFAULT, extra: tuple[int, ...] = ()) -> list[Numeral]:
    """Strictly increasing sample points; exact naturals first, towers last."""
    small = set(range(0, cfg.grid_consecutive + 1))
    small.update(1 << k for k in range(1, cfg.grid_pow_max + 1))
    small.update(x for x in extra if x >= 0)
    pts: list[Numeral] = [Numeral.from_int(n) for n in sorted(small)]
    seen = {int(p.lo) for p in pts}
    for k in range(1, cfg.grid_tower_max + 1):
        t = Numeral.tower(k)
        if t.is_exact_nat():
            if t.to_int() in seen:
                continue
            seen.add(t.to_int())
            # keep the list sorted: exact towers up to 2^65536 exceed 2^64
            pts.append(t)
        else:
            pts.append(t)
    return pts


def tail_points(cfg: Config = DEFAULT, count: int = 8) -> list[Numeral]:
    """The largest sample points, for asymptotic-trend checks."""
    pts = sample_grid(cfg)
    return pts[-count:]

"""Exhaustive non-exactness sweep, optionally promoting the first hits to fixtures.

    python scripts/sweep_witnesses.py --seeds 10000
    python scripts/sweep_witnesses.py --seeds 10000 --promote tests/fixtures
"""

import argparse
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from persexc.oracle import InstanceParams, save_witness, search_nonexact, shrink_witness, sweep_nonexact


@dataclass
class SweepConfig:
    seeds: int = 10_000
    start: int = 0
    k_max: int = 1
    p: int = 2
    promote: Optional[Path] = None


def run(cfg: SweepConfig) -> None:
    seeds = range(cfg.start, cfg.start + cfg.seeds)
    for target in ("mv", "pair"):
        t0 = time.perf_counter()
        s = sweep_nonexact(seeds, target, k_max=cfg.k_max, p=cfg.p)
        print(f"{target:<5} seeds={s.seeds} non_exact={s.witnesses} first={s.first} "
              f"seconds={time.perf_counter() - t0:.1f}")
        if cfg.promote is not None and s.first is not None:
            w = shrink_witness(search_nonexact([s.first], target, base=InstanceParams(), k_max=cfg.k_max, p=cfg.p))
            save_witness(w, cfg.promote / f"witness_{target}")
            print(f"      saved {len(w.X)}-simplex witness to {cfg.promote / f'witness_{target}'}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=10_000)
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--k-max", type=int, default=1)
    ap.add_argument("--field", type=int, default=2)
    ap.add_argument("--promote", type=Path)
    a = ap.parse_args()
    run(SweepConfig(a.seeds, a.start, a.k_max, a.field, a.promote))


if __name__ == "__main__":
    main()

"""Direct (X, A) versus excised (B, A∩B) relative barcodes on generated triples.

Barcodes are compared before timing; any mismatch aborts.
"""

import argparse
import statistics
import time
from dataclasses import dataclass

from persexc.excision import excise_barcodes, workload
from persexc.oracle import InstanceParams, generate
from persexc.persistence import barcode, reduce


@dataclass
class BenchConfig:
    triples: int = 50
    min_excised: int = 5
    max_vertices: int = 10
    repeat: int = 5
    p: int = 2
    max_dim: int = 3


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(cfg: BenchConfig) -> None:
    rows = []
    for seed in range(cfg.triples):
        X, A, B = generate(InstanceParams(seed=seed, max_vertices=cfg.max_vertices, max_dim=3, n_levels=5,
                                          min_excised=cfg.min_excised))

        def direct():
            R = reduce(X, A, p=cfg.p)
            return [barcode(R, k) for k in range(cfg.max_dim + 1)]

        def excised():
            return excise_barcodes(X, A, B, cfg.max_dim, p=cfg.p, check=False)

        assert direct() == excise_barcodes(X, A, B, cfg.max_dim, p=cfg.p), f"seed {seed}: barcodes differ"
        s = workload(X, A, B)
        rows.append((seed, s["direct"], s["excised"], best_of(direct, cfg.repeat), best_of(excised, cfg.repeat)))
    print(f"{'seed':>5}{'|X|':>6}{'|B|':>6}{'direct ms':>11}{'excised ms':>12}")
    for seed, nx, nb, td, te in rows:
        print(f"{seed:>5}{nx:>6}{nb:>6}{td * 1e3:>11.3f}{te * 1e3:>12.3f}")
    print(f"median simplices {statistics.median(r[1] for r in rows)} -> {statistics.median(r[2] for r in rows)}; "
          f"median ms {statistics.median(r[3] for r in rows) * 1e3:.3f} -> {statistics.median(r[4] for r in rows) * 1e3:.3f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--triples", type=int, default=50)
    ap.add_argument("--min-excised", type=int, default=5)
    ap.add_argument("--max-vertices", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--field", type=int, default=2)
    a = ap.parse_args()
    run(BenchConfig(a.triples, a.min_excised, a.max_vertices, a.repeat, a.field))


if __name__ == "__main__":
    main()

"""Compare the commutator test with the com-bound test on random (algebra, state) instances.

Prints per-dimension counts and the worst reproduction error of the
constructed ignorance measures.

    python3 scripts/equivalence_sweep.py --per-dim 100 --seed 0
"""
import argparse
import time
from collections import Counter
from dataclasses import dataclass

import numpy as np

from beables.beable import is_beable
from beables.sampling import random_block_instance


@dataclass
class Config:
    dims: tuple = (2, 3, 4, 5, 6)
    per_dim: int = 50
    seed: int = 0


def main(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    disagree, worst = 0, 0.0
    print(f"{'dim':>3} {'n':>5} {'beable':>7} {'agree':>6}  kinds")
    for d in cfg.dims:
        n_true = n_agree = 0
        kinds = Counter()
        for _ in range(cfg.per_dim):
            M, psi, kind = random_block_instance(d, rng)
            rep = is_beable(M, psi)
            kinds[kind] += 1
            n_agree += rep.conditions_agree
            if rep.verdict:
                n_true += 1
                worst = max(worst, rep.measure.reproduction_error(M, psi))
        disagree += cfg.per_dim - n_agree
        print(f"{d:>3} {cfg.per_dim:>5} {n_true:>7} {n_agree:>6}  {dict(sorted(kinds.items()))}")
    print(f"disagreements: {disagree}   worst reproduction error: {worst:.2e}"
          f"   elapsed: {time.perf_counter() - t0:.1f}s")
    return disagree


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=list(Config.dims))
    ap.add_argument("--per-dim", type=int, default=Config.per_dim)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    raise SystemExit(1 if main(Config(tuple(a.dims), a.per_dim, a.seed)) else 0)

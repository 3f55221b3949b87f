#!/usr/bin/env python3
"""Sweep reduced spectra and tabulate how the span dimension responds.

For a chosen backend the reduced point's log-spectrum is swept through
every split of its rank into a top class (log a), a bottom class
(-log a) and a free middle class (log b with |b| < a); each split is
realised at several random frames and the predicted dimension is
cross-checked by the sampling oracle.  Output is CSV on stdout.
"""

import argparse
import dataclasses
import itertools
import sys

import numpy as np

from conemid import ejalg, midspan, oracle, selftest
from conemid.conegeom import JordanCone


@dataclasses.dataclass
class SweepConfig:
    backend: str = "sym:4"
    trials: int = 3
    samples: int = 120
    seed: int = 0
    top_log: float = 1.0
    mid_log: float = 0.3


def parse_backend(text):
    name, _, size = text.partition(":")
    m = int(size)
    if name in ("sym", "sym-real"):
        return ejalg.sym_real(m)
    if name in ("herm", "herm-complex"):
        return ejalg.herm_complex(m)
    if name == "spin":
        return ejalg.spin_factor(m)
    raise SystemExit(f"unknown backend {text!r}")


def splits(rank):
    """(top, middle, bottom) multiplicities with top, bottom >= 1."""
    for top in range(1, rank):
        for bottom in range(1, rank - top + 1):
            yield top, rank - top - bottom, bottom


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    cfg = SweepConfig()
    ap.add_argument("--backend", default=cfg.backend, help="e.g. sym:4, herm:3, spin:6")
    ap.add_argument("--trials", type=int, default=cfg.trials)
    ap.add_argument("--samples", type=int, default=cfg.samples)
    ap.add_argument("--seed", type=int, default=cfg.seed)
    ap.add_argument("--top-log", type=float, default=cfg.top_log)
    ap.add_argument("--mid-log", type=float, default=cfg.mid_log)
    args = ap.parse_args()

    alg = parse_backend(args.backend)
    cone = JordanCone(alg)
    gen = oracle.philox_stream(args.seed)
    print("backend,top,middle,bottom,k,predicted,formula,sampled,accepted")
    for top, middle, bottom in splits(alg.rank):
        logs = np.array([args.top_log] * top + [args.mid_log] * middle
                        + [-args.top_log] * bottom)
        for _ in range(args.trials):
            x, y = selftest.pair_with_spectrum(gen, alg, logs)
            rep = midspan.midpoint_span(x, y, cone)
            det = oracle.sample_detail(x, y, cone, args.samples,
                                       seed=args.seed, report=rep)
            print(",".join(map(str, [
                alg.label(), top, middle, bottom,
                rep.attainment.k, rep.dimension, rep.formula_dimension,
                det.estimated_dimension, det.accepted_count,
            ])))
            sys.stdout.flush()


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Desk-scale hyperbolic runs: build a rank-2 sublattice avoiding small
nonzero values, then its Pell automorph, for a couple of catalog lattices."""
import time

from qforge.catalog import resolve
from qforge.forge import find_rank2_avoiding, verify_certificate
from qforge.isom import classify, find_hyperbolic
from qforge.lattice import min_nonzero_abs

RUNS = [("U+U+<2>", 4), ("K3", 2), ("U+U+U", 6)]


def main():
    for name, n_bound in RUNS:
        latt = resolve(name)
        t0 = time.monotonic()
        res = find_rank2_avoiding(latt, n_bound)
        sub = res.lattice.as_lattice()
        iso = find_hyperbolic(sub)
        cls = classify(iso)
        best, _ = min_nonzero_abs(sub, 1000)
        dt = time.monotonic() - t0
        print(f"=== {name}  (avoid |q| < {n_bound}) ===")
        print(f"  basis      : {res.lattice.basis}")
        print(f"  gram       : {res.lattice.gram()}")
        cert = res.certificate
        print(f"  certificate: p={cert.p} alpha=({cert.alpha1},{cert.alpha2}) "
              f"beta=({cert.beta1},{cert.beta2})  valid={verify_certificate(cert, n_bound)}")
        print(f"  min |q| at height 1000: {best}")
        print(f"  automorph  : {iso.matrix}  [{cls.tag.value}]")
        print(f"  elapsed    : {dt:.2f}s")
        print()


if __name__ == "__main__":
    main()

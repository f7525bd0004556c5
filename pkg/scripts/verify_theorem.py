"""Verify the quantum Stanley-Reisner relations on the six worked examples.

For every primitive collection K of P1, P2, P1xP1, F1, F2, F3 (tangent
bundle) and every effective class in the window, checks the relation
Q_K = q^{beta_K} prod Q_c^{-d_c} three ways: exponent identity, full
polynomial expansion, and correlator equality for a few insertions.

Usage: python scripts/verify_theorem.py [c1-bound]
"""

import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from qsheaf import (beta_K, build_fan, class_lattice, effective_window,
                    find_anchor, linear_part, qsr_generators,
                    tangent_deformation, verify_qc_relation)
from qsheaf.poly import Polynomial


def hirzebruch(n):
    return build_fan(2, [(1, 0), (-1, n), (0, 1), (0, -1)],
                     [(0, 2), (1, 2), (1, 3), (0, 3)])


FANS = [
    ("P1", build_fan(1, [(1,), (-1,)], [(0,), (1,)])),
    ("P2", build_fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])),
    ("P1xP1", build_fan(2, [(1, 0), (-1, 0), (0, 1), (0, -1)],
                        [(0, 2), (1, 2), (1, 3), (0, 3)])),
    ("F1", hirzebruch(1)),
    ("F2", hirzebruch(2)),
    ("F3", hirzebruch(3)),
]


def main() -> int:
    bound = int(sys.argv[1]) if len(sys.argv) > 1 else 6
    failures = 0
    total = 0
    t0 = time.perf_counter()
    for name, fan in FANS:
        cl = class_lattice(fan)
        lin = linear_part(cl, tangent_deformation(cl))
        window = effective_window(cl, bound, coeff_bound=bound)
        rels = qsr_generators(lin)
        print(f"{name}: {len(rels)} relation(s), {len(window)} sector(s)")
        probes = [Polynomial.const(cl.pic_rank, 1),
                  Polynomial.variable(cl.pic_rank, 0)]
        for K in cl.primitive_collections:
            bk, _ = beta_K(cl, K)
            ok_all = True
            for idx, beta in enumerate(window):
                anchor = find_anchor(cl, [beta, beta + bk])
                ok = verify_qc_relation(lin, K, beta, anchor)
                ok = ok and verify_qc_relation(lin, K, beta, anchor, route="expand")
                if idx % 5 == 0:
                    ok = ok and verify_qc_relation(lin, K, beta, anchor,
                                                   route="correlator",
                                                   insertions=probes)
                total += 1
                if not ok:
                    failures += 1
                    ok_all = False
                    print(f"  K={K.edges} beta d={beta.d}: FAIL")
            print(f"  K={K.edges}: {'all pass' if ok_all else 'FAILURES'}")
    dt = time.perf_counter() - t0
    print(f"\n{total} cases checked in {dt:.2f}s, {failures} failure(s)")
    return 2 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

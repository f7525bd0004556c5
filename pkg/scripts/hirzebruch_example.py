"""Walk through the Hirzebruch-surface sector example.

For F_n with beta the class of the -n curve (d-vector (1,1,-n,0)) the
moduli space degenerates: the edge (rho4, 0) drops out and the remaining
four enhanced edges assemble the fan of P^3.  This script prints the sector
bookkeeping, the graded dimensions of the sector ring, the four-fermi
factor, and the quantum relations.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from qsheaf import (build_fan, class_lattice, four_fermi, linear_part,
                    quotient_dims, sector, sector_gb, qsr_generators,
                    tangent_deformation)


def main() -> None:
    for n in (1, 2, 3):
        fan = build_fan(2, [(1, 0), (-1, n), (0, 1), (0, -1)],
                        [(0, 2), (1, 2), (1, 3), (0, 3)])
        cl = class_lattice(fan)
        lin = linear_part(cl, tangent_deformation(cl))
        beta = cl.curve_from_d((1, 1, -n, 0))
        sec = sector(lin, beta)
        print(f"F_{n}, beta with d = {beta.d}:")
        print(f"  enhanced edges: {sec.enhanced_edges}")
        print(f"  degenerate edges: {sec.degenerate}")
        print(f"  moduli dimension n_beta = {sec.n_beta}")
        dims = quotient_dims(sector_gb(lin, beta), sec.n_beta + 1)
        print(f"  sector ring dims: {dims[:-1]}  (the cohomology of P^3)")
        ff = four_fermi(lin, beta)
        print(f"  four-fermi factor: {ff.to_str()}")
        print("  quantum relations:")
        for rel in qsr_generators(lin):
            mori = cl.mori_coordinates(rel.beta_k)
            print(f"    K={rel.collection.edges}: {rel.lhs.to_str()} = "
                  f"q^{list(mori)} * "
                  + (" * ".join(f"({c.vec} class)^{m}" for c, m in rel.kminus)
                     or "1"))
        print()


if __name__ == "__main__":
    main()

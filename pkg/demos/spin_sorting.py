"""Spin sorting on the Moebius strip versus a flat control.

Solves both spin sectors on a modest grid, then lists co-propagating level
pairs with their mean transverse positions.  Takes about a minute.

Run:  python demos/spin_sorting.py [n_r n_theta]
"""
import sys

from mobius_dirac import dirac
from mobius_dirac.surface import StripParams

n_r, n_t = (int(a) for a in sys.argv[1:3]) if len(sys.argv) > 2 else (16, 64)
p = StripParams()


def solve(options):
    grid = dirac.DiracGrid(p, n_r, n_t, options.boundary)
    return [dirac.spectrum(dirac.assemble(p, grid, s, 0.0, options), 40) for s in (1, -1)]


for name, options in (("Moebius", dirac.DiracOptions()), ("flat control", dirac.flat_control_options())):
    plus, minus = solve(options)
    pairing = dirac.sector_pairing(plus, minus)
    sh = dirac.spin_hall_diagnostics(plus, minus, 40)
    print(f"\n{name} on {n_r}x{n_t}: sector gap {pairing['max_gap']:.2e}, pair correlation {sh['pair_correlation']:+.3f}")
    print(f"  {'E(+)':>9} {'E(-)':>9} {'<r>(+)':>8} {'<r>(-)':>8}  current")
    for e_p, e_m, r_p, r_m, j in sh["pairs"][:8]:
        print(f"  {e_p:+9.4f} {e_m:+9.4f} {r_p:+8.3f} {r_m:+8.3f}  {'+' if j > 0 else '-'}")

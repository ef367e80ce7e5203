"""Walk through the strip geometry at a few hand-checkable points.

Run:  python demos/geometry_tour.py
"""
import numpy as np

from mobius_dirac import frames, geometry, surface
from mobius_dirac.surface import StripParams

p = StripParams(R=4.0, w=1.0, twist_k=1)
print(f"strip R={p.R} w={p.w} twist={p.twist_k}, theta runs over [0, {p.theta_max / np.pi:.0f} pi]")

for r, t in [(0.0, 0.0), (1.0, 0.0), (1.0, 2 * np.pi)]:
    print(f"  embed(r={r}, theta={t / np.pi:.0f} pi) = {np.round(surface.embed(p, r, t), 12)}")

f = surface.frame(p, 0.0, 0.0)
print(f"frame at the origin: e_r={f.e_r}, e_s={f.e_s}, e_n={f.e_n}, N={f.N}")

ff = geometry.fundamental_forms(p, 0.0, np.pi)
print("\nat (r, theta) = (0, pi):")
print(f"  g     = {ff.g.tolist()}")
print(f"  h     = {np.round(ff.h, 12).tolist()}")
print(f"  alpha = {np.round(ff.alpha, 12).tolist()}")
print(f"  M = {ff.M:+.6f}  K = {ff.K:+.6f}")
f_q, _, _ = geometry.rescale(ff.alpha, 0.1)
print(f"  rescaling factor at q3 = 0.1: {f_q:.8f}")
print(f"  admissible |q3| below {float(geometry.q3_bound(p, 0.0, np.pi)):.4f}")

# the frame rotation lifts to SU(2); one trip around theta_max flips its sign
for k in (1, 2, 3):
    q = StripParams(twist_k=k)
    lift = frames.theta_loop_lift(q, 0.0)
    end = np.real(np.trace(lift[-1] @ lift[0].conj().T)) / 2
    print(f"twist {k}: spin lift after theta_max returns with sign {end:+.0f}")

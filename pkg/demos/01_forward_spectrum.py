"""Forward problem walk-through: from a shear-modulus profile to spectral data.

A low-velocity channel in the shear modulus acts as a wave guide.  After the
change of variables the medium becomes a Schrodinger problem on the half-line
whose trapped modes (eigenvalues on the positive imaginary k-axis) and leaky
modes (resonances below the real axis) are zeros of the Jost function.

Run:  python3 demos/01_forward_spectrum.py        (artifacts under demos/out)
"""

import os

import numpy as np

from lovespec import (
    RobinProblem,
    direct_jost_evaluator,
    find_eigenvalues,
    find_resonances,
    jost_function_derivative,
    jump_function,
    norming_constants,
    profiles,
    schrodinger_from_love,
)
from lovespec.spectrum import close_under_pairing

out = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out, exist_ok=True)

# A smooth dip in the shear modulus, homogeneous below depth 1.
profile = profiles.bump_profile(strength=0.25, width=0.4, n=2501)
omega = 2.0
potential, h = schrodinger_from_love(profile, omega=omega)
print(f"omega = {omega}: Robin coefficient h = {h:.3e}, "
      f"|V|_1 = {potential.norm_l1():.3f}")

prob = RobinProblem(potential=potential, h=h)
ev = direct_jost_evaluator(prob)

eigen = find_eigenvalues(ev, tau_max=5.0)
print(f"trapped modes (k on the imaginary axis): {np.round(eigen, 6)}")

alphas = norming_constants(ev, lambda k: jost_function_derivative(prob, k), eigen)
print(f"norming constants: {np.round(alphas, 6)}")

resonances = close_under_pairing(find_resonances(ev, region=(0.05, 25.0, -6.0, 0.0)))
print(f"{resonances.size} resonances with |Re k| <= 25:")
for z in resonances[resonances.real >= 0]:
    print(f"   {z.real:8.4f} {z.imag:+8.4f} i")

lam = np.geomspace(0.1, 400.0, 9)
print("jump function T(lambda) samples (positive on the whole cut):")
for l, t in zip(lam, jump_function(ev, lam)):
    print(f"   T({l:9.3f}) = {t:.6f}")

# persist the potential for the next demo
from lovespec import write_potential

write_potential(potential, h, os.path.join(out, "bump_potential.csv"),
                os.path.join(out, "bump_potential.json"))
print(f"potential written to {out}/bump_potential.csv")

"""From a real equation Im w = phi(z, zbar, Re w) to the normal form w = Q(z, chi, tau).

Run: python demos/complexify_walkthrough.py
"""

from __future__ import annotations

from segrekit import RealDefiningFunction, classify, complexify

CASES = [
    ("Lewy quadric", "z*chi", 1),
    ("exponential infinite type", "s*sin(z*chi)/(cos(z*chi) + 1)", 1),
    ("tube over a quartic", "z*chi + z^2*chi^2", 1),
    ("two variables, degenerate in z2", "z1*chi1 + z1*chi2^2 + z2^2*chi1", 2),
]

for label, phi, n in CASES:
    M = complexify(RealDefiningFunction.from_text(phi, n, order=8, name=label))
    print(f"{label}: Im w = {phi}")
    print(f"  Q = {M.Q}")
    print(f"  real: {M.reality}")
    for check, verdict in classify(M).verdicts.items():
        print(f"  {check}: {verdict}")
    print()

"""Named metrics on the parameter manifold and their unified coefficients."""

import numpy as np

from infogeo import metric as met
from infogeo import oracle
from infogeo.family import FamilyParams, Point
from infogeo.metric import Tangent

pt = Point([[2.0, 0.3], [0.3, 1.0]], [0.1, -0.2])
a = Tangent([[0.4, 0.1], [0.1, -0.3]], [0.3, -0.1])
b = Tangent([[0.2, -0.2], [-0.2, 0.5]], [0.2, 0.4])

specs = [met.Renyi(), met.Fisher(0.8), met.Fisher(1.0), met.Fisher(1.5), met.CalvoOller(2.0), met.LMR()]
for spec in specs:
    fp = FamilyParams(2, spec.p) if isinstance(spec, met.Fisher) else None
    mp = met.as_unified(spec, 2)
    print(f"{spec.name:8s} g(a,b) = {met.named_eval(spec, fp, pt, a, b): .10f}   "
          f"alpha={mp.alpha: .4f} beta={mp.beta:.4f} scale={mp.scale:.4f}")

# the Fisher form against the Fisher information integral
for p in (0.8, 1.5):
    fp = FamilyParams(2, p)
    est = oracle.numeric_fisher(fp, pt, a, b)
    print(f"Fisher p={p}: closed {met.named_eval(met.Fisher(p), fp, pt, a, b): .10f}  numeric {est.value: .10f}")

# Csiszar divergences induce multiples of the Fisher form
fp = FamilyParams(2, 1.0)
F = met.named_eval(met.Fisher(1.0), fp, pt, a, a)
for phi in (met.KL, met.HELLINGER, met.PhiDescriptor.alpha_relative(0.3)):
    print(f"{phi.name:22s} induced / Fisher = {met.csiszar_induced_form(phi, fp, pt, a, a) / F:.6f}")

# Kubo-Mori and largest metrics only see the matrix part
D, X, Y = pt.D, a.X, b.X
print("Kubo-Mori", met.kubo_mori_eval(D, X, Y), "integral", oracle.kubo_mori_integral(D, X, Y))
print("largest  ", met.largest_eval(D, X, Y))
print("at D = I both equal Tr(XY) =", np.trace(X @ Y), met.kubo_mori_eval(np.eye(2), X, Y))

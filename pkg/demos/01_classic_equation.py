"""The classic Lamb-Bateman equation: int_0^inf u(x - y^2) dy = f(x).

Solve it for an exponential right-hand side, compare against the closed
form (2/sqrt(pi)) sqrt(lam) e^(lam x), and certify the solution by pushing
it back through the forward integral.
"""

import math

import numpy as np

import fraclamb as fl

cfg = fl.QuadratureConfig()
lam = 2.0
f = fl.Exponential(lam)

u = fl.solve_classic(f, cfg)

xs = np.linspace(-2.0, 2.0, 9)
closed = (2.0 / math.sqrt(math.pi)) * math.sqrt(lam) * np.exp(lam * xs)

print("x        u(x)            closed form     rel err")
for x, got, want in zip(xs, u(xs), closed):
    print(f"{x:+.2f}   {got: .10e}  {want: .10e}  {abs(got / want - 1):.1e}")

# Residual certificate: forward(u) should reproduce f.
print("\nforward operator applied to the solution:")
for x in (-1.0, 0.0, 1.0):
    fwd = fl.forward_power(u, 2, x, cfg)
    print(f"  x={x:+.1f}: forward={fwd:.12f}  f={float(f(x)):.12f}  "
          f"residual={fwd - float(f(x)):+.2e}")

report = fl.verify(fl.ProblemSpec(variant="classic"), f, (-2.0, 2.0), 11, cfg)
print(f"\nverify: max relative residual over 11 probes = {report.max_rel_residual:.2e}")

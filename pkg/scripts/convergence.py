"""Global error at t = 1 against step size for the built-in methods, with fitted slopes.

Also sweeps alpha for aromatic Euler on a one-dimensional and a two-dimensional
linear problem: alpha = 1/2 gains an order only when d = 1.
"""

import argparse
from dataclasses import dataclass, field

import numpy as np

from aromatic.ark import aromatic_euler, get_method, integrate
from aromatic.checks import PROBLEMS, default_hs, fitted_slope, global_errors
from aromatic.polyfield import PolyVectorField


@dataclass
class ConvergenceConfig:
    methods: list = field(default_factory=lambda: ["euler", "aromatic-euler(0)", "aromatic-euler(1)",
                                                    "rk4", "implicit-midpoint"])
    problems: list = field(default_factory=lambda: list(PROBLEMS))
    alphas: list = field(default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0])


def diag_errors(alpha, hs, rates=(1.0, 2.0)):
    f = PolyVectorField.linear(np.diag(rates))
    exact = np.exp(np.array(rates))
    out = []
    for h in hs:
        n = int(round(1 / h))
        y = integrate(aromatic_euler(alpha), f, np.ones(len(rates)), 1 / n, n)[-1]
        out.append(float(np.max(np.abs(y - exact))))
    return np.array(out)


def main(cfg: ConvergenceConfig) -> None:
    for problem in cfg.problems:
        print(f"# problem {problem}")
        for name in cfg.methods:
            hs = default_hs(name)
            errs = global_errors(get_method(name), problem, hs)
            print(f"{name:<20} slope {fitted_slope(hs, errs):6.3f}   " + " ".join(f"{e:.2e}" for e in errs))
    hs = [2.0**-k for k in range(3, 10)]
    print("# aromatic Euler alpha sweep (slope on d=1 linear, slope on d=2 diagonal)")
    for a in cfg.alphas:
        s1 = fitted_slope(hs, global_errors(aromatic_euler(a), "linear", hs))
        s2 = fitted_slope(hs, diag_errors(a, hs))
        print(f"alpha={a:<5g} {s1:6.3f} {s2:6.3f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--methods", nargs="*")
    args = p.parse_args()
    cfg = ConvergenceConfig()
    if args.methods:
        cfg.methods = args.methods
    main(cfg)

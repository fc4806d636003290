"""Regenerates frozen_values.hpp: reference values computed independently
with mpmath (tanh-sinh quadrature, 30 digits) from the closed-form model."""
import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 30
ROOT = Path(__file__).resolve().parents[2]


def load(name):
    return json.loads((ROOT / "data" / "objects" / f"{name}.json").read_text())


def alpha(s, theta, phi):
    return phi + sum(t * s ** (i + 1) / (i + 1) for i, t in enumerate(theta))


def point(q, obj, s, d=0):
    *theta, x, y, phi = q
    L, D = mp.mpf(obj["L"]), mp.mpf(obj["D"])
    px = x + L * mp.quad(lambda v: mp.sin(alpha(v, theta, phi)), [0, s]) if s > 0 else mp.mpf(x)
    py = y - L * mp.quad(lambda v: mp.cos(alpha(v, theta, phi)), [0, s]) if s > 0 else mp.mpf(y)
    a = alpha(s, theta, phi)
    return px - D * d * mp.cos(a), py - D * d * mp.sin(a)


def lumps(obj):
    pts = [(0, obj["m_0"])]
    pts += [(mp.mpf(2 * k - 1) / 12, mp.mpf(obj["m_L"]) / 6) for k in range(1, 7)]
    pts.append((1, obj["m_1"]))
    return pts


def potential(theta, phi, obj):
    g = obj["gravity"]
    n1 = len(theta)
    v = sum(m * g * point(list(theta) + [0, 0, phi], obj, s)[1] for s, m in lumps(obj))
    dt = [theta[i] - obj["theta_bar"][i] for i in range(n1)]
    H = [[mp.mpf(1) / (i + j + 1) for j in range(n1)] for i in range(n1)]
    return v + obj["k"] / 2 * sum(dt[i] * H[i][j] * dt[j] for i in range(n1) for j in range(n1))


def equilibrium(phi, obj, seed):
    n1 = len(seed)

    def grad(*theta):
        return [mp.diff(lambda t: potential([*theta[:i], t, *theta[i + 1:]], phi, obj), theta[i])
                for i in range(n1)]

    return list(mp.findroot(grad, seed, tol=1e-24))


def mass_matrix(q, obj):
    n = len(q)
    B = [[mp.mpf(0)] * n for _ in range(n)]
    for s, m in lumps(obj):
        J = []
        for k in range(n):
            J.append([mp.diff(lambda t: point([*q[:k], t, *q[k + 1:]], obj, s)[c], q[k]) for c in range(2)])
        for i in range(n):
            for j in range(n):
                B[i][j] += m * (J[i][0] * J[j][0] + J[i][1] * J[j][1])
    return B


def fmt(v):
    return mp.nstr(v, 20, min_fixed=-mp.inf, max_fixed=mp.inf) if abs(v) > 1e-300 else "0.0"


def main():
    ob1 = load("ob1")
    ob4 = load("ob4")
    configs = [
        [0.3, -0.8, 0.1, 0.2, 0.4],
        [-2.0, 3.5, -0.05, 0.3, -2.5],
        [5.0, -6.0, 0.0, 0.0, 3.0],
    ]
    lines = ["#pragma once", "", "// Generated by frozen_values.py; do not edit.", "", "namespace dlo::frozen {", ""]
    lines.append("struct PointCase {\n  double q[5];\n  double s;\n  double d;\n  double x;\n  double y;\n};")
    lines.append("")
    lines.append("// OB1 geometry.")
    lines.append("inline constexpr PointCase kOb1Points[] = {")
    for q in configs:
        for s, d in [(1, 0), (0.37, 0.5), (0.8, -0.25)]:
            x, y = point(q, ob1, mp.mpf(s), mp.mpf(d))
            lines.append(f"    {{{{{', '.join(map(str, q))}}}, {s}, {d}, {fmt(x)}, {fmt(y)}}},")
    lines.append("};")
    lines.append("")
    q = configs[0]
    B = mass_matrix(q, ob1)
    lines.append("// OB1 mass matrix at kOb1Points[0].q.")
    lines.append("inline constexpr double kOb1MassMatrix[5][5] = {")
    for row in B:
        lines.append("    {" + ", ".join(fmt(v) for v in row) + "},")
    lines.append("};")
    lines.append("")
    for name, obj in [("Ob1", ob1), ("Ob4", ob4)]:
        e0 = equilibrium(0, obj, [mp.mpf(v) for v in obj["theta_bar"]])
        e1 = equilibrium(mp.pi / 4, obj, e0)
        lines.append(f"// {name.upper()} equilibria at phi = 0 and phi = pi/4.")
        lines.append(f"inline constexpr double k{name}EquilibriumPhi0[2] = {{{fmt(e0[0])}, {fmt(e0[1])}}};")
        lines.append(f"inline constexpr double k{name}EquilibriumPhiQuarter[2] = {{{fmt(e1[0])}, {fmt(e1[1])}}};")
        lines.append("")
    lines.append("}  // namespace dlo::frozen")
    (Path(__file__).parent / "frozen_values.hpp").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()

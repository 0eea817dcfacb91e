#!/usr/bin/env python3
"""Regenerate the zero fixtures under data/.

  zeta_zeros.txt      ordinates of zeta zeros (mpmath.zetazero), zeta-heights format
  dirichlet_zeros.txt zeros of L(s, chi) for every primitive chi of modulus
                      2..MAX_Q, tabular format, keyed by the crate's "q:index"
                      labels

The character table is produced by the CLI:

    shiftedprime characters --max-q 30 --primitive-only --out chars.csv
    python3 scripts/gen_zero_fixtures.py chars.csv data/

Zeros on the critical line are located as sign changes of the Hardy-type
function Z(t) = Re(e^{-i phi} e^{i Theta(t)} L(1/2 + it, chi)) and refined with
Brent's method. Completeness to height H is certified per character by
comparing the number found with the argument-principle count

    N(H) = (Theta(H) - Theta(-H) + arg L(1/2 + iH) - arg L(1/2 - iH)) / pi,

where arg L is continued horizontally from sigma = 2. A mismatch aborts.
For real characters L(sigma, chi) is also checked to have no zero on
[1/2, 1).
"""

import math
import sys
from fractions import Fraction

import mpmath
import numpy as np
from scipy.optimize import brentq
from scipy.special import loggamma

ZETA_HEIGHT = 1000.0
DIRICHLET_HEIGHT = 30.0
MAX_Q = 30

# Bernoulli numbers B_2 .. B_20
BERNOULLI = [
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
    Fraction(43867, 798), Fraction(-174611, 330),
]
EM_TERMS = 50


def hurwitz(s, alpha):
    """Euler-Maclaurin Hurwitz zeta, vectorized over complex s."""
    s = np.asarray(s, dtype=complex)
    total = np.zeros_like(s)
    for k in range(EM_TERMS):
        total += (k + alpha) ** (-s)
    big = EM_TERMS + alpha
    total += big ** (1 - s) / (s - 1) + 0.5 * big ** (-s)
    rising = s.copy()  # s (s+1) ... (s + 2j - 2)
    for j, b in enumerate(BERNOULLI, start=1):
        coeff = float(b) / math.factorial(2 * j)
        total += coeff * rising * big ** (-s - 2 * j + 1)
        rising = rising * (s + 2 * j - 1) * (s + 2 * j)
    return total


def l_function(s, q, values):
    s = np.asarray(s, dtype=complex)
    acc = np.zeros_like(s)
    for a in range(1, q + 1):
        v = values[a % q]
        if v != 0:
            acc += v * hurwitz(s, a / q)
    return acc * q ** (-s)


def theta(t, q, parity):
    t = np.asarray(t, dtype=float)
    return 0.5 * t * math.log(q / math.pi) + np.imag(loggamma((0.5 + parity + 1j * t) / 2))


def arg_on_line(height, q, values):
    """Continuous arg L(1/2 + i height) from sigma = 2."""
    sigmas = np.linspace(2.0, 0.5, 3001)
    vals = l_function(sigmas + 1j * height, q, values)
    return np.unwrap(np.angle(vals))[-1]


def parse_characters(path):
    chars = []
    with open(path) as fh:
        lines = [l for l in fh if l.strip() and not l.startswith("#")]
    header = lines[0].strip().split(",")
    col = {name: i for i, name in enumerate(header)}
    for line in lines[1:]:
        f = line.strip().split(",")
        q, idx = int(f[col["q"]]), int(f[col["index"]])
        parity = 0 if int(f[col["parity"]]) == 1 else 1
        real = f[col["real"]] == "true"
        values = []
        for ph in f[col["phases"]].split(";"):
            if ph == "*":
                values.append(0)
            else:
                num, den = map(int, ph.split("/"))
                values.append(complex(np.exp(2j * np.pi * num / den)))
        chars.append((q, idx, parity, real, values))
    return chars


def zeros_of(q, values, parity, height):
    grid = np.arange(-height - 0.5, height + 0.5 + 1e-9, 0.01)
    vals = l_function(0.5 + 1j * grid, q, values) * np.exp(1j * theta(grid, q, parity))
    # common phase of the completed function on the line, mod pi
    mags = np.abs(vals)
    pick = mags > 0.5 * np.median(mags)
    phase = np.angle(np.mean(vals[pick] ** 2)) / 2.0
    rot = np.exp(-1j * phase)
    z = np.real(vals * rot)
    worst_im = np.max(np.abs(np.imag(vals * rot)) / np.maximum(mags, 1e-300))
    assert worst_im < 1e-6, f"phase not constant for {q}: {worst_im}"

    def zfun(t):
        v = l_function(np.array([0.5 + 1j * t]), q, values)[0]
        return float(np.real(v * np.exp(1j * theta(t, q, parity)) * rot))

    roots = []
    for i in range(len(grid) - 1):
        if z[i] == 0.0:
            roots.append(grid[i])
        elif z[i] * z[i + 1] < 0:
            roots.append(brentq(zfun, grid[i], grid[i + 1], xtol=1e-13, rtol=1e-15))
    return [r for r in roots if abs(r) <= height]


def certified_count(q, values, parity, height):
    n = (theta(height, q, parity) - theta(-height, q, parity)
         + arg_on_line(height, q, values) - arg_on_line(-height, q, values)) / math.pi
    rounded = round(n)
    assert abs(n - rounded) < 0.05, f"argument count not integral for {q}: {n}"
    return rounded


def no_real_zero(q, values):
    sig = np.linspace(0.5, 0.999, 500)
    v = np.real(l_function(sig.astype(complex), q, values))
    return bool(np.all(v > 0) or np.all(v < 0))


def check_against_mpmath(q, values, ts):
    for t in ts:
        ours = l_function(np.array([0.5 + 1j * t]), q, values)[0]
        ref = complex(mpmath.dirichlet(mpmath.mpc(0.5, t), values))
        assert abs(ours - ref) < 1e-10 * max(1.0, abs(ref)), (q, t, ours, ref)


def write_zeta(outdir):
    zs = []
    n = 1
    while True:
        g = float(mpmath.zetazero(n).imag)
        if g > ZETA_HEIGHT:
            break
        zs.append(g)
        n += 1
    with open(f"{outdir}/zeta_zeros.txt", "w") as fh:
        fh.write("# Ordinates of the nontrivial zeros of the Riemann zeta function.\n")
        fh.write("# Source: mpmath.zetazero, n = 1..%d (all zeros with 0 < gamma <= %g).\n"
                 % (len(zs), ZETA_HEIGHT))
        fh.write("# complete_to %g\n" % ZETA_HEIGHT)
        for g in zs:
            fh.write("%.9f\n" % g)
    print("zeta zeros:", len(zs))


def write_dirichlet(chars, outdir):
    lines = []
    covers = []
    total = 0
    for q, idx, parity, real, values in chars:
        if q == 1 or q > MAX_Q:
            continue
        check_against_mpmath(q, values, [3.3, 17.1])
        roots = zeros_of(q, values, parity, DIRICHLET_HEIGHT)
        expect = certified_count(q, values, parity, DIRICHLET_HEIGHT)
        assert len(roots) == expect, f"{q}:{idx}: found {len(roots)}, argument principle {expect}"
        if real:
            assert no_real_zero(q, values), f"{q}:{idx} has a real zero"
            # symmetric; list gamma > 0 only
            roots = [r for r in roots if r > 0]
        covers.append(f"{q}:{idx}")
        for r in sorted(roots):
            lines.append(f"{q} {idx} 0.5 {r:.9f}")
        total += len(roots)
    with open(f"{outdir}/dirichlet_zeros.txt", "w") as fh:
        fh.write("# Nontrivial zeros of L(s, chi) for every primitive character of modulus\n")
        fh.write("# 3..%d, labelled q:index as in the crate's character tables.\n" % MAX_Q)
        fh.write("# Located as sign changes of the Hardy-type Z function on Re(s) = 1/2 and\n")
        fh.write("# certified complete by an argument-principle count (scripts/gen_zero_fixtures.py).\n")
        fh.write("# Real characters list gamma > 0 only; the loader mirrors them.\n")
        fh.write("# No real character here has a zero on [1/2, 1).\n")
        fh.write("# complete_to %g\n" % DIRICHLET_HEIGHT)
        for i in range(0, len(covers), 10):
            fh.write("# covers " + " ".join(covers[i:i + 10]) + "\n")
        fh.write("# q index beta gamma\n")
        for line in lines:
            fh.write(line + "\n")
    print("characters:", len(covers), "zeros:", total)


def main():
    chars = parse_characters(sys.argv[1])
    outdir = sys.argv[2]
    write_dirichlet(chars, outdir)
    write_zeta(outdir)


if __name__ == "__main__":
    main()

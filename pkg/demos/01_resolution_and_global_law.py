"""Spectral resolution and the global law.

Draws one GUE matrix and compares the smoothed empirical spectral measure
(the imaginary part of its Stieltjes transform) with the semicircle curve,
at a resolution coarser and finer than the eigenvalue spacing.
"""

import numpy as np

from rmtlab import ensemble, semicircle

N = 500
H = ensemble.sample_wigner(ensemble.gue(N), seed=1)
lam = np.linalg.eigvalsh(H.entries)

print(f"one GUE matrix, N = {N}")
print(f"  eigenvalue range      [{lam[0]:+.3f}, {lam[-1]:+.3f}]")
print(f"  mean spacing at E = 0 {1.0 / (N * semicircle.density(0.0)):.5f}")

for alpha in (0.8, 1.2):
    eta = N ** -alpha
    print(f"\nresolution eta = N^-{alpha} = {eta:.4f} "
          f"({'above' if alpha < 1 else 'below'} the spacing scale)")
    errs = []
    for E in np.linspace(-2.2, 2.2, 45):
        z = complex(E, eta)
        s = np.mean(1.0 / (lam - z))
        m = semicircle.stieltjes_m(z)
        errs.append(abs(s.imag - m.imag) / np.pi)
    print(f"  sup_E |Im s - Im m|/pi = {max(errs):.4f}")
    print("  (smooth agreement above the spacing, wild fluctuations below)")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 3.2), sharey=True)
    Es = np.linspace(-2.4, 2.4, 600)
    for ax, alpha in zip(axes, (0.8, 1.2)):
        eta = N ** -alpha
        s = np.array([np.mean(1.0 / (lam - complex(E, eta))) for E in Es])
        m = semicircle.stieltjes_m(Es + 1j * eta)
        ax.plot(Es, s.imag / np.pi, "r", lw=0.8, label="empirical")
        ax.plot(Es, m.imag / np.pi, "b", lw=1.2, label="semicircle")
        ax.vlines(lam, 0, 0.03, color="k", lw=0.2)
        ax.set_title(f"eta = N^-{alpha}")
        ax.set_xlabel("E")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig("demo01_resolution.png", dpi=120)
    print("\nwrote demo01_resolution.png")
except ImportError:
    pass

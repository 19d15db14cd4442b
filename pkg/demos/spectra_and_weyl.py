"""Walkthrough: Laplacian spectra on a few small metric graphs.

Builds the standard zoo (interval, loop, star), computes spectra under
different vertex conditions, and checks the eigenvalue count against the
leading Weyl term N(k) ~ total_length * k / pi.
"""

import numpy as np

import graphbec as gb


def banner(text):
    print()
    print(text)
    print("-" * len(text))


banner("Interval of length pi, Dirichlet ends")
g = gb.interval(np.pi)
spec = gb.positive_spectrum(g, gb.preset_dirichlet(g), 120.0)
print("eigenvalues:", np.round(spec.nonnegatives, 8))
print("(exactly n^2 -- the textbook particle in a box)")

banner("Same interval, Neumann ends")
spec = gb.positive_spectrum(g, gb.preset_neumann(g), 120.0)
print("eigenvalues:", np.round(spec.nonnegatives, 8))
print("(zero mode plus n^2, scaled by (pi/l)^2 = 1 here)")

banner("Loop of length 2 pi with a Kirchhoff vertex")
lp = gb.loop(2 * np.pi)
spec = gb.positive_spectrum(lp, gb.preset_kirchhoff(lp), 30.0)
for e, m in zip(spec.nonnegatives, spec.nonnegative_mults):
    print(f"  E = {e:8.5f}   multiplicity {m}")
print("(travelling waves e^{+-inx}: every positive level is doubly degenerate)")

banner("3-star with an attractive delta coupling at the centre")
star = gb.star(3)
vc = gb.preset_delta(star, {1: -3.0, 2: 0.0, 3: 0.0, 4: 0.0})
summary = gb.l_spectrum(vc)
print("L eigenvalues on ker P:", summary.eigenvalues)
print("largest:", summary.l_max, "-> expect one bound state")
full = gb.full_spectrum(star, vc, 20.0)
print("negative branch:", full.negatives)
print("ground state energy:", full.ground_energy)

banner("Weyl count sanity")
for name, graph, conditions in [
    ("interval/Dirichlet", g, gb.preset_dirichlet(g)),
    ("loop/Kirchhoff", lp, gb.preset_kirchhoff(lp)),
    ("star/Kirchhoff", star, gb.preset_kirchhoff(star)),
]:
    spec = gb.positive_spectrum(graph, conditions, 1000.0)
    dev = gb.weyl_deviation(spec)
    budget = 2 * graph.num_edges + graph.vertex_count
    print(f"  {name:20s} sup |N(k) - Lk/pi| = {dev:5.2f}   (allowed {budget})")

banner("Bracketing: Kirchhoff sits between decoupled Dirichlet and Neumann")
kirch = np.repeat(*gb.positive_spectrum(star, gb.preset_kirchhoff(star), 120.0).levels())
n = np.arange(1, 5)
dirichlet = np.sort(np.concatenate([(n * np.pi) ** 2] * 3))
neumann = np.sort(np.concatenate([np.concatenate([[0.0], (n * np.pi) ** 2])] * 3))
count = min(len(kirch), len(dirichlet), len(neumann))
print("  level   neumann <= kirchhoff <= dirichlet")
for i in range(min(count, 7)):
    print(f"  {i + 1:5d}   {neumann[i]:9.4f}    {kirch[i]:9.4f}    {dirichlet[i]:9.4f}")

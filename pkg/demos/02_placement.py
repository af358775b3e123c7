"""
Placing Simple and Threshold-based Spreaders
============================================

theta is the fraction of Simple Spreaders (SS). Placement decides which
nodes get that role: uniformly, with TBS drawn toward hubs, with SS drawn
toward hubs, or with an SS probability decaying as k**-eta. The realized
per-degree SS fraction theta_k shows the difference.
"""

import numpy as np

from mixcascade import GeneratorSpec, Strategy, assign, generate
from mixcascade.placement import realized_theta_k

net = generate(GeneratorSpec("SFBA", rng_seed=3))
rng = np.random.default_rng(0)
theta = 0.5

classes = [2, 3, 4, 6, 10]
print("strategy          " + "".join(f"  k={k:<3d}" for k in classes) + "   SS count")
for strategy in Strategy:
    # average theta_k over 50 placements
    acc = {k: [] for k in classes}
    for _ in range(50):
        a = assign(net, theta, strategy, rng, eta=1.0)
        tk = realized_theta_k(a, net)
        for k in classes:
            if k in tk:
                acc[k].append(tk[k])
    row = "".join(f"  {np.mean(acc[k]):.2f} " for k in classes)
    print(f"{strategy.value:16s}{row}   {a.ss_count}")

# the count is always round(theta * Z), halves rounded up
print("\nSS counts for theta = 0.0005, 0.0015, 0.5:",
      [assign(net, t, Strategy.RANDOM, rng).ss_count for t in (0.0005, 0.0015, 0.5)])

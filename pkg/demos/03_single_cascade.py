"""
One cascade, step by step
=========================

A run starts from random seeds. Each iteration picks one node: an inactive
SS copies a random neighbor, an inactive TBS activates once more than a
fraction Gamma of its neighbors are active. We follow a few runs and
write an activation trace.
"""

import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from mixcascade import CascadeConfig, GeneratorSpec, Strategy, assign, build_network, generate, run_cascade
from mixcascade.cascade import write_trace
from mixcascade.placement import ProfileAssignment

# the smallest interesting case: a star whose TBS center never sees more than 1/4 active
star = build_network([(0, i) for i in range(1, 5)], 5)
roles = ProfileAssignment(np.array([False, True, True, True, True]), 0.8)
res = run_cascade(star, roles, CascadeConfig(Fraction(1, 2)), seeds=[1])
print(f"star: x={res.cascade_size}, {res.termination.name}, after {res.iterations_used} iterations")

# the same idea at scale: hubs held by TBS block spreading until SS are plentiful
net = generate(GeneratorSpec("SFBA", rng_seed=0))
rng = np.random.default_rng(0)
for theta in (0.3, 0.5, 0.7, 0.9):
    a = assign(net, theta, Strategy.TBS_BY_DEGREE, rng)
    sizes = [run_cascade(net, a, CascadeConfig(0.5), rng=rng).cascade_size for _ in range(200)]
    print(f"theta={theta}: mean x={np.mean(sizes):.3f}, runs reaching 90%: {np.mean(np.array(sizes) > 0.9):.2f}")

# a trace lists every activation with its cause
a = assign(net, 0.9, Strategy.RANDOM, rng)
res = run_cascade(net, a, CascadeConfig(0.25, n_seeds=2), rng=rng)
path = Path(tempfile.mkdtemp()) / "trace.tsv"
write_trace(res, a, path)
lines = path.read_text().splitlines()
print(f"\ntrace: {len(lines)} lines, first three and last:")
print("\n".join(lines[:3] + ["..."] + lines[-1:]))

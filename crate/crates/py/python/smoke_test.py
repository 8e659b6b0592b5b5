"""Smoke test for the ringmod extension: build with `maturin develop` (or install the
wheel), then run `python python/smoke_test.py`."""

import json
import math

import ringmod


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(b))


one = ringmod.QField.constant(1.0)
assert close(ringmod.ring_norm(one, 3.0, 1.0)[0], (2 * math.pi) ** 2)

value, err, degeneracy = ringmod.lower_modulus_bound(one, 2.0, 0.5, 1.0)
assert close(value, math.log(2) / (2 * math.pi)) and degeneracy == "regular"
assert close(ringmod.circle_family_modulus(2.0, 0.5, 1.0), value)
assert close(ringmod.annulus_capacity(2.0, 0.5, 1.0), 2 * math.pi / math.log(2))

phi = [0.5 + (i % 7) for i in range(200)]
mu = [1.0 / 200] * 200
closed, alpha0 = ringmod.weighted_infimum_closed(phi, mu, 1.5)
assert close(sum(a * w for a, w in zip(alpha0, mu)), 1.0, 1e-12)
assert close(ringmod.weighted_infimum_numeric(phi, mu, 1.5), closed, 1e-6)

assert close(ringmod.area_bound(one, 2.0, 0.5)[0], math.pi / 4)
contraction = ringmod.RadialMap.power(0.5)
assert close(ringmod.area_bound(ringmod.QField.constant(2.0), 2.0, 0.25)[0], contraction.image_disk_area(0.25))
identity = ringmod.RadialMap.identity()
assert abs(ringmod.liminf_ratio(identity, ringmod.QField.dilatation(identity, 3.0), 3.0) - 1.0) < 1e-6

rows = ringmod.check_capacity_bounds(0.5, 1.0, [1.5, 2.0])
assert rows and all(r[5] != "fail" for r in rows)

value, _ = ringmod.compute("annulus_capacity", q=2, r1=0.5, r2=1)
assert close(value, 9.064720284, 1e-10)

config = {"p_values": [2, 3], "maps": [{"alpha": 1}], "radii": {"spacing": "geometric"}}
rows, code = ringmod.run_checks("area", json.dumps(config))
assert code == 0 and len(rows) == 18

try:
    ringmod.QField.constant(-1.0)
except ValueError:
    pass
else:
    raise AssertionError("negative weight accepted")

print("ringmod smoke test passed")

#!/usr/bin/env python3
# Copyright 2026 The THA Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Recomputes the hand-derived reference values used by the unit tests.

Everything here is written from the model equations in plain Python, with no
reference to the C++ sources. The output is frozen into
tests/oracle/expected_values.json; the C++ suites compare against it.

    python3 tools/oracle_values.py > tests/oracle/expected_values.json
"""

import json
import math


def lif(u, z_prev, current, beta, theta):
    u_new = beta * u + current - z_prev * theta
    return u_new, 1.0 if u_new >= theta else 0.0


def surrogate(u, theta0, k):
    d = 1.0 + k * abs(theta0 - u)
    return 1.0 / (d * d)


def anneal(theta, theta_inf, alpha):
    return theta + alpha * (theta_inf - theta)


def closed_form(theta0, theta_inf, alpha, gamma):
    return theta_inf - (1.0 - alpha) ** gamma * (theta_inf - theta0)


def main():
    v = {}

    v["lif.rest"] = list(lif(0.0, 0.0, 0.0, 0.9, 1.0))
    u1, z1 = lif(0.0, 0.0, 1.0, 0.9, 1.0)
    u2, z2 = lif(u1, z1, 0.0, 0.9, 1.0)
    v["lif.fire"] = [u1, z1]
    v["lif.fire_next"] = [u2, z2]
    v["lif.inhibit"] = list(lif(0.5, 0.0, -1.0, 0.8, 1.0))

    # Single neuron, beta=0, theta=1, weight +1, inputs [1, 0, 1].
    u, z, spikes = 0.0, 0.0, []
    for x in [1.0, 0.0, 1.0]:
        u, z = lif(u, z, 1.0 * x, 0.0, 1.0)
        spikes.append(z)
    v["forward.single_neuron_spikes"] = spikes

    v["surrogate.at_theta0"] = surrogate(10.0, 10.0, 1.0)
    v["surrogate.rest_theta10_k1"] = surrogate(0.0, 10.0, 1.0)
    v["surrogate.k0"] = surrogate(-3.7, 2.0, 0.0)

    v["beta.tau10_dt1"] = 1.0 - 1.0 / 10.0
    v["beta.tau_eq_dt"] = 1.0 - 3.0 / 3.0
    v["beta.tau1000_dt1"] = 1.0 - 1.0 / 1000.0

    v["init.bound_cols4"] = math.sqrt(1.0 / 4.0)
    v["init.bound_cols100"] = math.sqrt(1.0 / 100.0)

    v["anneal.step_5_50_5e-3"] = anneal(5.0, 50.0, 5e-3)
    v["anneal.closed_form_gamma1"] = closed_form(5.0, 50.0, 5e-3, 1)
    v["anneal.fixed_point"] = anneal(50.0, 50.0, 0.3)
    v["anneal.alpha1"] = anneal(5.0, 50.0, 1.0)
    v["anneal.delta_gamma10"] = 5e-3 * (1 - 5e-3) ** 10 * (50.0 - 5.0)

    for name, delta in [("bound.delta0.2", 0.2), ("bound.delta0.6", 0.6)]:
        headroom = 1.5 - 1.0
        v[name] = {"headroom": headroom, "violated": delta >= headroom}

    lhs = (1 - 0.1) * 1.0 + 0.1 * 2.0
    v["rate.lhs_theta1_inf2_a0.1"] = lhs
    v["rate.c1_rhs1.5"] = lhs < 1.5
    v["rate.c2_zw1.5_inf2"] = 2.0 < 1.5

    v["mse.y10_u00"] = (1.0 - 0.0) ** 2 + (0.0 - 0.0) ** 2
    v["mse.grad_y10_u00"] = [-2.0 * (1.0 - 0.0), -2.0 * (0.0 - 0.0)]

    def count_loss(counts, correct, steps):
        total = 0.0
        for j, c in enumerate(counts):
            target = (0.8 if j == correct else 0.2) * steps
            total += (target - c) ** 2
        return total

    v["count.t10_8_2"] = count_loss([8, 2], 0, 10)
    v["count.t10_2_8"] = count_loss([2, 8], 0, 10)
    v["count.t100_silent10"] = count_loss([0] * 10, 3, 100)
    v["count.t100_exact"] = count_loss([80] + [20] * 9, 0, 100)

    # SGD with momentum, m=0.9, lr=1e-3, g=1 twice from v=0, p=0.
    p, vel = 0.0, 0.0
    for _ in range(2):
        vel = 0.9 * vel + 1.0
        p = p - 1e-3 * vel
    v["sgd.two_steps"] = p

    # Adam first step, lr=1e-3, g=0.37.
    g, lr, b1, b2, eps = 0.37, 1e-3, 0.9, 0.999, 1e-8
    m = (1 - b1) * g
    s = (1 - b2) * g * g
    mhat = m / (1 - b1 ** 1)
    shat = s / (1 - b2 ** 1)
    v["adam.step1_g0.37"] = 0.0 - lr * mhat / (math.sqrt(shat) + eps)
    v["adam.step1_expected_approx"] = -lr * g / (abs(g) + eps)

    eta0, period = 0.01, 40
    v["cosine.start"] = 0.5 * eta0 * (1 + math.cos(math.pi * 0 / period))
    v["cosine.half"] = 0.5 * eta0 * (1 + math.cos(math.pi * 20 / period))
    v["cosine.end"] = 0.5 * eta0 * (1 + math.cos(math.pi * 39 / period))
    v["cosine.restart"] = 0.5 * eta0 * (1 + math.cos(math.pi * (40 % 40) / period))

    v["clip.scale_norm4"] = 1.0 / 4.0

    peak = 1.1 * 50.0
    v["target.t75_theta50"] = peak * 75 / 75
    v["target.t0"] = peak * 0 / 75

    v["census.reduction_0.2_0.9"] = (0.9 - 0.2) / 0.9

    print(json.dumps(v, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
